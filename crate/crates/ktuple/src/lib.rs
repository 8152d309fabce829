//! Narrow admissible k-tuples: sieve constructions, adaptive local search,
//! and independent verification.
//!
//! An admissible k-tuple is a strictly increasing list of k integers that, for
//! every prime p ≤ k, leaves at least one residue class mod p untouched. The
//! library looks for tuples of minimal span: classical sieve baselines produce
//! good starting material, and a database-driven local search contracts them
//! further. A separate verifier and an exhaustive small-case oracle keep the
//! search honest.
//!
//! # Example
//!
//! ```
//! use ktuple::{rals_solve, RalsConfig, full_verify};
//!
//! let report = rals_solve(7, &RalsConfig::best().with_iterations(50)).unwrap();
//! assert_eq!(full_verify(&report.tuple, 7), Ok(()));
//! assert_eq!(report.diameter, 20);
//! ```

pub mod baselines;
pub mod context;
pub mod operators;
pub mod primes;
pub mod rals;
pub mod state;
pub mod tuplefile;
pub mod verify;

pub use context::{build_context, custom_context, default_search_bound, ProblemContext};
pub use rals::{rals_solve, RalsConfig, RalsReport};
pub use state::{diameter_of, symmetric_distance, TupleState};
pub use verify::{brute_force_optimal, full_verify, per_start_optimal};
