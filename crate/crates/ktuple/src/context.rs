//! Problem setup: the candidate pool, the prime sets, and the residue table.
//!
//! For a target size `k` the search works inside a fixed pool `V ⊆ [0, U]`:
//! values congruent to 1 mod any "sieve prime" (the primes below
//! `sqrt(k·ln k)`) are removed up front, which pins the free residue class of
//! those primes to 1 and takes them out of play. Primes whose rows stay
//! partially free even when the whole pool is occupied can never be violated
//! by a subset, so they are exempt from bookkeeping too. What remains is the
//! small set of "active" primes the incremental state has to track.

use crate::primes::primes_up_to;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContextError {
    #[error("target size must be at least 2, got {0}")]
    KTooSmall(usize),
    #[error("search bound {bound} leaves only {survivors} candidates for k = {k}")]
    PoolTooSmall { bound: i64, survivors: usize, k: usize },
    #[error("candidate pool must be strictly increasing and non-negative")]
    BadPool,
}

/// Immutable per-run data: candidate pool, prime classification, residues.
///
/// Shared read-only by every state and operator of one solve.
#[derive(Debug)]
pub struct ProblemContext {
    k: usize,
    bound: i64,
    candidates: Vec<i64>,
    full_primes: Vec<i64>,
    sieve_primes: Vec<i64>,
    exempt_primes: Vec<i64>,
    active_primes: Vec<i64>,
    /// Free-class count per full prime when the whole pool is occupied.
    pool_free_counts: Vec<u32>,
    /// Residues of every candidate against every active prime, row per candidate.
    residues: Vec<u32>,
}

/// Default search bound: `ceil(1.5 * (k ln k + k))`.
pub fn default_search_bound(k: usize) -> i64 {
    let kf = k as f64;
    (1.5 * (kf * kf.ln() + kf)).ceil() as i64
}

/// Build the standard context for target size `k` over `[0, bound]`.
pub fn build_context(k: usize, bound: i64) -> Result<ProblemContext, ContextError> {
    if k < 2 {
        return Err(ContextError::KTooSmall(k));
    }
    let full_primes = primes_up_to(k as i64);
    let threshold = (k as f64 * (k as f64).ln()).sqrt();
    let sieve_primes: Vec<i64> = full_primes
        .iter()
        .copied()
        .filter(|&p| (p as f64) < threshold)
        .collect();
    let candidates: Vec<i64> = (0..=bound)
        .filter(|&v| sieve_primes.iter().all(|&p| v % p != 1))
        .collect();
    assemble(k, bound, candidates, full_primes, sieve_primes)
}

/// Build a context from an explicit pool and prime list, bypassing the sieve.
///
/// Every given prime is kept active unless the pool itself leaves it a free
/// class. Used for fixtures and for improving externally supplied tuples.
pub fn custom_context(
    k: usize,
    candidates: Vec<i64>,
    primes: Vec<i64>,
) -> Result<ProblemContext, ContextError> {
    if k < 2 {
        return Err(ContextError::KTooSmall(k));
    }
    let bound = *candidates.last().ok_or(ContextError::BadPool)?;
    assemble(k, bound, candidates, primes, Vec::new())
}

fn assemble(
    k: usize,
    bound: i64,
    candidates: Vec<i64>,
    full_primes: Vec<i64>,
    sieve_primes: Vec<i64>,
) -> Result<ProblemContext, ContextError> {
    if candidates.len() < k {
        return Err(ContextError::PoolTooSmall { bound, survivors: candidates.len(), k });
    }
    if candidates[0] < 0 || candidates.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ContextError::BadPool);
    }

    let mut pool_free_counts = Vec::with_capacity(full_primes.len());
    for &p in &full_primes {
        let mut seen = vec![false; p as usize];
        for &v in &candidates {
            seen[(v % p) as usize] = true;
        }
        pool_free_counts.push(seen.iter().filter(|s| !**s).count() as u32);
    }

    let mut exempt_primes = Vec::new();
    let mut active_primes = Vec::new();
    for (&p, &f) in full_primes.iter().zip(&pool_free_counts) {
        if f > 0 {
            exempt_primes.push(p);
        } else {
            active_primes.push(p);
        }
    }

    let mut residues = Vec::with_capacity(candidates.len() * active_primes.len());
    for &v in &candidates {
        for &p in &active_primes {
            residues.push((v % p) as u32);
        }
    }

    Ok(ProblemContext {
        k,
        bound,
        candidates,
        full_primes,
        sieve_primes,
        exempt_primes,
        active_primes,
        pool_free_counts,
        residues,
    })
}

impl ProblemContext {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    /// The candidate pool, strictly increasing.
    pub fn candidates(&self) -> &[i64] {
        &self.candidates
    }

    /// All primes up to `k`.
    pub fn full_primes(&self) -> &[i64] {
        &self.full_primes
    }

    /// Primes removed from play by the pool sieve (class 1 emptied).
    pub fn sieve_primes(&self) -> &[i64] {
        &self.sieve_primes
    }

    /// Primes that keep a free class even when the whole pool is occupied.
    pub fn exempt_primes(&self) -> &[i64] {
        &self.exempt_primes
    }

    /// The primes the incremental bookkeeping actually tracks.
    pub fn active_primes(&self) -> &[i64] {
        &self.active_primes
    }

    /// Free-class counts per full prime with the whole pool occupied.
    pub fn pool_free_counts(&self) -> &[u32] {
        &self.pool_free_counts
    }

    /// Number of active primes, i.e. bookkeeping rows.
    pub fn rows(&self) -> usize {
        self.active_primes.len()
    }

    /// Position of `v` in the candidate pool, if present.
    pub fn index_of(&self, v: i64) -> Option<usize> {
        self.candidates.binary_search(&v).ok()
    }

    /// Residues of candidate number `idx` against each active prime.
    pub fn residue_row(&self, idx: usize) -> &[u32] {
        let n = self.active_primes.len();
        &self.residues[idx * n..(idx + 1) * n]
    }

    /// Fraction of `[0, bound]` surviving the pool sieve.
    pub fn surviving_fraction(&self) -> f64 {
        self.candidates.len() as f64 / (self.bound + 1) as f64
    }
}
