//! Independent verification and exact small-case optimization.
//!
//! Everything here recomputes primes and residues from scratch rather than
//! reusing the solver's context or bookkeeping, so a bug in the incremental
//! machinery cannot hide behind a matching bug in its own checker.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("expected {expected} elements, got {got}")]
    WrongSize { expected: usize, got: usize },
    #[error("tuple is not strictly increasing at position {position}")]
    NotIncreasing { position: usize },
    #[error("tuple occupies every residue class mod {prime}")]
    Inadmissible { prime: i64 },
}

/// Check `tuple` is a strictly increasing admissible k-tuple from first
/// principles: every prime up to `k` must miss at least one residue class.
/// Reports the smallest failing prime.
pub fn full_verify(tuple: &[i64], k: usize) -> Result<(), VerifyError> {
    if tuple.len() != k {
        return Err(VerifyError::WrongSize { expected: k, got: tuple.len() });
    }
    for (i, pair) in tuple.windows(2).enumerate() {
        if pair[0] >= pair[1] {
            return Err(VerifyError::NotIncreasing { position: i + 1 });
        }
    }
    for p in small_primes(k as i64) {
        let mut hit = vec![false; p as usize];
        let mut distinct = 0;
        for &v in tuple {
            let r = v.rem_euclid(p) as usize;
            if !hit[r] {
                hit[r] = true;
                distinct += 1;
            }
        }
        if distinct == p {
            return Err(VerifyError::Inadmissible { prime: p });
        }
    }
    Ok(())
}

/// Private sieve so the verifier stays independent of the solver's helpers.
fn small_primes(n: i64) -> Vec<i64> {
    let mut out = Vec::new();
    'outer: for q in 2..=n {
        for d in 2..q {
            if d * d > q {
                break;
            }
            if q % d == 0 {
                continue 'outer;
            }
        }
        out.push(q);
    }
    out
}

/// Largest `k` the exhaustive optimizers accept.
pub const BRUTE_FORCE_MAX_K: usize = 12;
pub const PER_START_MAX_K: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("exhaustive search supports k up to {max}, got {got}")]
    KTooLarge { max: usize, got: usize },
    #[error("no admissible tuple of size {k} fits below the cap {cap}")]
    Infeasible { k: usize, cap: i64 },
}

/// Exact minimum diameter over all admissible k-tuples, with a witness
/// anchored at 0. Depth-first search with branch-and-bound on the diameter;
/// refuses `k > BRUTE_FORCE_MAX_K` rather than running unbounded.
pub fn brute_force_optimal(k: usize, cap: i64) -> Result<(i64, Vec<i64>), OracleError> {
    if k > BRUTE_FORCE_MAX_K {
        return Err(OracleError::KTooLarge { max: BRUTE_FORCE_MAX_K, got: k });
    }
    let mut search = Search::new(k, cap);
    search.push(0);
    search.run(0);
    search.best_tuple.map(|t| (search.best_d, t)).ok_or(OracleError::Infeasible { k, cap })
}

/// Exact minimum diameter among admissible k-tuples drawn from `pool` whose
/// first element is `start`. `None` when no such tuple exists under the cap.
pub fn per_start_optimal(
    k: usize,
    start: i64,
    pool: &[i64],
    cap: i64,
) -> Result<Option<(i64, Vec<i64>)>, OracleError> {
    if k > PER_START_MAX_K {
        return Err(OracleError::KTooLarge { max: PER_START_MAX_K, got: k });
    }
    if !pool.contains(&start) {
        return Ok(None);
    }
    let mut search = Search::new(k, cap);
    search.pool = Some(pool.iter().copied().filter(|&v| v >= start && v - start <= cap).collect());
    search.base = start;
    search.push(start);
    search.run(start);
    Ok(search.best_tuple.map(|t| (search.best_d, t)))
}

/// Occupancy-tracking DFS state, written against the raw definition.
struct Search {
    k: usize,
    cap: i64,
    primes: Vec<i64>,
    occupied: Vec<Vec<u32>>,
    distinct: Vec<i64>,
    current: Vec<i64>,
    base: i64,
    pool: Option<Vec<i64>>,
    best_d: i64,
    best_tuple: Option<Vec<i64>>,
}

impl Search {
    fn new(k: usize, cap: i64) -> Self {
        let primes = small_primes(k as i64);
        let occupied = primes.iter().map(|&p| vec![0u32; p as usize]).collect();
        Search {
            k,
            cap,
            distinct: vec![0; primes.len()],
            occupied,
            primes,
            current: Vec::new(),
            base: 0,
            pool: None,
            best_d: i64::MAX,
            best_tuple: None,
        }
    }

    /// True when adding `v` would occupy the last free class of some prime.
    fn blocked(&self, v: i64) -> bool {
        self.primes.iter().enumerate().any(|(i, &p)| {
            self.distinct[i] == p - 1 && self.occupied[i][(v % p) as usize] == 0
        })
    }

    fn push(&mut self, v: i64) {
        for (i, &p) in self.primes.iter().enumerate() {
            let r = (v % p) as usize;
            if self.occupied[i][r] == 0 {
                self.distinct[i] += 1;
            }
            self.occupied[i][r] += 1;
        }
        self.current.push(v);
    }

    fn pop(&mut self) {
        let v = self.current.pop().unwrap();
        for (i, &p) in self.primes.iter().enumerate() {
            let r = (v % p) as usize;
            self.occupied[i][r] -= 1;
            if self.occupied[i][r] == 0 {
                self.distinct[i] -= 1;
            }
        }
    }

    fn run(&mut self, last: i64) {
        if self.current.len() == self.k {
            let d = last - self.base;
            if d < self.best_d {
                self.best_d = d;
                self.best_tuple = Some(self.current.clone());
            }
            return;
        }
        let remaining = (self.k - self.current.len()) as i64;
        match &self.pool {
            None => {
                for v in last + 1..=self.base + self.cap {
                    // Even the tightest packing of the remaining values cannot
                    // beat the incumbent from here.
                    if v - self.base + (remaining - 1) >= self.best_d {
                        break;
                    }
                    if self.blocked(v) {
                        continue;
                    }
                    self.push(v);
                    self.run(v);
                    self.pop();
                }
            }
            Some(pool) => {
                let pool = pool.clone();
                for &v in pool.iter().filter(|&&v| v > last) {
                    if v - self.base + (remaining - 1) >= self.best_d || v - self.base > self.cap {
                        break;
                    }
                    if self.blocked(v) {
                        continue;
                    }
                    self.push(v);
                    self.run(v);
                    self.pop();
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_accepts_known_tuples() {
        assert_eq!(full_verify(&[0, 2, 8, 12, 14, 18, 30], 7), Ok(()));
        assert_eq!(full_verify(&[0, 2, 6, 8, 12, 18, 20], 7), Ok(()));
        assert_eq!(full_verify(&[5, 7, 11], 3), Ok(()));
    }

    #[test]
    fn verify_reports_smallest_failing_prime() {
        assert_eq!(
            full_verify(&[0, 1, 2], 3),
            Err(VerifyError::Inadmissible { prime: 2 })
        );
        // All even, but covering every class mod 3.
        assert_eq!(
            full_verify(&[0, 2, 4], 3),
            Err(VerifyError::Inadmissible { prime: 3 })
        );
    }

    #[test]
    fn verify_rejects_malformed_input() {
        assert_eq!(
            full_verify(&[0, 2], 3),
            Err(VerifyError::WrongSize { expected: 3, got: 2 })
        );
        assert_eq!(
            full_verify(&[0, 2, 2], 3),
            Err(VerifyError::NotIncreasing { position: 2 })
        );
    }

    #[test]
    fn verify_handles_negative_values() {
        assert_eq!(full_verify(&[-6, -2, 0], 3), Ok(()));
    }

    #[test]
    fn oracle_matches_known_records() {
        // Record diameters for the smallest sizes.
        let expected = [
            (2, 2),
            (3, 6),
            (4, 8),
            (5, 12),
            (6, 16),
            (7, 20),
            (8, 26),
        ];
        for (k, d) in expected {
            let (got, witness) = brute_force_optimal(k, 80).unwrap();
            assert_eq!(got, d, "k={k}");
            assert_eq!(full_verify(&witness, k), Ok(()));
            assert_eq!(witness[0], 0);
            assert_eq!(witness[k - 1] - witness[0], d);
        }
    }

    #[test]
    fn oracle_refuses_large_k() {
        assert_eq!(
            brute_force_optimal(13, 100).unwrap_err(),
            OracleError::KTooLarge { max: 12, got: 13 }
        );
    }

    #[test]
    fn oracle_reports_infeasible_caps() {
        assert_eq!(
            brute_force_optimal(5, 6).unwrap_err(),
            OracleError::Infeasible { k: 5, cap: 6 }
        );
    }

    #[test]
    fn per_start_on_even_pool() {
        // Evens up to 30: the best 5-tuple starting at 0 spans 12.
        let pool: Vec<i64> = (0..=30).filter(|v| v % 2 == 0).collect();
        let (d, witness) = per_start_optimal(5, 0, &pool, 30).unwrap().unwrap();
        assert_eq!(d, 12);
        assert_eq!(witness[0], 0);
        assert_eq!(full_verify(&witness, 5), Ok(()));
    }

    #[test]
    fn per_start_detects_infeasible_starts() {
        let pool: Vec<i64> = (0..=30).filter(|v| v % 2 == 0).collect();
        // Starting at 28 leaves no room for five values under the cap.
        assert_eq!(per_start_optimal(5, 28, &pool, 30).unwrap(), None);
        // A start outside the pool is infeasible by definition.
        assert_eq!(per_start_optimal(5, 1, &pool, 30).unwrap(), None);
    }
}
