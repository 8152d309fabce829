//! Classical constructions of narrow admissible tuples: prime windows,
//! interval sieves, and a greedy class-removal refinement.
//!
//! Each construction returns an admissible k-tuple on its own; they serve as
//! quality baselines for the adaptive search and as reference points in the
//! benchmark command. The interval sieves share a sliding window scanner
//! that finds the narrowest admissible run of k survivors in one pass.

use crate::primes::{next_prime, primes_after, primes_up_to};

/// First-order size estimate of a narrow k-tuple's span, used to size sieve
/// intervals before any survivors are known.
fn span_estimate(k: usize) -> f64 {
    let kf = k as f64;
    kf * kf.ln() + kf
}

fn grow(x: i64) -> i64 {
    x * 7 / 5
}

/// The k smallest primes larger than k. Admissible because no element is
/// divisible by any prime up to k.
pub fn primes_past_k(k: usize) -> Vec<i64> {
    primes_after(k as i64, k)
}

/// Narrowest admissible window of k consecutive primes whose first prime is
/// at most the k-th prime beyond 2k. Windows reaching below k are scanned
/// too; the sliding check simply rejects the inadmissible ones.
pub fn eratosthenes_tuple(k: usize) -> Vec<i64> {
    let start_cap = *primes_after(2 * k as i64, k).last().unwrap();
    let mut pool = primes_up_to(start_cap);
    pool.extend(primes_after(start_cap, k));
    let primes = primes_up_to(k as i64);
    best_window(&pool, k, &primes, Some((0, start_cap)))
        .expect("primes past k form an admissible fallback window")
        .1
}

/// Survivors of the interval [lo, hi]: the values of the kept parity not
/// divisible by any odd prime up to `pm`.
fn interval_survivors(lo: i64, hi: i64, pm: i64, keep_even: bool) -> Vec<i64> {
    let n = (hi - lo + 1) as usize;
    let parity = if keep_even { 0 } else { 1 };
    let mut keep: Vec<bool> = (0..n).map(|i| (lo + i as i64).rem_euclid(2) == parity).collect();
    for p in primes_up_to(pm) {
        if p == 2 {
            continue;
        }
        let mut i = (-lo).rem_euclid(p) as usize;
        while i < n {
            keep[i] = false;
            i += p as usize;
        }
    }
    (0..n).filter(|&i| keep[i]).map(|i| lo + i as i64).collect()
}

/// Sliding admissibility checker: tracks, for each prime, how many residue
/// classes the current window occupies, so moving the window one survivor
/// costs one add and one remove.
struct WindowScan<'a> {
    primes: &'a [i64],
    counts: Vec<u32>,
    offsets: Vec<usize>,
    occupied: Vec<i64>,
    saturated: usize,
}

impl<'a> WindowScan<'a> {
    fn new(primes: &'a [i64]) -> Self {
        let mut offsets = Vec::with_capacity(primes.len());
        let mut total = 0;
        for &p in primes {
            offsets.push(total);
            total += p as usize;
        }
        WindowScan { primes, counts: vec![0; total], offsets, occupied: vec![0; primes.len()], saturated: 0 }
    }

    fn add(&mut self, v: i64) {
        for (i, &p) in self.primes.iter().enumerate() {
            let slot = self.offsets[i] + v.rem_euclid(p) as usize;
            self.counts[slot] += 1;
            if self.counts[slot] == 1 {
                self.occupied[i] += 1;
                if self.occupied[i] == p {
                    self.saturated += 1;
                }
            }
        }
    }

    fn remove(&mut self, v: i64) {
        for (i, &p) in self.primes.iter().enumerate() {
            let slot = self.offsets[i] + v.rem_euclid(p) as usize;
            self.counts[slot] -= 1;
            if self.counts[slot] == 0 {
                if self.occupied[i] == p {
                    self.saturated -= 1;
                }
                self.occupied[i] -= 1;
            }
        }
    }

    fn admissible(&self) -> bool {
        self.saturated == 0
    }
}

/// Minimum-diameter admissible window of k consecutive survivors, optionally
/// restricted to windows starting inside `start` (inclusive). Ties keep the
/// earliest window.
fn best_window(
    survivors: &[i64],
    k: usize,
    primes: &[i64],
    start: Option<(i64, i64)>,
) -> Option<(i64, Vec<i64>)> {
    if survivors.len() < k {
        return None;
    }
    let mut scan = WindowScan::new(primes);
    for &v in &survivors[..k] {
        scan.add(v);
    }
    let mut best: Option<(i64, usize)> = None;
    for a in 0..=survivors.len() - k {
        let h1 = survivors[a];
        let d = survivors[a + k - 1] - h1;
        let in_range = start.is_none_or(|(lo, hi)| lo <= h1 && h1 <= hi);
        if scan.admissible() && in_range && best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, a));
        }
        if a + k < survivors.len() {
            scan.remove(survivors[a]);
            scan.add(survivors[a + k]);
        }
    }
    best.map(|(d, a)| (d, survivors[a..a + k].to_vec()))
}

/// Bookkeeping for growing a sieve threshold: keeps the best window seen and
/// counts consecutive non-improving threshold steps once a first window
/// exists.
struct ThresholdRun {
    best: Option<(i64, Vec<i64>)>,
    stale: u32,
    patience: u32,
}

impl ThresholdRun {
    fn new(patience: u32) -> Self {
        ThresholdRun { best: None, stale: 0, patience }
    }

    fn offer(&mut self, got: Option<(i64, Vec<i64>)>) {
        match got {
            Some((d, t)) if self.best.as_ref().is_none_or(|(bd, _)| d < *bd) => {
                self.best = Some((d, t));
                self.stale = 0;
            }
            _ => {
                if self.best.is_some() {
                    self.stale += 1;
                }
            }
        }
    }

    fn settled(&self) -> bool {
        self.best.is_some() && self.stale >= self.patience
    }
}

/// Steps after which threshold growth stops once windows stop improving.
const THRESHOLD_PATIENCE: u32 = 8;

/// Sieve of the symmetric interval [-x/2, x/2]: survivors are the odd values
/// (so +-1 and +-odd numbers) coprime to every odd prime up to a threshold
/// that grows while the best admissible k-window keeps improving.
pub fn hensley_richards(k: usize) -> Vec<i64> {
    let primes = primes_up_to(k as i64);
    let cap = *primes.last().unwrap();
    let mut x = (2.4 * span_estimate(k)) as i64;
    let mut pm = 3;
    let mut run = ThresholdRun::new(THRESHOLD_PATIENCE);
    loop {
        let surv = loop {
            let s = interval_survivors(-(x / 2), x / 2, pm.min(cap), false);
            if s.len() >= k {
                break s;
            }
            x = grow(x);
        };
        run.offer(best_window(&surv, k, &primes, None));
        if run.settled() || pm >= cap {
            break;
        }
        pm = next_prime(pm);
    }
    // With every prime up to k sieved, any k survivors are admissible, so a
    // large enough interval always yields a window.
    while run.best.is_none() {
        x = grow(x);
        let surv = interval_survivors(-(x / 2), x / 2, cap, false);
        run.offer(best_window(&surv, k, &primes, None));
    }
    run.best.unwrap().1
}

/// Even-side interval sieve: survivors of [s, s+x] are the even values not
/// divisible by any odd prime up to the threshold. The unshifted variant
/// fixes s = 0; the shifted variant with `s = None` scans every start in
/// [-x/2, x/2] at once by sieving [-x/2, 3x/2] and restricting where the
/// window may begin, which yields the same minimum as a start-by-start scan.
pub fn schinzel(k: usize, shifted: bool, s: Option<i64>) -> Vec<i64> {
    let primes = primes_up_to(k as i64);
    let cap = *primes.last().unwrap();
    let mut pm = 3.max((k as f64 * (k as f64).ln()).sqrt() as i64);
    let mut x = (1.6 * span_estimate(k)) as i64;
    let mut run = ThresholdRun::new(THRESHOLD_PATIENCE);
    let sieve = |x: i64, pm: i64| -> (Vec<i64>, Option<(i64, i64)>) {
        match (shifted, s) {
            (false, _) => (interval_survivors(0, x, pm, true), None),
            (true, Some(s0)) => (interval_survivors(s0, s0 + x, pm, true), None),
            (true, None) => {
                (interval_survivors(-(x / 2), x + x / 2, pm, true), Some((-(x / 2), x / 2)))
            }
        }
    };
    loop {
        let (surv, range) = loop {
            let (sv, r) = sieve(x, pm.min(cap));
            if sv.len() >= k {
                break (sv, r);
            }
            x = grow(x);
        };
        run.offer(best_window(&surv, k, &primes, range));
        if run.settled() || pm >= cap {
            break;
        }
        pm = next_prime(pm);
    }
    while run.best.is_none() {
        x = grow(x);
        let (surv, range) = sieve(x, cap);
        run.offer(best_window(&surv, k, &primes, range));
    }
    run.best.unwrap().1
}

/// Greedy refinement of the even-side sieve on [s, s+x]: for each prime past
/// the threshold, in increasing order, if every residue class is occupied by
/// a survivor, delete the class with the fewest members (ties to the lowest
/// class). Once a prime exceeds the survivor count, every later prime has an
/// empty class by counting, so the whole survivor set is admissible.
pub(crate) fn greedy_reduce(alive: &mut Vec<i64>, primes: &[i64], threshold: f64) {
    let mut counts = vec![0u32; primes.last().map_or(1, |&p| p as usize)];
    for &p in primes {
        if (p as f64) <= threshold {
            continue;
        }
        if p as usize > alive.len() {
            break;
        }
        let pu = p as usize;
        counts[..pu].fill(0);
        let mut distinct = 0;
        for &v in alive.iter() {
            let r = v.rem_euclid(p) as usize;
            counts[r] += 1;
            if counts[r] == 1 {
                distinct += 1;
            }
        }
        if distinct < pu {
            continue;
        }
        let mut class = 0;
        for j in 1..pu {
            if counts[j] < counts[class] {
                class = j;
            }
        }
        let target = class as i64;
        alive.retain(|&v| v.rem_euclid(p) != target);
    }
}

/// Shifted greedy construction. With `s` fixed, sieves [s, s+x] (growing x
/// until k survivors remain after the greedy pass) and returns the narrowest
/// k-window. With `s = None`, scans starts across [-x/2, x/2] in steps of 2
/// and keeps the best result; above k = 2000 the scan runs coarse first and
/// refines around the winner.
pub fn shifted_greedy(k: usize, s: Option<i64>, tau: f64) -> Vec<i64> {
    let primes = primes_up_to(k as i64);
    let threshold = tau * (k as f64 * (k as f64).ln()).sqrt();
    let span = (1.35 * span_estimate(k)) as i64;
    let mut sieve = GreedySieve::new(k, &primes, threshold, span);
    match s {
        Some(s0) => sieve.at(s0).1,
        None => {
            let half = span / 2;
            let start = -(half - half % 2);
            let coarse = if k <= 2000 { 2 } else { 2 * (span / 2000 + 1) };
            let mut best: Option<(i64, i64)> = None;
            let mut s0 = start;
            while s0 <= half {
                let (d, _) = sieve.at(s0);
                if best.is_none_or(|(bd, _)| d < bd) {
                    best = Some((d, s0));
                }
                s0 += coarse;
            }
            let (_, mut at) = best.unwrap();
            if coarse > 2 {
                let mut s0 = at - coarse + 2;
                while s0 < at + coarse {
                    let (d, _) = sieve.at(s0);
                    if d < best.unwrap().0 {
                        best = Some((d, s0));
                    }
                    s0 += 2;
                }
                at = best.unwrap().1;
            }
            sieve.at(at).1
        }
    }
}

/// Shared survivor array for a start scan: the base sieve depends only on
/// residues, not on the start, so one sieved range serves every window.
struct GreedySieve<'a> {
    k: usize,
    primes: &'a [i64],
    threshold: f64,
    lo: i64,
    hi: i64,
    x: i64,
    survivors: Vec<i64>,
}

impl<'a> GreedySieve<'a> {
    fn new(k: usize, primes: &'a [i64], threshold: f64, span: i64) -> Self {
        let lo = -(span / 2) - 2;
        let mut sieve = GreedySieve { k, primes, threshold, lo, hi: lo, x: span, survivors: Vec::new() };
        sieve.extend_to(span / 2 + sieve.x);
        sieve
    }

    fn extend_to(&mut self, hi: i64) {
        if hi > self.hi || self.survivors.is_empty() {
            self.hi = hi;
            self.survivors =
                interval_survivors(self.lo, self.hi, self.threshold as i64, true);
        }
    }

    /// Greedy result for the window starting at `s`, growing the window
    /// length until the greedy pass leaves at least k survivors.
    fn at(&mut self, s: i64) -> (i64, Vec<i64>) {
        if s < self.lo {
            self.lo = s - 2;
            self.survivors.clear();
        }
        loop {
            self.extend_to(s.max(0) + self.x);
            let a = self.survivors.partition_point(|&v| v < s);
            let b = self.survivors.partition_point(|&v| v <= s + self.x);
            let mut alive = self.survivors[a..b].to_vec();
            greedy_reduce(&mut alive, self.primes, self.threshold);
            if alive.len() >= self.k {
                let mut best = (alive[self.k - 1] - alive[0], 0);
                for i in 1..=alive.len() - self.k {
                    let d = alive[i + self.k - 1] - alive[i];
                    if d < best.0 {
                        best = (d, i);
                    }
                }
                return (best.0, alive[best.1..best.1 + self.k].to_vec());
            }
            self.x = grow(self.x);
        }
    }
}
