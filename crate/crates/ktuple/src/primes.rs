//! Prime generation helpers shared by the sieve constructions and the solver.

/// All primes `<= n` in increasing order, by sieve of Eratosthenes.
pub fn primes_up_to(n: i64) -> Vec<i64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        out.push(p as i64);
        let mut m = p * p;
        while m <= n {
            composite[m] = true;
            m += p;
        }
    }
    out
}

/// Smallest prime strictly greater than `p`.
pub fn next_prime(p: i64) -> i64 {
    let mut q = p.max(1) + 1;
    loop {
        if is_prime(q) {
            return q;
        }
        q += 1;
    }
}

fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The first `count` primes strictly greater than `lo`.
pub fn primes_after(lo: i64, count: usize) -> Vec<i64> {
    // Upper-bound estimate grown until the sieve yields enough primes.
    let mut hi = (lo.max(16) + count as i64 * 16).max(64);
    loop {
        let ps: Vec<i64> = primes_up_to(hi).into_iter().filter(|&p| p > lo).collect();
        if ps.len() >= count {
            return ps[..count].to_vec();
        }
        hi = hi * 3 / 2;
    }
}
