//! Linear sieve producing primes together with a smallest-prime-factor table.

use crate::error::{domain, Result};

/// Largest limit representable by the `u32` spf table.
pub const MAX_LIMIT: u64 = u32::MAX as u64;

/// Output of one linear-sieve pass: `spf[m]` is the least prime dividing `m`
/// for `2 <= m <= limit`, and zero for `m < 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sieve {
    pub primes: Vec<u64>,
    pub spf: Vec<u32>,
}

/// Every integer is crossed out exactly once, by its least prime factor.
pub fn linear_sieve(limit: u64) -> Result<Sieve> {
    if limit > MAX_LIMIT {
        return domain(format!("sieve limit {limit} exceeds {MAX_LIMIT}"));
    }
    let n = limit as usize;
    let mut spf = vec![0u32; n + 1];
    let mut primes: Vec<u64> = Vec::new();
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u64);
        }
        let lp = spf[i];
        for &p in &primes {
            let p32 = p as u32;
            if p32 > lp {
                break;
            }
            let Some(m) = i.checked_mul(p as usize) else {
                break;
            };
            if m > n {
                break;
            }
            spf[m] = p32;
        }
    }
    Ok(Sieve { primes, spf })
}

/// All primes in `[2, x]`, ascending.
pub fn sieve_primes(x: u64) -> Result<Vec<u64>> {
    if x < 2 {
        return domain(format!("sieve_primes needs x >= 2, got {x}"));
    }
    Ok(linear_sieve(x)?.primes)
}

/// Distinct prime factors of `m` read off the spf chain, ascending.
pub fn distinct_prime_factors(spf: &[u32], mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while m > 1 {
        let p = spf[m as usize] as u64;
        out.push(p);
        while m.is_multiple_of(p) {
            m /= p;
        }
    }
    out
}

/// `(prime, exponent)` pairs of `m` from the spf chain.
pub fn factorize(spf: &[u32], mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    while m > 1 {
        let p = spf[m as usize] as u64;
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        out.push((p, e));
    }
    out
}

/// Trial-division factorization, independent of any sieve.
pub fn trial_factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= m {
        if m.is_multiple_of(d) {
            let mut e = 0;
            while m.is_multiple_of(d) {
                m /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub fn is_prime_trial(n: u64) -> bool {
    n >= 2 && trial_factorize(n) == [(n, 1)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(sieve_primes(10).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(sieve_primes(2).unwrap(), vec![2]);
        assert!(sieve_primes(1).is_err());
        assert!(sieve_primes(0).is_err());
    }

    #[test]
    fn hundred_has_25_primes() {
        let oracle = (2..=100u64).filter(|&n| (2..n).all(|d| n % d != 0)).count();
        assert_eq!(oracle, 25);
        assert_eq!(sieve_primes(100).unwrap().len(), oracle);
    }

    #[test]
    fn count_matches_trial_division_to_1e5() {
        let sieve = linear_sieve(100_000).unwrap();
        let trial: Vec<u64> = (2..=100_000).filter(|&n| is_prime_trial(n)).collect();
        assert_eq!(sieve.primes, trial);
    }

    #[test]
    fn spf_is_least_prime_factor() {
        let s = linear_sieve(5000).unwrap();
        for m in 2..=5000u64 {
            let least = trial_factorize(m)[0].0;
            assert_eq!(s.spf[m as usize] as u64, least, "m = {m}");
            assert_eq!(s.spf[m as usize] as u64 == m, is_prime_trial(m));
        }
        assert_eq!(s.spf[0], 0);
        assert_eq!(s.spf[1], 0);
    }

    #[test]
    fn factorizations_agree() {
        let s = linear_sieve(3000).unwrap();
        for m in 1..=3000u64 {
            assert_eq!(factorize(&s.spf, m), trial_factorize(m));
        }
        assert_eq!(distinct_prime_factors(&s.spf, 360), vec![2, 3, 5]);
    }
}
