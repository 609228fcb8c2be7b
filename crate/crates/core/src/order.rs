//! Multiplicative orders modulo primes and prime powers.

use crate::error::{domain, Result};
use crate::sieve::{is_prime_trial, trial_factorize};

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Order of `q` modulo the prime `p`, given the distinct prime factors of
/// `p - 1`. Starts from `p - 1` and strips each factor while the congruence
/// survives.
pub(crate) fn order_from_factors(q: u64, p: u64, factors_of_p_minus_1: &[u64]) -> u64 {
    let mut f = p - 1;
    for &l in factors_of_p_minus_1 {
        while f.is_multiple_of(l) && mod_pow(q, f / l, p) == 1 {
            f /= l;
        }
    }
    f
}

/// Least `f >= 1` with `q^f = 1 (mod p)`, for distinct primes `q`, `p`.
pub fn multiplicative_order(q: u64, p: u64) -> Result<u64> {
    if !is_prime_trial(q) {
        return domain(format!("base q = {q} is not prime"));
    }
    if !is_prime_trial(p) {
        return domain(format!("modulus p = {p} is not prime"));
    }
    if p == q {
        return domain(format!("order of {q} modulo itself is undefined"));
    }
    let factors: Vec<u64> = trial_factorize(p - 1).into_iter().map(|(l, _)| l).collect();
    Ok(order_from_factors(q, p, &factors))
}

/// Order of `q` modulo `p^e`, lifted from the order modulo `p` by repeated
/// multiplication by `p`. Requires `p` not dividing `q`.
pub(crate) fn order_mod_prime_power(q: u64, p: u64, e: u32, order_mod_p: u64) -> u64 {
    let pe = p.pow(e);
    let mut o = order_mod_p;
    while mod_pow(q, o, pe) != 1 {
        o *= p;
    }
    o
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_orders() {
        assert_eq!(multiplicative_order(7, 3).unwrap(), 1);
        assert_eq!(multiplicative_order(2, 3).unwrap(), 2);
        assert_eq!(multiplicative_order(2, 7).unwrap(), 3);
        assert_eq!(multiplicative_order(3, 2).unwrap(), 1);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(multiplicative_order(2, 2).is_err());
        assert!(multiplicative_order(4, 7).is_err());
        assert!(multiplicative_order(2, 9).is_err());
        assert!(multiplicative_order(2, 1).is_err());
    }

    #[test]
    fn prime_power_orders() {
        // 3 mod 8: 3^2 = 9 = 1
        assert_eq!(order_mod_prime_power(3, 2, 3, 1), 2);
        // 2 mod 9: order 6
        assert_eq!(order_mod_prime_power(2, 3, 2, 2), 6);
        // 10 mod 49 vs 10 mod 7 (order 6); 10^6 mod 49 != 1 so lifts to 42
        assert_eq!(order_mod_prime_power(10, 7, 2, 6), 42);
    }

    #[test]
    fn mod_pow_large_modulus() {
        let p = 18_446_744_073_709_551_557u64; // largest 64-bit prime
        assert_eq!(mod_pow(2, p - 1, p), 1);
    }
}
