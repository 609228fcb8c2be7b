//! Prime censuses over `t_q(p)` and `f_q(p)`, and the count of irreducible
//! factors of `x^m - 1` over the field with `q` elements.

use crate::error::{domain, Error, Result};
use crate::order::{gcd, lcm, order_mod_prime_power};
use crate::sieve::factorize;
use crate::table::PrimeTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusRow {
    pub p: u64,
    pub f: u64,
    pub t: u64,
    pub flag: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    /// Number of flagged rows.
    pub count: u64,
    /// One row per prime `p <= x`, `p != q`.
    pub rows: Vec<CensusRow>,
}

fn census_by(table: &PrimeTable, x: u64, flag: impl Fn(u64, u64, u64) -> bool) -> Result<Census> {
    table.check_range("x", x)?;
    let rows: Vec<CensusRow> = table
        .records_upto(x)
        .iter()
        .map(|r| CensusRow {
            p: r.p,
            f: r.f,
            t: r.t,
            flag: flag(r.p, r.f, r.t),
        })
        .collect();
    let count = rows.iter().filter(|r| r.flag).count() as u64;
    Ok(Census { count, rows })
}

/// Primes with `t_q(p)` not dividing `k`.
pub fn sk_census(table: &PrimeTable, k: u64, x: u64) -> Result<Census> {
    if k == 0 {
        return domain("k must be >= 1");
    }
    census_by(table, x, |_, _, t| !k.is_multiple_of(t))
}

/// Primes with `f_q(p) > (p - 1) / ln p`.
pub fn large_order_census(table: &PrimeTable, x: u64) -> Result<Census> {
    census_by(table, x, |p, f, _| {
        f as f64 > (p - 1) as f64 / (p as f64).ln()
    })
}

fn euler_phi(factors: &[(u64, u32)]) -> u64 {
    factors
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

/// Order of `q` modulo `d`, as the lcm of its orders modulo the prime powers
/// of `d`; `f_q(1) = 1`.
fn order_mod_composite(table: &PrimeTable, factors: &[(u64, u32)]) -> u64 {
    let q = table.q();
    factors.iter().fold(1, |acc, &(p, e)| {
        let order_p = table.record(p).expect("p divides m <= limit and p != q").f;
        lcm(acc, order_mod_prime_power(q, p, e, order_p))
    })
}

/// `sum_{d | m} phi(d) / f_q(d)`. Each term must be an integer; a fractional
/// term means an order was computed wrongly and is reported as a consistency
/// failure.
pub fn iq_count(table: &PrimeTable, m: u64) -> Result<u64> {
    let q = table.q();
    if m == 0 {
        return domain("m must be >= 1");
    }
    table.check_range("m", m)?;
    if m.is_multiple_of(q) {
        return domain(format!("gcd(m, q) must be 1, got m = {m}, q = {q}"));
    }
    let factors = factorize(table.spf(), m);
    let mut total = 0u64;
    for_each_divisor(&factors, &mut |d_factors| {
        let phi = euler_phi(d_factors);
        let f = order_mod_composite(table, d_factors);
        if !phi.is_multiple_of(f) {
            let d: u64 = d_factors.iter().map(|&(p, e)| p.pow(e)).product();
            return Err(Error::Consistency(format!(
                "phi({d}) = {phi} not divisible by f_{q}({d}) = {f}"
            )));
        }
        total += phi / f;
        Ok(())
    })?;
    Ok(total)
}

type Factors = [(u64, u32)];
type Visitor<'a> = dyn FnMut(&Factors) -> Result<()> + 'a;

fn for_each_divisor(factors: &Factors, visit: &mut Visitor<'_>) -> Result<()> {
    fn rec(factors: &Factors, chosen: &mut Vec<(u64, u32)>, visit: &mut Visitor<'_>) -> Result<()> {
        let Some((&(p, e), rest)) = factors.split_first() else {
            return visit(chosen);
        };
        rec(rest, chosen, visit)?;
        for k in 1..=e {
            chosen.push((p, k));
            rec(rest, chosen, visit)?;
            chosen.pop();
        }
        Ok(())
    }
    rec(factors, &mut Vec::with_capacity(factors.len()), visit)
}

/// Number of orbits of `a -> q a` on `Z/mZ`, by direct enumeration.
pub fn cyclotomic_coset_count(q: u64, m: u64) -> Result<u64> {
    if m == 0 {
        return domain("m must be >= 1");
    }
    if gcd(q, m) != 1 {
        return domain(format!("gcd(m, q) must be 1, got m = {m}, q = {q}"));
    }
    let mut seen = vec![false; m as usize];
    let step = q % m;
    let mut orbits = 0;
    for start in 0..m {
        if seen[start as usize] {
            continue;
        }
        orbits += 1;
        let mut a = start;
        while !seen[a as usize] {
            seen[a as usize] = true;
            a = ((a as u128 * step as u128) % m as u128) as u64;
        }
    }
    Ok(orbits)
}

/// The orbits themselves, each listed from its least element in visiting order.
pub fn cyclotomic_cosets(q: u64, m: u64) -> Result<Vec<Vec<u64>>> {
    cyclotomic_coset_count(q, m)?;
    let mut seen = vec![false; m as usize];
    let mut out = Vec::new();
    for start in 0..m {
        if seen[start as usize] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut a = start;
        while !seen[a as usize] {
            seen[a as usize] = true;
            orbit.push(a);
            a = ((a as u128 * q as u128) % m as u128) as u64;
        }
        out.push(orbit);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::build_prime_table;

    #[test]
    fn census_examples() {
        let t = build_prime_table(2, 10_000).unwrap();
        assert_eq!(large_order_census(&t, 10).unwrap().count, 2);
        assert_eq!(large_order_census(&t, 3).unwrap().count, 1);
        assert_eq!(large_order_census(&t, 2).unwrap().count, 0);
        let s1 = sk_census(&t, 1, 10).unwrap();
        assert_eq!(s1.count, 1);
        assert_eq!(
            s1.rows
                .iter()
                .filter(|r| r.flag)
                .map(|r| r.p)
                .collect::<Vec<_>>(),
            vec![7]
        );
        assert_eq!(sk_census(&t, 2, 10).unwrap().count, 0);
        assert!(sk_census(&t, 0, 10).is_err());
        assert!(sk_census(&t, 1, 10_001).is_err());
    }

    #[test]
    fn lcm_of_all_t_clears_census() {
        let t = build_prime_table(3, 2000).unwrap();
        let k = t.records().iter().fold(1u64, |acc, r| lcm(acc, r.t));
        assert_eq!(sk_census(&t, k, 2000).unwrap().count, 0);
    }

    #[test]
    fn large_order_positive_for_q2() {
        let t = build_prime_table(2, 5000).unwrap();
        for x in 3..=5000 {
            assert!(large_order_census(&t, x).unwrap().count > 0);
        }
    }

    #[test]
    fn sk_monotone_under_divisibility() {
        let t = build_prime_table(5, 10_000).unwrap();
        for k in 1..=24u64 {
            for k2 in (k..=48).step_by(k as usize) {
                assert!(
                    sk_census(&t, k2, 10_000).unwrap().count
                        <= sk_census(&t, k, 10_000).unwrap().count
                );
            }
        }
    }

    #[test]
    fn iq_examples() {
        let t = build_prime_table(2, 100).unwrap();
        assert_eq!(iq_count(&t, 1).unwrap(), 1);
        assert_eq!(iq_count(&t, 7).unwrap(), 3);
        assert_eq!(iq_count(&t, 5).unwrap(), 2);
        assert!(iq_count(&t, 6).is_err());
        assert!(iq_count(&t, 0).is_err());
        assert!(iq_count(&t, 101).is_err());
    }

    #[test]
    fn coset_examples() {
        assert_eq!(cyclotomic_coset_count(2, 7).unwrap(), 3);
        assert_eq!(
            cyclotomic_cosets(2, 7).unwrap(),
            vec![vec![0], vec![1, 2, 4], vec![3, 6, 5]]
        );
        assert_eq!(cyclotomic_coset_count(2, 1).unwrap(), 1);
        // {0}, {1,3}, {2,6}, {4}, {5,7}
        assert_eq!(cyclotomic_coset_count(3, 8).unwrap(), 5);
        assert!(cyclotomic_coset_count(2, 6).is_err());
    }

    #[test]
    fn iq_matches_cosets_q3_to_500() {
        let t = build_prime_table(3, 500).unwrap();
        for m in (1..=500u64).filter(|m| m % 3 != 0) {
            assert_eq!(
                iq_count(&t, m).unwrap(),
                cyclotomic_coset_count(3, m).unwrap(),
                "m = {m}"
            );
        }
    }
}
