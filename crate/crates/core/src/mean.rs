//! Running mean values `M_n(chi) = (1/n) sum_{m <= n} chi(m)`.

use num_complex::Complex64;

use crate::chi::{ChiFunction, ChiKind};
use crate::error::{domain, Result};
use crate::rotation::UnitRotation;
use crate::sieve::trial_factorize;
use crate::summation::ComplexSum;

/// Above this many terms the memo table is dropped and each value is
/// recomputed from its spf chain.
pub const DEFAULT_MEMO_LIMIT: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checkpoint {
    pub n: u64,
    pub mean: Complex64,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanSeries {
    pub chi: ChiKind,
    pub checkpoints: Vec<Checkpoint>,
}

impl MeanSeries {
    pub fn last(&self) -> &Checkpoint {
        self.checkpoints
            .last()
            .expect("series always ends at n_max")
    }

    pub fn at(&self, n: u64) -> Option<&Checkpoint> {
        self.checkpoints
            .binary_search_by_key(&n, |c| c.n)
            .ok()
            .map(|i| &self.checkpoints[i])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Schedule {
    /// `ceil(10^{j/4})` for `j >= 4`, i.e. 10, 18, 32, 57, 100, ...
    #[default]
    Geometric,
    Explicit(Vec<u64>),
}

impl Schedule {
    /// Strictly increasing checkpoint list ending at `n_max`.
    pub fn points(&self, n_max: u64) -> Result<Vec<u64>> {
        let mut pts = match self {
            Schedule::Geometric => geometric_points(n_max),
            Schedule::Explicit(v) => {
                if v.contains(&0) {
                    return domain("checkpoints must be >= 1");
                }
                if let Some(&big) = v.iter().find(|&&n| n > n_max) {
                    return domain(format!("checkpoint {big} exceeds n_max {n_max}"));
                }
                v.clone()
            }
        };
        pts.push(n_max);
        pts.sort_unstable();
        pts.dedup();
        Ok(pts)
    }
}

fn geometric_points(n_max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for j in 4.. {
        let n = ceil_pow10_quarter(j);
        if n > n_max {
            break;
        }
        out.push(n);
    }
    out
}

/// `ceil(10^{j/4})`. Off the decades the value is irrational, so `ceil` of
/// the float is safe; the decades themselves are computed exactly.
fn ceil_pow10_quarter(j: u32) -> u64 {
    if j.is_multiple_of(4) {
        10u64.pow(j / 4)
    } else {
        10f64.powf(j as f64 / 4.0).ceil() as u64
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MeanOptions {
    pub memo_limit: u64,
}

impl Default for MeanOptions {
    fn default() -> Self {
        MeanOptions {
            memo_limit: DEFAULT_MEMO_LIMIT,
        }
    }
}

pub fn mean_series(chi: &ChiFunction<'_>, n_max: u64, schedule: &Schedule) -> Result<MeanSeries> {
    mean_series_with(chi, n_max, schedule, MeanOptions::default())
}

/// One sequential pass over `m = 1..=n_max`; the summation order is fixed so
/// results are bit-reproducible.
pub fn mean_series_with(
    chi: &ChiFunction<'_>,
    n_max: u64,
    schedule: &Schedule,
    opts: MeanOptions,
) -> Result<MeanSeries> {
    if n_max == 0 {
        return domain("n_max must be >= 1");
    }
    chi.table().check_range("n_max", n_max)?;
    let points = schedule.points(n_max)?;
    let values = chi.values(n_max, n_max <= opts.memo_limit)?;

    let mut checkpoints = Vec::with_capacity(points.len());
    let mut next = points.iter().copied().peekable();
    let mut acc = ComplexSum::new();
    for (i, v) in values.enumerate() {
        let m = i as u64 + 1;
        acc += v.to_complex();
        if next.peek() == Some(&m) {
            next.next();
            let mean = acc.value() / m as f64;
            checkpoints.push(Checkpoint {
                n: m,
                mean,
                magnitude: mean.norm(),
            });
        }
    }
    Ok(MeanSeries {
        chi: chi.kind(),
        checkpoints,
    })
}

/// Oracle for [`mean_series`]: each `chi(m)` comes from a trial-division
/// factorization and `chi(p)^e` per prime power, with plain summation.
pub fn naive_mean(chi: &ChiFunction<'_>, n: u64) -> Result<Complex64> {
    Ok(*naive_means(chi, &[n])?.last().expect("one point"))
}

/// [`naive_mean`] at several `n` in one pass.
pub fn naive_means(chi: &ChiFunction<'_>, ns: &[u64]) -> Result<Vec<Complex64>> {
    let n_max = ns.iter().copied().max().unwrap_or(0);
    if ns.contains(&0) {
        return domain("n must be >= 1");
    }
    chi.table().check_range("n", n_max)?;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut prefix = Vec::with_capacity(n_max as usize + 1);
    prefix.push(sum);
    for m in 1..=n_max {
        let mut v = UnitRotation::ONE;
        for (p, e) in trial_factorize(m) {
            v = v * chi.prime_value(p)?.pow(e as u64)?;
        }
        sum += v.to_complex();
        prefix.push(sum);
    }
    Ok(ns.iter().map(|&n| prefix[n as usize] / n as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::build_prime_table;
    use std::f64::consts::TAU;

    #[test]
    fn geometric_schedule() {
        assert_eq!(geometric_points(9), Vec::<u64>::new());
        assert_eq!(geometric_points(100), vec![10, 18, 32, 57, 100]);
        let pts = Schedule::Geometric.points(1_000).unwrap();
        assert_eq!(pts, vec![10, 18, 32, 57, 100, 178, 317, 563, 1000]);
        assert_eq!(Schedule::Geometric.points(3).unwrap(), vec![3]);
        assert_eq!(ceil_pow10_quarter(8), 100);
    }

    #[test]
    fn explicit_schedule() {
        let s = Schedule::Explicit(vec![5, 2, 5]);
        assert_eq!(s.points(7).unwrap(), vec![2, 5, 7]);
        assert!(Schedule::Explicit(vec![0]).points(7).is_err());
        assert!(Schedule::Explicit(vec![8]).points(7).is_err());
    }

    #[test]
    fn chi0_small_means() {
        let t = build_prime_table(2, 10).unwrap();
        let chi0 = ChiFunction::new(ChiKind::Chi0, &t).unwrap();
        let s = mean_series(&chi0, 4, &Schedule::Explicit(vec![1, 2, 3])).unwrap();
        let w = Complex64::from_polar(1.0, TAU / 3.0);
        assert_eq!(s.at(1).unwrap().mean, Complex64::new(1.0, 0.0));
        assert_eq!(s.at(2).unwrap().magnitude, 0.0);
        let m3 = s.at(3).unwrap();
        assert!((m3.mean - w / 3.0).norm() < 1e-15);
        assert!((m3.magnitude - 1.0 / 3.0).abs() < 1e-15);
        let m4 = s.at(4).unwrap();
        assert!((m4.mean - (1.0 + w) / 4.0).norm() < 1e-15);
        assert!((m4.magnitude - 0.25).abs() < 1e-15);
    }

    #[test]
    fn naive_examples() {
        let t = build_prime_table(2, 10).unwrap();
        let varpi = ChiFunction::new(ChiKind::Varpi { q: 2 }, &t).unwrap();
        assert_eq!(naive_mean(&varpi, 2).unwrap(), Complex64::new(0.5, 0.0));
        let psit = ChiFunction::new(ChiKind::PsiT { q: 2, t: 1 }, &t).unwrap();
        let m = naive_mean(&psit, 3).unwrap();
        assert!((m - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn constant_one_has_mean_one() {
        let t = build_prime_table(3, 5000).unwrap();
        let one = ChiFunction::new(ChiKind::Const(UnitRotation::ONE), &t).unwrap();
        let s = mean_series(&one, 5000, &Schedule::Explicit((1..=5000).collect())).unwrap();
        assert!(s
            .checkpoints
            .iter()
            .all(|c| c.mean == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn memo_and_recompute_modes_identical() {
        let t = build_prime_table(2, 20_000).unwrap();
        let chi = ChiFunction::new(ChiKind::Varpi { q: 2 }, &t).unwrap();
        let a = mean_series(&chi, 20_000, &Schedule::Geometric).unwrap();
        let b = mean_series_with(
            &chi,
            20_000,
            &Schedule::Geometric,
            MeanOptions { memo_limit: 0 },
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invariants_on_kinds() {
        let t = build_prime_table(2, 30_000).unwrap();
        for kind in [
            ChiKind::Chi0,
            ChiKind::Psi { q: 2 },
            ChiKind::PsiT { q: 2, t: 3 },
        ] {
            let chi = ChiFunction::new(kind, &t).unwrap();
            let s = mean_series(&chi, 30_000, &Schedule::Geometric).unwrap();
            assert!(s.checkpoints.windows(2).all(|w| w[0].n < w[1].n));
            assert_eq!(s.last().n, 30_000);
            for c in &s.checkpoints {
                assert!(c.magnitude <= 1.0 + 1e-12);
                assert!((c.magnitude - c.mean.norm()).abs() <= 1e-15 * c.magnitude);
            }
        }
    }

    #[test]
    fn range_errors() {
        let t = build_prime_table(2, 100).unwrap();
        let chi0 = ChiFunction::new(ChiKind::Chi0, &t).unwrap();
        assert!(mean_series(&chi0, 101, &Schedule::Geometric).is_err());
        assert!(mean_series(&chi0, 0, &Schedule::Geometric).is_err());
        assert!(naive_mean(&chi0, 101).is_err());
        assert!(naive_mean(&chi0, 0).is_err());
    }
}
