//! Truncated Dirichlet series and Euler products for real `s > 1`, Delange
//! prime-sum diagnostics, residue probes, and the prime-density identity
//! relating `log zeta(s) - log C(s, psi_t)` to a sum over primes with `t_q(p) = t`.

use num_complex::Complex64;

use crate::chi::{ChiFunction, ChiKind};
use crate::error::{domain, Result};
use crate::rotation::UnitRotation;
use crate::sieve::sieve_primes;
use crate::summation::{ComplexSum, NeumaierSum};
use crate::table::PrimeTable;

/// Inner `k >= 2` series stop once the next term is below this fraction of
/// the running inner sum.
pub const TAIL_RELATIVE_CUTOFF: f64 = 1e-18;

fn check_s(s: f64) -> Result<()> {
    if !s.is_finite() || s <= 1.0 {
        return domain(format!("s must be a finite real > 1, got {s}"));
    }
    Ok(())
}

/// Principal `log(1 - z)` for `|z| < 1`, accurate when `z` is small.
fn log_one_minus(z: Complex64) -> Complex64 {
    let w = 1.0 - z.re;
    let norm_sq_minus_one = z.norm_sqr() - 2.0 * z.re;
    Complex64::new(0.5 * norm_sq_minus_one.ln_1p(), (-z.im).atan2(w))
}

/// `prod_{p <= cutoff} (1 - chi(p) p^{-s})^{-1}`, ascending in `p`.
pub fn euler_product(chi: &ChiFunction<'_>, s: f64, cutoff: u64) -> Result<Complex64> {
    check_s(s)?;
    let table = chi.table();
    table.check_range("cutoff", cutoff)?;
    let one = Complex64::new(1.0, 0.0);
    let mut acc = one;
    for p in table.primes_upto(cutoff) {
        let v = chi.prime_value_unchecked(p);
        if v.is_zero() {
            continue;
        }
        acc /= one - v.to_complex() * (p as f64).powf(-s);
    }
    Ok(acc)
}

/// `sum_{p <= cutoff} -log(1 - chi(p) p^{-s})`, the principal log of the
/// truncated Euler product taken factor by factor.
pub fn log_euler_product(chi: &ChiFunction<'_>, s: f64, cutoff: u64) -> Result<Complex64> {
    check_s(s)?;
    let table = chi.table();
    table.check_range("cutoff", cutoff)?;
    let mut acc = ComplexSum::new();
    for p in table.primes_upto(cutoff) {
        let v = chi.prime_value_unchecked(p);
        if v.is_zero() {
            continue;
        }
        acc += -log_one_minus(v.to_complex() * (p as f64).powf(-s));
    }
    Ok(acc.value())
}

/// `sum_{m <= cutoff} chi(m) m^{-s}` with compensated accumulation.
pub fn dirichlet_sum(chi: &ChiFunction<'_>, s: f64, cutoff: u64) -> Result<Complex64> {
    check_s(s)?;
    if cutoff == 0 {
        return domain("cutoff must be >= 1");
    }
    let mut acc = ComplexSum::new();
    for (i, v) in chi.values(cutoff, true)?.enumerate() {
        if v.is_zero() {
            continue;
        }
        let m = (i + 1) as f64;
        acc += v.to_complex() * m.powf(-s);
    }
    Ok(acc.value())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEval {
    pub s: f64,
    pub cutoff: u64,
    pub euler_value: Complex64,
    pub dirichlet_value: Complex64,
}

/// Both truncations of `C(s, chi)` at the same cutoff.
pub fn evaluate_series(chi: &ChiFunction<'_>, s: f64, cutoff: u64) -> Result<SeriesEval> {
    Ok(SeriesEval {
        s,
        cutoff,
        euler_value: euler_product(chi, s, cutoff)?,
        dirichlet_value: dirichlet_sum(chi, s, cutoff)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DelangeDiag {
    /// `(x, sum_{p <= x} (1 - chi(p)) / p)`
    pub partial_sums: Vec<(u64, Complex64)>,
    /// `prod_{p <= X} (1 - 1/p) / (1 - chi(p)/p)` at the largest checkpoint.
    pub product_prediction: Complex64,
}

pub fn delange_diag(chi: &ChiFunction<'_>, checkpoints: &[u64]) -> Result<DelangeDiag> {
    let mut xs = checkpoints.to_vec();
    xs.sort_unstable();
    xs.dedup();
    let Some(&x_max) = xs.last() else {
        return domain("at least one checkpoint is required");
    };
    chi.table().check_range("x", x_max)?;

    let one = Complex64::new(1.0, 0.0);
    let mut sum = ComplexSum::new();
    let mut product = one;
    let mut partial_sums = Vec::with_capacity(xs.len());
    let mut next = xs.iter().copied().peekable();
    for p in chi.table().primes_upto(x_max) {
        while let Some(&x) = next.peek() {
            if x >= p {
                break;
            }
            partial_sums.push((x, sum.value()));
            next.next();
        }
        let v = chi.prime_value_unchecked(p);
        let inv_p = 1.0 / p as f64;
        if !v.is_one() {
            let g = v.to_complex();
            sum += (one - g) * inv_p;
            product *= Complex64::new(1.0 - inv_p, 0.0) / (one - g * inv_p);
        }
    }
    for x in next {
        partial_sums.push((x, sum.value()));
    }
    Ok(DelangeDiag {
        partial_sums,
        product_prediction: product,
    })
}

/// `(s, (s - 1) * C_X(s, chi))` for `s = 1 + delta`.
pub fn residue_probe(
    chi: &ChiFunction<'_>,
    deltas: &[f64],
    cutoff: u64,
) -> Result<Vec<(f64, Complex64)>> {
    deltas
        .iter()
        .map(|&delta| {
            if delta.is_nan() || delta <= 0.0 {
                return domain(format!("delta must be > 0, got {delta}"));
            }
            let s = 1.0 + delta;
            Ok((s, euler_product(chi, s, cutoff)? * delta))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eq2Check {
    pub q: u64,
    pub t: u64,
    pub s: f64,
    pub cutoff: u64,
    /// `2 sum_{p <= X, t_q(p) = t} p^{-s}`
    pub lhs: f64,
    /// `Re[log zeta_X(s) - log C_X(s, psi_t)]`
    pub rhs: f64,
    /// `sum_{p <= X} sum_{k >= 2} (1 - psi_t(p)^k) / (k p^{ks})`
    pub k2_tail: f64,
}

impl Eq2Check {
    pub fn residual(&self) -> f64 {
        self.rhs - self.lhs - self.k2_tail
    }
}

/// The three pieces are computed along separate routes: `lhs` from the
/// table's `t` values, `rhs` from two truncated log Euler products, and the
/// tail from the power series of `-log(1 - z)` beyond its linear term.
pub fn eq2_identity_check(table: &PrimeTable, t: u64, s: f64, cutoff: u64) -> Result<Eq2Check> {
    check_s(s)?;
    table.check_range("cutoff", cutoff)?;
    let q = table.q();

    let lhs: NeumaierSum = table
        .records_upto(cutoff)
        .iter()
        .filter(|r| r.t == t)
        .map(|r| 2.0 * (r.p as f64).powf(-s))
        .collect();

    let zeta = ChiFunction::new(ChiKind::Const(UnitRotation::ONE), table)?;
    let psi_t = ChiFunction::new(ChiKind::PsiT { q, t }, table)?;
    let rhs = (log_euler_product(&zeta, s, cutoff)? - log_euler_product(&psi_t, s, cutoff)?).re;

    let mut tail = NeumaierSum::new();
    for p in table.primes_upto(cutoff) {
        let v = psi_t.prime_value_unchecked(p);
        if v.is_one() {
            continue;
        }
        let x = (p as f64).powf(-s);
        let mut inner = NeumaierSum::new();
        let mut xk = x;
        for k in 2u64.. {
            xk *= x;
            let coeff = 1.0 - v.pow(k).expect("non-zero").to_complex().re;
            inner += coeff * xk / k as f64;
            // |1 - psi^k| <= 2 bounds every later term
            let next_max = 2.0 * xk * x / (k + 1) as f64;
            if next_max < TAIL_RELATIVE_CUTOFF * inner.value().abs() || next_max == 0.0 {
                break;
            }
        }
        tail += inner.value();
    }

    Ok(Eq2Check {
        q,
        t,
        s,
        cutoff,
        lhs: lhs.value(),
        rhs,
        k2_tail: tail.value(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityReport {
    pub q: u64,
    pub t: u64,
    pub x: u64,
    /// Primes `p <= x`, `p != q`, with `t_q(p) = t`.
    pub count: u64,
    /// All primes `<= x`, `q` included.
    pub pi_x: u64,
    pub density: f64,
}

pub fn artin_density(table: &PrimeTable, t: u64, x: u64) -> Result<DensityReport> {
    if x < 2 {
        return domain(format!("x must be >= 2, got {x}"));
    }
    table.check_range("x", x)?;
    let count = table.records_upto(x).iter().filter(|r| r.t == t).count() as u64;
    let pi_x = table.prime_count(x);
    Ok(DensityReport {
        q: table.q(),
        t,
        x,
        count,
        pi_x,
        density: count as f64 / pi_x as f64,
    })
}

/// `prod_{p <= X} (1 - 1/(p(p-1)))`
pub fn artin_constant(cutoff: u64) -> Result<f64> {
    let primes = sieve_primes(cutoff)?;
    Ok(artin_constant_over(&primes))
}

pub(crate) fn artin_constant_over(primes: &[u64]) -> f64 {
    primes
        .iter()
        .map(|&p| {
            let p = p as f64;
            1.0 - 1.0 / (p * (p - 1.0))
        })
        .product()
}
