//! Explicit upper bound on `|M_n(chi)|` for functions with
//! `chi(p_i) = e^{2 pi i / d_i}`:
//!
//! ```text
//! |M_n| <= (1/n) sum_{k=1}^{N-1} d_k / (N-k)! * (log n + sum_{i>k} log p_i)^{N-k} / prod_{i>k} log p_i
//! ```
//!
//! with the primes `p_1..p_N <= n` ordered by nondecreasing `d_i`. Terms are
//! combined in log space because they overflow `f64` long before `N` reaches
//! the hundreds.

use statrs::function::gamma::ln_gamma;

use crate::chi::{ChiFunction, ChiKind};
use crate::error::{domain, Error, Result};
use crate::mean::{mean_series, Schedule};
use crate::rotation::UnitRotation;
use crate::summation::NeumaierSum;

/// Relative slack on the `|M_n| <= bound` comparison.
pub const HOLDS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeEntry {
    pub d: u64,
    pub p: u64,
}

/// Primes `<= n` with their `d`, sorted by `(d, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedPrimeList {
    n: u64,
    entries: Vec<PrimeEntry>,
}

impl OrderedPrimeList {
    /// Sorts the entries into the canonical `(d, p)` order.
    pub fn new(n: u64, mut entries: Vec<PrimeEntry>) -> Self {
        entries.sort_unstable_by_key(|e| (e.d, e.p));
        OrderedPrimeList { n, entries }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `N`
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[PrimeEntry] {
        &self.entries
    }
}

/// How the prime `q` enters the bound for functions that have no
/// `e^{2 pi i/d}` value there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QConvention {
    /// Use the function's own value at `q`.
    AsDefined,
    /// Drop `q` from the prime list and set `chi(q) = 0`, so the mean runs
    /// over `m` coprime to `q` (still divided by `n`).
    ExcludeQ,
    /// Set `chi(q) = 1`, i.e. `d = 1` at `q`.
    UnitAtQ,
}

impl QConvention {
    pub fn default_for(kind: ChiKind) -> QConvention {
        match kind {
            ChiKind::Varpi { .. } => QConvention::ExcludeQ,
            ChiKind::Psi { .. } | ChiKind::PsiPow { .. } => QConvention::UnitAtQ,
            _ => QConvention::AsDefined,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            QConvention::AsDefined => "as-defined",
            QConvention::ExcludeQ => "exclude-q",
            QConvention::UnitAtQ => "unit-at-q",
        }
    }
}

/// The function actually measured under `convention`.
pub fn apply_convention<'a>(
    chi: &ChiFunction<'a>,
    convention: QConvention,
) -> Result<ChiFunction<'a>> {
    if convention != QConvention::AsDefined && chi.kind().q().is_none() {
        return domain(format!(
            "{} does not depend on q; {} does not apply",
            chi.kind(),
            convention.label()
        ));
    }
    Ok(match convention {
        QConvention::AsDefined => *chi,
        QConvention::ExcludeQ => chi.with_value_at_q(UnitRotation::ZERO),
        QConvention::UnitAtQ => chi.with_value_at_q(UnitRotation::ONE),
    })
}

pub fn order_primes(
    chi: &ChiFunction<'_>,
    n: u64,
    convention: QConvention,
) -> Result<OrderedPrimeList> {
    let table = chi.table();
    table.check_range("n", n)?;
    let adjusted = apply_convention(chi, convention)?;
    let skip_q = convention == QConvention::ExcludeQ;
    let mut entries = Vec::new();
    for p in table.primes_upto(n) {
        if skip_q && p == table.q() {
            continue;
        }
        let d = match adjusted.prime_value(p)?.fraction() {
            Some((0, 1)) => 1,
            Some((1, d)) => d,
            other => {
                let shown = other.map_or("0".to_string(), |(a, d)| format!("{a}/{d}"));
                return Err(Error::Unsupported(format!(
                    "{} at p={p} is {shown}, not of the form e^(2 pi i/d)",
                    chi.kind()
                )));
            }
        };
        entries.push(PrimeEntry { d, p });
    }
    Ok(OrderedPrimeList::new(n, entries))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundValue {
    /// `+inf` when the bound exceeds the `f64` range.
    pub value: f64,
    /// Natural log of the bound; `-inf` for an empty sum.
    pub ln_value: f64,
    pub overflowed: bool,
}

pub fn theorem1_bound(list: &OrderedPrimeList) -> Result<BoundValue> {
    let entries = list.entries();
    if let Some(e) = entries.iter().find(|e| e.p <= 1) {
        return domain(format!("prime entry p = {} must exceed 1", e.p));
    }
    if list.n() == 0 {
        return domain("n must be >= 1");
    }
    let big_n = entries.len();
    if big_n <= 1 {
        return Ok(BoundValue {
            value: 0.0,
            ln_value: f64::NEG_INFINITY,
            overflowed: false,
        });
    }
    let ln_n = (list.n() as f64).ln();

    // One reverse pass: after absorbing entry j (0-based), the suffix sums
    // cover indices j..N-1, which is the suffix for term k = j (1-based).
    let mut sum_log = NeumaierSum::new();
    let mut sum_loglog = NeumaierSum::new();
    let mut log_terms = Vec::with_capacity(big_n - 1);
    for j in (1..big_n).rev() {
        let lp = (entries[j].p as f64).ln();
        sum_log += lp;
        sum_loglog += lp.ln();
        let m = (big_n - j) as f64;
        let d = entries[j - 1].d as f64;
        let log_term =
            d.ln() - ln_gamma(m + 1.0) + m * (ln_n + sum_log.value()).ln() - sum_loglog.value();
        log_terms.push(log_term);
    }
    let peak = log_terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scaled: NeumaierSum = log_terms.iter().map(|&l| (l - peak).exp()).collect();
    let ln_value = peak + scaled.value().ln() - ln_n;
    let value = ln_value.exp();
    Ok(BoundValue {
        value,
        ln_value,
        overflowed: value.is_infinite(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub n: u64,
    /// Number of primes in the ordered list.
    pub count: usize,
    pub bound: f64,
    pub overflowed: bool,
    pub actual: f64,
    pub holds: bool,
}

pub fn bound_holds(actual: f64, bound: f64) -> bool {
    actual <= bound + HOLDS_TOLERANCE * bound.max(1.0)
}

/// Pairs the bound with the measured `|M_n|` of the same (convention-adjusted)
/// function at each `n`.
pub fn verify_bound(
    chi: &ChiFunction<'_>,
    n_values: &[u64],
    convention: QConvention,
) -> Result<Vec<BoundReport>> {
    if n_values.is_empty() {
        return Ok(Vec::new());
    }
    if n_values.contains(&0) {
        return domain("n must be >= 1");
    }
    let n_max = *n_values.iter().max().expect("non-empty");
    chi.table().check_range("n", n_max)?;
    let adjusted = apply_convention(chi, convention)?;
    let series = mean_series(&adjusted, n_max, &Schedule::Explicit(n_values.to_vec()))?;
    n_values
        .iter()
        .map(|&n| {
            let list = order_primes(chi, n, convention)?;
            let bound = theorem1_bound(&list)?;
            let actual = series.at(n).expect("checkpoint requested").magnitude;
            Ok(BoundReport {
                n,
                count: list.len(),
                bound: bound.value,
                overflowed: bound.overflowed,
                actual,
                holds: bound_holds(actual, bound.value),
            })
        })
        .collect()
}
