//! Completely multiplicative functions defined by their values at primes.
//!
//! Each function carries a [`PrimeTable`] for its base prime `q`; values at
//! composite `m` are products along the smallest-prime-factor chain of `m`.
//!
//! At `p = q` the order `f_q(q)` does not exist. The conventions used there:
//! `varpi(q) = 0`, `psi(q) = psi^k(q) = 0`, and `psi_t(q) = +1` (which keeps
//! `psi_t` valued in `{-1, +1}`).

use std::fmt;

use crate::error::{domain, Result};
use crate::rotation::UnitRotation;
use crate::table::PrimeTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiKind {
    /// `chi0(p) = e^{2 pi i / p}`
    Chi0,
    /// `psi(p) = e^{2 pi i / t_q(p)}`
    Psi { q: u64 },
    /// `varpi(p) = e^{2 pi i / f_q(p)}`
    Varpi { q: u64 },
    /// `-1` where `t_q(p) = t`, `+1` elsewhere.
    PsiT { q: u64, t: u64 },
    /// `psi^k`
    PsiPow { q: u64, k: u64 },
    /// The same value at every prime.
    Const(UnitRotation),
}

impl ChiKind {
    pub fn q(&self) -> Option<u64> {
        match *self {
            ChiKind::Psi { q }
            | ChiKind::Varpi { q }
            | ChiKind::PsiT { q, .. }
            | ChiKind::PsiPow { q, .. } => Some(q),
            ChiKind::Chi0 | ChiKind::Const(_) => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ChiKind::Chi0 => "chi0",
            ChiKind::Psi { .. } => "psi",
            ChiKind::Varpi { .. } => "varpi",
            ChiKind::PsiT { .. } => "psit",
            ChiKind::PsiPow { .. } => "psipow",
            ChiKind::Const(_) => "const",
        }
    }

    /// Value at `p = q` before any override.
    fn default_at_q(&self) -> UnitRotation {
        match self {
            ChiKind::PsiT { .. } => UnitRotation::ONE,
            _ => UnitRotation::ZERO,
        }
    }
}

impl fmt::Display for ChiKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ChiKind::Chi0 => f.write_str("chi0"),
            ChiKind::Psi { q } => write!(f, "psi(q={q})"),
            ChiKind::Varpi { q } => write!(f, "varpi(q={q})"),
            ChiKind::PsiT { q, t } => write!(f, "psit(q={q},t={t})"),
            ChiKind::PsiPow { q, k } => write!(f, "psipow(q={q},k={k})"),
            ChiKind::Const(r) => write!(f, "const({r})"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ChiFunction<'a> {
    kind: ChiKind,
    table: &'a PrimeTable,
    at_q: Option<UnitRotation>,
}

impl<'a> ChiFunction<'a> {
    pub fn new(kind: ChiKind, table: &'a PrimeTable) -> Result<Self> {
        if let Some(q) = kind.q() {
            if q != table.q() {
                return domain(format!(
                    "{kind} needs a table for q={q}, got q={}",
                    table.q()
                ));
            }
        }
        match kind {
            ChiKind::PsiT { t: 0, .. } => return domain("psit needs t >= 1"),
            ChiKind::PsiPow { k: 0, .. } => return domain("psipow needs k >= 1"),
            _ => {}
        }
        Ok(ChiFunction {
            kind,
            table,
            at_q: None,
        })
    }

    /// Same function with the value at `q` replaced. Functions that do not
    /// depend on `q` are returned unchanged.
    pub fn with_value_at_q(mut self, value: UnitRotation) -> Self {
        if self.kind.q().is_some() {
            self.at_q = Some(value);
        }
        self
    }

    pub fn kind(&self) -> ChiKind {
        self.kind
    }

    pub fn table(&self) -> &'a PrimeTable {
        self.table
    }

    /// Value at `q`, if this function depends on `q`.
    pub fn value_at_q(&self) -> Option<UnitRotation> {
        self.kind
            .q()
            .map(|_| self.at_q.unwrap_or(self.kind.default_at_q()))
    }

    /// One-line description of the value used at `p = q`.
    pub fn convention_note(&self) -> Option<String> {
        let v = self.value_at_q()?;
        let q = self.table.q();
        let how = if self.at_q.is_some() {
            "override"
        } else {
            "convention"
        };
        Some(format!("{}({q}) = {v} ({how})", self.kind.name()))
    }

    pub fn prime_value(&self, p: u64) -> Result<UnitRotation> {
        self.table.check_range("p", p)?;
        if !self.table.is_prime(p) {
            return domain(format!("{p} is not prime"));
        }
        Ok(self.prime_value_unchecked(p))
    }

    /// `p` must be a prime within the table.
    pub(crate) fn prime_value_unchecked(&self, p: u64) -> UnitRotation {
        match self.kind {
            ChiKind::Chi0 => return UnitRotation::primitive(p),
            ChiKind::Const(r) => return r,
            _ => {}
        }
        if p == self.table.q() {
            return self.value_at_q().expect("q-dependent kind");
        }
        let rec = self
            .table
            .record(p)
            .expect("prime below limit has a record");
        match self.kind {
            ChiKind::Psi { .. } => UnitRotation::primitive(rec.t),
            ChiKind::Varpi { .. } => UnitRotation::primitive(rec.f),
            ChiKind::PsiT { t, .. } => {
                if rec.t == t {
                    UnitRotation::MINUS_ONE
                } else {
                    UnitRotation::ONE
                }
            }
            ChiKind::PsiPow { k, .. } => UnitRotation::primitive(rec.t)
                .pow(k)
                .expect("non-zero rotation"),
            ChiKind::Chi0 | ChiKind::Const(_) => unreachable!(),
        }
    }

    /// Completely multiplicative extension along the spf chain.
    pub fn value_at(&self, m: u64) -> Result<UnitRotation> {
        if m == 0 {
            return domain("value_at needs m >= 1");
        }
        self.table.check_range("m", m)?;
        let spf = self.table.spf();
        let mut acc = UnitRotation::ONE;
        let mut m = m;
        while m > 1 {
            let p = spf[m as usize] as u64;
            acc = acc * self.prime_value_unchecked(p);
            m /= p;
        }
        Ok(acc)
    }

    /// Values `chi(1), ..., chi(m_max)` in order. With `memo`, each value is
    /// one multiplication of two earlier values; without it, each value is
    /// rebuilt from its spf chain in constant memory.
    pub fn values(&self, m_max: u64, memo: bool) -> Result<ChiValues<'a>> {
        self.table.check_range("m", m_max)?;
        Ok(ChiValues {
            chi: *self,
            next: 1,
            end: m_max,
            memo: memo.then(|| Vec::with_capacity(m_max as usize + 1)),
        })
    }
}

pub struct ChiValues<'a> {
    chi: ChiFunction<'a>,
    next: u64,
    end: u64,
    memo: Option<Vec<UnitRotation>>,
}

impl Iterator for ChiValues<'_> {
    type Item = UnitRotation;

    fn next(&mut self) -> Option<UnitRotation> {
        if self.next > self.end {
            return None;
        }
        let m = self.next;
        self.next += 1;
        let value = match &mut self.memo {
            Some(memo) => {
                if memo.is_empty() {
                    memo.push(UnitRotation::ZERO); // index 0 unused
                }
                let v = if m == 1 {
                    UnitRotation::ONE
                } else {
                    let p = self.chi.table.spf()[m as usize] as u64;
                    if p == m {
                        self.chi.prime_value_unchecked(p)
                    } else {
                        memo[p as usize] * memo[(m / p) as usize]
                    }
                };
                memo.push(v);
                v
            }
            None => self.chi.value_at(m).expect("m within table range"),
        };
        Some(value)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end + 1).saturating_sub(self.next) as usize;
        (n, Some(n))
    }
}
