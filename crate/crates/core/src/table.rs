//! Per-prime orders `f_q(p)` and quotients `t_q(p)` for a fixed prime base,
//! with a versioned, checksummed text cache.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{domain, Error, LoadError, Result};
use crate::order::{mod_pow, order_from_factors};
use crate::sieve::{distinct_prime_factors, is_prime_trial, linear_sieve};

pub const TABLE_HEADER: &str = "horomean-ptable v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeRecord {
    pub p: u64,
    /// Multiplicative order of q modulo p.
    pub f: u64,
    /// (p - 1) / f
    pub t: u64,
}

/// Immutable once built. `records` covers every prime `p <= limit` except `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    q: u64,
    limit: u64,
    records: Vec<PrimeRecord>,
    spf: Vec<u32>,
}

impl PrimeTable {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn records(&self) -> &[PrimeRecord] {
        &self.records
    }

    pub fn spf(&self) -> &[u32] {
        &self.spf
    }

    pub fn is_prime(&self, m: u64) -> bool {
        m >= 2 && m <= self.limit && self.spf[m as usize] as u64 == m
    }

    pub fn record(&self, p: u64) -> Option<&PrimeRecord> {
        self.records
            .binary_search_by_key(&p, |r| r.p)
            .ok()
            .map(|i| &self.records[i])
    }

    /// Records with `p <= x`.
    pub fn records_upto(&self, x: u64) -> &[PrimeRecord] {
        let end = self.records.partition_point(|r| r.p <= x);
        &self.records[..end]
    }

    /// Every prime `p <= x` including `q`, ascending.
    pub fn primes_upto(&self, x: u64) -> impl Iterator<Item = u64> + '_ {
        (2..=x.min(self.limit)).filter(move |&m| self.spf[m as usize] as u64 == m)
    }

    /// Number of primes `<= x`, counting `q`.
    pub fn prime_count(&self, x: u64) -> u64 {
        let x = x.min(self.limit);
        let without_q = self.records_upto(x).len() as u64;
        without_q + u64::from(self.q <= x)
    }

    pub(crate) fn check_range(&self, what: &'static str, value: u64) -> Result<()> {
        if value > self.limit {
            return Err(Error::Range {
                what,
                value,
                limit: self.limit,
            });
        }
        Ok(())
    }

    /// CRC-32 of the record block as it appears in the cache file.
    pub fn checksum(&self) -> u32 {
        crc32fast::hash(record_block(&self.records).as_bytes())
    }
}

fn record_block(records: &[PrimeRecord]) -> String {
    let mut s = String::with_capacity(records.len() * 16);
    for r in records {
        writeln!(s, "{},{},{}", r.p, r.f, r.t).expect("write to String");
    }
    s
}

/// Orders are computed in parallel; `collect` keeps ascending-p order so the
/// result does not depend on scheduling.
pub fn build_prime_table(q: u64, x: u64) -> Result<PrimeTable> {
    if x < 2 {
        return domain(format!("table limit must be >= 2, got {x}"));
    }
    if !is_prime_trial(q) {
        return domain(format!("base q = {q} is not prime"));
    }
    let sieve = linear_sieve(x)?;
    let spf = sieve.spf;
    let records = sieve
        .primes
        .par_iter()
        .filter(|&&p| p != q)
        .map(|&p| {
            let factors = distinct_prime_factors(&spf, p - 1);
            let f = order_from_factors(q, p, &factors);
            PrimeRecord {
                p,
                f,
                t: (p - 1) / f,
            }
        })
        .collect();
    Ok(PrimeTable {
        q,
        limit: x,
        records,
        spf,
    })
}

pub fn save_table(table: &PrimeTable, path: &Path) -> Result<()> {
    let block = record_block(&table.records);
    let crc = crc32fast::hash(block.as_bytes());
    let mut out = String::with_capacity(block.len() + 64);
    writeln!(out, "{TABLE_HEADER}").unwrap();
    writeln!(
        out,
        "q={} x={} count={}",
        table.q,
        table.limit,
        table.records.len()
    )
    .unwrap();
    out.push_str(&block);
    writeln!(out, "crc32={crc:08x}").unwrap();
    // Readers never observe a partially written file.
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, out)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn malformed(line: usize, reason: impl Into<String>) -> Error {
    LoadError::Malformed {
        line,
        reason: reason.into(),
    }
    .into()
}

fn parse_kv(token: Option<&str>, key: &str, line: usize) -> Result<u64> {
    let token = token.ok_or_else(|| malformed(line, format!("missing {key}=")))?;
    let value = token
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| malformed(line, format!("expected {key}=<value>, got {token:?}")))?;
    value
        .parse()
        .map_err(|_| malformed(line, format!("bad integer in {token:?}")))
}

/// Parses, checksums, and cross-checks a cached table against a fresh sieve.
/// Any defect yields an error and no table.
pub fn load_table(path: &Path) -> Result<PrimeTable> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.split_inclusive('\n');

    let header = lines.next().unwrap_or("").trim_end_matches('\n');
    if header != TABLE_HEADER {
        return Err(LoadError::Version {
            found: header.to_string(),
            expected: TABLE_HEADER,
        }
        .into());
    }
    let meta = lines
        .next()
        .ok_or_else(|| malformed(2, "missing parameter line"))?
        .trim_end_matches('\n');
    let mut tokens = meta.split(' ');
    let q = parse_kv(tokens.next(), "q", 2)?;
    let x = parse_kv(tokens.next(), "x", 2)?;
    let count = parse_kv(tokens.next(), "count", 2)? as usize;
    if tokens.next().is_some() {
        return Err(malformed(2, "trailing tokens"));
    }

    let mut records = Vec::with_capacity(count.min(1 << 20));
    let mut block = String::new();
    for i in 0..count {
        let lineno = i + 3;
        let raw = lines
            .next()
            .ok_or_else(|| malformed(lineno, "file ends before all records"))?;
        if !raw.ends_with('\n') {
            return Err(malformed(lineno, "truncated record"));
        }
        block.push_str(raw);
        let mut fields = raw.trim_end_matches('\n').split(',');
        let mut next = |name: &str| -> Result<u64> {
            fields
                .next()
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| malformed(lineno, format!("bad field {name}")))
        };
        let rec = PrimeRecord {
            p: next("p")?,
            f: next("f")?,
            t: next("t")?,
        };
        if fields.next().is_some() {
            return Err(malformed(lineno, "extra fields"));
        }
        records.push(rec);
    }

    let trailer_line = count + 3;
    let trailer = lines
        .next()
        .ok_or_else(|| malformed(trailer_line, "missing checksum line"))?
        .trim_end_matches('\n');
    let hex = trailer
        .strip_prefix("crc32=")
        .ok_or_else(|| malformed(trailer_line, "expected crc32=<hex>"))?;
    let stored =
        u32::from_str_radix(hex, 16).map_err(|_| malformed(trailer_line, "bad checksum hex"))?;
    if lines.next().is_some() {
        return Err(malformed(trailer_line + 1, "content after checksum"));
    }
    let computed = crc32fast::hash(block.as_bytes());
    if computed != stored {
        return Err(LoadError::Checksum { stored, computed }.into());
    }

    if x < 2 || !is_prime_trial(q) {
        return Err(LoadError::Inconsistent(format!("invalid parameters q={q} x={x}")).into());
    }
    let sieve = linear_sieve(x)?;
    let expected = sieve.primes.iter().copied().filter(|&p| p != q);
    if !records.iter().map(|r| r.p).eq(expected) {
        return Err(LoadError::Inconsistent("record primes differ from the sieve".into()).into());
    }
    if let Some(r) = records.iter().find(|r| r.f == 0 || r.f * r.t != r.p - 1) {
        return Err(LoadError::Inconsistent(format!("f*t != p-1 at p={}", r.p)).into());
    }
    let is_order = |r: &PrimeRecord| {
        mod_pow(q, r.f, r.p) == 1
            && distinct_prime_factors(&sieve.spf, r.f)
                .iter()
                .all(|&l| mod_pow(q, r.f / l, r.p) != 1)
    };
    if let Some(r) = records.iter().find(|r| !is_order(r)) {
        return Err(LoadError::Inconsistent(format!("f is not the order of q mod {}", r.p)).into());
    }
    Ok(PrimeTable {
        q,
        limit: x,
        records,
        spf: sieve.spf,
    })
}
