//! `horomean` command-line front end. Standard output carries data only (CSV
//! or JSON); notes and diagnostics go to standard error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Number, Value};

use crate::bound::{verify_bound, QConvention};
use crate::census::{cyclotomic_coset_count, iq_count, large_order_census, sk_census};
use crate::chi::{ChiFunction, ChiKind};
use crate::error::{Error, Result};
use crate::mean::{mean_series, Schedule};
use crate::rotation::UnitRotation;
use crate::series::{
    artin_constant, artin_density, delange_diag, eq2_identity_check, evaluate_series, residue_probe,
};
use crate::table::{build_prime_table, load_table, save_table, PrimeTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;

pub const CACHE_ENV: &str = "HOROMEAN_CACHE";

#[derive(Debug, Parser)]
#[command(
    name = "horomean",
    version,
    about = "Mean values of multiplicative functions built from multiplicative orders modulo primes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build (and cache) the table of orders f_q(p) and quotients t_q(p) = (p-1)/f_q(p)
    Table(TableArgs),
    /// Running mean values M_n(chi) = (1/n) sum_{m<=n} chi(m) at checkpoints
    Mean(MeanArgs),
    /// Compare |M_n(chi)| with the explicit lattice-point bound on the mean value
    Bound(BoundArgs),
    /// Truncated Euler product and Dirichlet sum of C(s, chi)
    Series(SeriesArgs),
    /// Prime sums sum_{p<=x} (1 - chi(p))/p from Delange's mean-value theorem
    Delange(DelangeArgs),
    /// (s - 1) C_X(s, chi) for s approaching 1 from above
    Residue(SeriesArgs),
    /// Check 2 sum_{t_p = t} p^-s = log zeta(s) - log C(s, psi_t) + (k >= 2 tail)
    Eq2(Eq2Args),
    /// Fraction of primes p <= x with t_q(p) = t, next to the Artin constant
    Density(DensityArgs),
    /// Census of primes with t_q(p) not dividing k, or with f_q(p) > (p-1)/log p
    Census(CensusArgs),
    /// Irreducible factor count of x^m - 1 over F_q, by divisor sum and by cyclotomic cosets
    Iq(IqArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Directory for cached prime tables (falls back to $HOROMEAN_CACHE)
    #[arg(long = "cache-dir")]
    cache_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
enum ChiName {
    Chi0,
    Psi,
    Varpi,
    Psit,
    Psipow,
    Const,
}

#[derive(Debug, Args)]
struct ChiArgs {
    /// Multiplicative function
    #[arg(long, value_enum)]
    chi: ChiName,
    /// Prime base q
    #[arg(long, default_value_t = 2)]
    q: u64,
    /// t for psit
    #[arg(long)]
    t: Option<u64>,
    /// k for psipow
    #[arg(long)]
    k: Option<u64>,
    /// Value at every prime for const, as `a/d` or `0`
    #[arg(long)]
    value: Option<String>,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long)]
    x: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct MeanArgs {
    #[command(flatten)]
    chi: ChiArgs,
    /// Largest n
    #[arg(long)]
    n: u64,
    /// `geometric` or a comma-separated list of n values
    #[arg(long, default_value = "geometric")]
    checkpoints: String,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[command(flatten)]
    chi: ChiArgs,
    /// Comma-separated n values
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u64>,
    /// Drop q from the prime list and set chi(q) = 0
    #[arg(long = "exclude-q")]
    exclude_q: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct SeriesArgs {
    #[command(flatten)]
    chi: ChiArgs,
    /// Comma-separated real s values, each > 1
    #[arg(long, value_delimiter = ',', required = true)]
    s: Vec<f64>,
    /// Truncation point for primes and integers
    #[arg(long)]
    cutoff: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct DelangeArgs {
    #[command(flatten)]
    chi: ChiArgs,
    /// Largest x
    #[arg(long)]
    x: u64,
    /// `geometric` or a comma-separated list of x values
    #[arg(long, default_value = "geometric")]
    checkpoints: String,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct Eq2Args {
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long, default_value_t = 1)]
    t: u64,
    #[arg(long, value_delimiter = ',', required = true)]
    s: Vec<f64>,
    #[arg(long)]
    cutoff: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct DensityArgs {
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long, default_value_t = 1)]
    t: u64,
    #[arg(long)]
    x: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct CensusArgs {
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long)]
    x: u64,
    /// Count primes with t_q(p) not dividing k; without it, count f_q(p) > (p-1)/log p
    #[arg(long)]
    k: Option<u64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct IqArgs {
    #[arg(long, default_value_t = 2)]
    q: u64,
    /// Comma-separated m values coprime to q
    #[arg(long, value_delimiter = ',', required = true)]
    m: Vec<u64>,
    #[command(flatten)]
    out: OutputArgs,
}

/// A validation failure detected by the front end itself.
fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

enum Cell {
    Int(u64),
    Float(f64),
    Bool(bool),
    Text(String),
}

/// Column-ordered result set rendered identically to CSV or JSON.
struct Frame {
    columns: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

impl Frame {
    fn new(columns: &'static [&'static str]) -> Self {
        Frame {
            columns,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut s = self.columns.join(",");
                s.push('\n');
                for row in &self.rows {
                    let fields: Vec<String> = row.iter().map(csv_cell).collect();
                    s.push_str(&fields.join(","));
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| (c.to_string(), json_cell(v)))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut s =
                    serde_json::to_string_pretty(&Value::Array(rows)).expect("serializable");
                s.push('\n');
                s
            }
        }
    }
}

/// 17 significant digits: enough to round-trip any f64.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_cell(c: &Cell) -> String {
    match c {
        Cell::Int(v) => v.to_string(),
        Cell::Float(v) => format_float(*v),
        Cell::Bool(v) => v.to_string(),
        Cell::Text(v) => v.clone(),
    }
}

fn json_cell(c: &Cell) -> Value {
    match c {
        Cell::Int(v) => Value::from(*v),
        Cell::Float(v) => {
            Number::from_f64(*v).map_or_else(|| Value::String(format_float(*v)), Value::Number)
        }
        Cell::Bool(v) => Value::Bool(*v),
        Cell::Text(v) => Value::String(v.clone()),
    }
}

struct Context<'e> {
    cache_dir: Option<PathBuf>,
    err: &'e mut dyn Write,
}

impl Context<'_> {
    fn note(&mut self, msg: impl AsRef<str>) {
        let _ = writeln!(self.err, "# {}", msg.as_ref());
    }

    fn table(&mut self, q: u64, x: u64) -> Result<PrimeTable> {
        let x = x.max(2);
        let Some(dir) = self.cache_dir.clone() else {
            return build_prime_table(q, x);
        };
        let path = table_path(&dir, q, x);
        if path.exists() {
            match load_table(&path) {
                Ok(t) if t.q() == q && t.limit() == x => {
                    self.note(format!("loaded {}", path.display()));
                    return Ok(t);
                }
                Ok(_) => self.note(format!(
                    "{} holds a different table; rebuilding",
                    path.display()
                )),
                Err(e) => self.note(format!("cached table unusable ({e}); rebuilding")),
            }
        }
        let t = build_prime_table(q, x)?;
        fs::create_dir_all(&dir)?;
        save_table(&t, &path)?;
        self.note(format!("saved {}", path.display()));
        Ok(t)
    }
}

pub fn table_path(dir: &Path, q: u64, x: u64) -> PathBuf {
    dir.join(format!("ptable-q{q}-x{x}.txt"))
}

impl ChiArgs {
    fn kind(&self) -> Result<ChiKind> {
        let need = |flag: &str, v: Option<u64>| match v {
            Some(0) => invalid(format!("--{flag} must be >= 1")),
            Some(v) => Ok(v),
            None => invalid(format!("--chi {} requires --{flag}", self.chi_name())),
        };
        let forbid = |flag: &str, present: bool| {
            if present {
                invalid(format!(
                    "--{flag} does not apply to --chi {}",
                    self.chi_name()
                ))
            } else {
                Ok(())
            }
        };
        if self.chi != ChiName::Psit {
            forbid("t", self.t.is_some())?;
        }
        if self.chi != ChiName::Psipow {
            forbid("k", self.k.is_some())?;
        }
        if self.chi != ChiName::Const {
            forbid("value", self.value.is_some())?;
        }
        let q = self.q;
        Ok(match self.chi {
            ChiName::Chi0 => ChiKind::Chi0,
            ChiName::Psi => ChiKind::Psi { q },
            ChiName::Varpi => ChiKind::Varpi { q },
            ChiName::Psit => ChiKind::PsiT {
                q,
                t: need("t", self.t)?,
            },
            ChiName::Psipow => ChiKind::PsiPow {
                q,
                k: need("k", self.k)?,
            },
            ChiName::Const => ChiKind::Const(
                self.value
                    .as_deref()
                    .map(str::parse::<UnitRotation>)
                    .transpose()?
                    .unwrap_or(UnitRotation::ONE),
            ),
        })
    }

    fn chi_name(&self) -> &'static str {
        match self.chi {
            ChiName::Chi0 => "chi0",
            ChiName::Psi => "psi",
            ChiName::Varpi => "varpi",
            ChiName::Psit => "psit",
            ChiName::Psipow => "psipow",
            ChiName::Const => "const",
        }
    }
}

fn parse_list(flag: &str, text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|v| {
            v.trim().parse::<u64>().map_err(|_| {
                Error::Domain(format!("--{flag}: {v:?} is not a non-negative integer"))
            })
        })
        .collect()
}

fn schedule_from(text: &str) -> Result<Schedule> {
    if text == "geometric" {
        Ok(Schedule::Geometric)
    } else {
        Ok(Schedule::Explicit(parse_list("checkpoints", text)?))
    }
}

fn check_prime_q(q: u64) -> Result<()> {
    if !crate::sieve::is_prime_trial(q) {
        return invalid(format!("--q {q} is not prime"));
    }
    Ok(())
}

fn check_s_values(s: &[f64]) -> Result<()> {
    if let Some(bad) = s.iter().find(|&&v| !(v > 1.0 && v.is_finite())) {
        return invalid(format!("--s values must be finite and > 1, got {bad}"));
    }
    Ok(())
}

fn with_chi<T>(
    ctx: &mut Context<'_>,
    args: &ChiArgs,
    limit: u64,
    f: impl FnOnce(&mut Context<'_>, &ChiFunction<'_>) -> Result<T>,
) -> Result<T> {
    let kind = args.kind()?;
    check_prime_q(args.q)?;
    let table = ctx.table(args.q, limit)?;
    let chi = ChiFunction::new(kind, &table)?;
    if let Some(note) = chi.convention_note() {
        ctx.note(note);
    }
    f(ctx, &chi)
}

fn dispatch(cli: Cli, ctx: &mut Context<'_>) -> Result<(Frame, Format, i32)> {
    match cli.command {
        Command::Table(a) => {
            check_prime_q(a.q)?;
            if a.x < 2 {
                return invalid("--x must be >= 2");
            }
            let t = ctx.table(a.q, a.x)?;
            let mut fr = Frame::new(&["q", "x", "count", "crc32"]);
            fr.push(vec![
                Cell::Int(t.q()),
                Cell::Int(t.limit()),
                Cell::Int(t.records().len() as u64),
                Cell::Text(format!("{:08x}", t.checksum())),
            ]);
            Ok((fr, a.out.format, EXIT_OK))
        }
        Command::Mean(a) => {
            if a.n == 0 {
                return invalid("--n must be >= 1");
            }
            let schedule = schedule_from(&a.checkpoints)?;
            schedule.points(a.n)?;
            with_chi(ctx, &a.chi, a.n, |_, chi| {
                let series = mean_series(chi, a.n, &schedule)?;
                let mut fr = Frame::new(&["n", "re", "im", "abs"]);
                for c in &series.checkpoints {
                    fr.push(vec![
                        Cell::Int(c.n),
                        Cell::Float(c.mean.re),
                        Cell::Float(c.mean.im),
                        Cell::Float(c.magnitude),
                    ]);
                }
                Ok((fr, a.out.format, EXIT_OK))
            })
        }
        Command::Bound(a) => {
            if a.n.contains(&0) {
                return invalid("--n values must be >= 1");
            }
            let kind = a.chi.kind()?;
            let convention = if a.exclude_q {
                if kind.q().is_none() {
                    return invalid(format!(
                        "--exclude-q does not apply to --chi {}",
                        a.chi.chi_name()
                    ));
                }
                QConvention::ExcludeQ
            } else {
                QConvention::default_for(kind)
            };
            let n_max = *a.n.iter().max().expect("required");
            with_chi(ctx, &a.chi, n_max, |ctx, chi| {
                ctx.note(format!("bound variant: {}", convention.label()));
                let reports = verify_bound(chi, &a.n, convention)?;
                let mut fr = Frame::new(&["n", "N", "bound", "actual", "holds"]);
                for r in reports {
                    fr.push(vec![
                        Cell::Int(r.n),
                        Cell::Int(r.count as u64),
                        Cell::Float(r.bound),
                        Cell::Float(r.actual),
                        Cell::Bool(r.holds),
                    ]);
                }
                Ok((fr, a.out.format, EXIT_OK))
            })
        }
        Command::Series(a) => {
            check_s_values(&a.s)?;
            if a.cutoff == 0 {
                return invalid("--cutoff must be >= 1");
            }
            with_chi(ctx, &a.chi, a.cutoff, |_, chi| {
                let mut fr =
                    Frame::new(&["s", "cutoff", "euler_re", "euler_im", "dir_re", "dir_im"]);
                for &s in &a.s {
                    let e = evaluate_series(chi, s, a.cutoff)?;
                    fr.push(vec![
                        Cell::Float(s),
                        Cell::Int(a.cutoff),
                        Cell::Float(e.euler_value.re),
                        Cell::Float(e.euler_value.im),
                        Cell::Float(e.dirichlet_value.re),
                        Cell::Float(e.dirichlet_value.im),
                    ]);
                }
                Ok((fr, a.out.format, EXIT_OK))
            })
        }
        Command::Delange(a) => {
            if a.x < 2 {
                return invalid("--x must be >= 2");
            }
            let xs = schedule_from(&a.checkpoints)?.points(a.x)?;
            with_chi(ctx, &a.chi, a.x, |ctx, chi| {
                let d = delange_diag(chi, &xs)?;
                ctx.note(format!(
                    "product prediction at x={}: {} {}",
                    a.x,
                    format_float(d.product_prediction.re),
                    format_float(d.product_prediction.im)
                ));
                let mut fr = Frame::new(&["x", "re", "im"]);
                for (x, s) in d.partial_sums {
                    fr.push(vec![Cell::Int(x), Cell::Float(s.re), Cell::Float(s.im)]);
                }
                Ok((fr, a.out.format, EXIT_OK))
            })
        }
        Command::Residue(a) => {
            check_s_values(&a.s)?;
            if a.cutoff == 0 {
                return invalid("--cutoff must be >= 1");
            }
            with_chi(ctx, &a.chi, a.cutoff, |_, chi| {
                let deltas: Vec<f64> = a.s.iter().map(|s| s - 1.0).collect();
                let mut fr = Frame::new(&["s", "delta", "re", "im"]);
                for ((s, v), delta) in residue_probe(chi, &deltas, a.cutoff)?
                    .into_iter()
                    .zip(deltas)
                {
                    fr.push(vec![
                        Cell::Float(s),
                        Cell::Float(delta),
                        Cell::Float(v.re),
                        Cell::Float(v.im),
                    ]);
                }
                Ok((fr, a.out.format, EXIT_OK))
            })
        }
        Command::Eq2(a) => {
            check_prime_q(a.q)?;
            check_s_values(&a.s)?;
            if a.t == 0 {
                return invalid("--t must be >= 1");
            }
            let table = ctx.table(a.q, a.cutoff)?;
            let mut fr =
                Frame::new(&["q", "t", "s", "cutoff", "lhs", "rhs", "k2_tail", "residual"]);
            for &s in &a.s {
                let c = eq2_identity_check(&table, a.t, s, a.cutoff.max(1))?;
                fr.push(vec![
                    Cell::Int(c.q),
                    Cell::Int(c.t),
                    Cell::Float(c.s),
                    Cell::Int(c.cutoff),
                    Cell::Float(c.lhs),
                    Cell::Float(c.rhs),
                    Cell::Float(c.k2_tail),
                    Cell::Float(c.residual()),
                ]);
            }
            Ok((fr, a.out.format, EXIT_OK))
        }
        Command::Density(a) => {
            check_prime_q(a.q)?;
            if a.t == 0 {
                return invalid("--t must be >= 1");
            }
            if a.x < 2 {
                return invalid("--x must be >= 2");
            }
            let table = ctx.table(a.q, a.x)?;
            let d = artin_density(&table, a.t, a.x)?;
            let c = artin_constant(a.x)?;
            let mut fr = Frame::new(&[
                "q",
                "t",
                "x",
                "count",
                "pi",
                "density",
                "artin_constant_ref",
            ]);
            fr.push(vec![
                Cell::Int(d.q),
                Cell::Int(d.t),
                Cell::Int(d.x),
                Cell::Int(d.count),
                Cell::Int(d.pi_x),
                Cell::Float(d.density),
                Cell::Float(c),
            ]);
            Ok((fr, a.out.format, EXIT_OK))
        }
        Command::Census(a) => {
            check_prime_q(a.q)?;
            if a.k == Some(0) {
                return invalid("--k must be >= 1");
            }
            let table = ctx.table(a.q, a.x)?;
            let census = match a.k {
                Some(k) => sk_census(&table, k, a.x)?,
                None => large_order_census(&table, a.x)?,
            };
            ctx.note(format!("count={}", census.count));
            let mut fr = Frame::new(&["p", "f", "t", "flag"]);
            for r in census.rows {
                fr.push(vec![
                    Cell::Int(r.p),
                    Cell::Int(r.f),
                    Cell::Int(r.t),
                    Cell::Bool(r.flag),
                ]);
            }
            Ok((fr, a.out.format, EXIT_OK))
        }
        Command::Iq(a) => {
            check_prime_q(a.q)?;
            if let Some(&bad) = a.m.iter().find(|&&m| m == 0 || m % a.q == 0) {
                return invalid(format!("--m {bad} must be >= 1 and coprime to q = {}", a.q));
            }
            let m_max = *a.m.iter().max().expect("required");
            let table = ctx.table(a.q, m_max)?;
            let mut fr = Frame::new(&["m", "iq", "coset_count", "match"]);
            let mut code = EXIT_OK;
            for &m in &a.m {
                let iq = iq_count(&table, m)?;
                let cosets = cyclotomic_coset_count(a.q, m)?;
                if iq != cosets {
                    ctx.note(format!(
                        "mismatch at m={m}: divisor sum {iq}, cosets {cosets}"
                    ));
                    code = EXIT_INCONSISTENT;
                }
                fr.push(vec![
                    Cell::Int(m),
                    Cell::Int(iq),
                    Cell::Int(cosets),
                    Cell::Bool(iq == cosets),
                ]);
            }
            Ok((fr, a.out.format, code))
        }
    }
}

fn output_args(cli: &Cli) -> &OutputArgs {
    match &cli.command {
        Command::Table(a) => &a.out,
        Command::Mean(a) => &a.out,
        Command::Bound(a) => &a.out,
        Command::Series(a) | Command::Residue(a) => &a.out,
        Command::Delange(a) => &a.out,
        Command::Eq2(a) => &a.out,
        Command::Density(a) => &a.out,
        Command::Census(a) => &a.out,
        Command::Iq(a) => &a.out,
    }
}

/// Runs one invocation; `args` includes the program name. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    EXIT_INVALID
                }
            };
        }
    };
    let cache_dir = output_args(&cli).cache_dir.clone().or_else(|| {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    });
    let mut ctx = Context { cache_dir, err };
    match dispatch(cli, &mut ctx) {
        Ok((frame, format, code)) => {
            if out.write_all(frame.render(format).as_bytes()).is_err() {
                return EXIT_INVALID;
            }
            code
        }
        Err(e) => {
            let code = match e {
                Error::Consistency(_) => EXIT_INCONSISTENT,
                _ => EXIT_INVALID,
            };
            let _ = writeln!(ctx.err, "error: {e}");
            code
        }
    }
}
