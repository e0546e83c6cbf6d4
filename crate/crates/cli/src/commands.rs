use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

use fibzeta::continuation::evaluate;
use fibzeta::crosscheck::{pole_lattice, PoleSet, PoleSpec};
use fibzeta::lattice::{nearest_pole, LatticeKind};
use fibzeta::quadfield::Membership;
use fibzeta::verify::{run_suite, SuiteReport, VerifyConfig, SUITES};
use fibzeta::{Complex, Error, Method, Parity, QuadraticField, UnitNorm};

use crate::grid::{run_grid, GridRequest, Range, CSV_HEADER};
use crate::literal::{format_complex, parse_complex};
use crate::settings::{Settings, PRECISION_ENV};

#[derive(Debug, Parser)]
#[command(name = "fibzeta", version)]
#[command(about = "Zeta functions of O_D Fibonacci numbers and their continuations")]
pub struct Cli {
    /// key = value settings file (precision, tol, pole_guard_radius, region bounds, seed)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Decimal digits of log(eps); overrides FIBZETA_PRECISION and the config file
    #[arg(long, global = true)]
    pub precision: Option<u32>,

    /// Radius around lattice poles inside which evaluation is refused
    #[arg(long, global = true)]
    pub pole_guard: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one zeta value
    Eval(EvalArgs),
    /// Evaluate on a rectangular grid of s
    Grid(GridArgs),
    /// Tabulate lattice poles and their residues
    Poles(PolesArgs),
    /// Run a verification suite
    Verify(VerifyArgs),
    /// Print F_D(n), L_D(n) and the norm identity
    Sequence(SequenceArgs),
    /// Decide whether n is an O_D Fibonacci number
    Detect(DetectArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long = "D", visible_alias = "d")]
    pub d: u64,
    /// Complex literal such as 1, -2.5+0.3i, 0.5-14.1i
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    /// odd, even or combined
    #[arg(long, default_value = "combined")]
    pub parity: String,
    /// binomial, poisson, direct or shifted_convolution
    #[arg(long, default_value = "binomial")]
    pub method: String,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long = "D", visible_alias = "d")]
    pub d: u64,
    #[arg(long, default_value = "combined")]
    pub parity: String,
    /// lo:hi:step (inclusive) or a single value
    #[arg(long, allow_hyphen_values = true)]
    pub re: String,
    #[arg(long, allow_hyphen_values = true)]
    pub im: String,
    /// Comma-separated methods
    #[arg(long, value_delimiter = ',', default_value = "binomial,poisson")]
    pub methods: Vec<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct PolesArgs {
    #[arg(long = "D", visible_alias = "d")]
    pub d: u64,
    #[arg(long, default_value_t = 2)]
    pub kmax: u32,
    #[arg(long, default_value_t = 3)]
    pub mmax: u32,
    /// odd, even or combined
    #[arg(long, default_value = "combined")]
    pub which: String,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated list of D
    #[arg(
        long = "D",
        visible_alias = "d",
        value_delimiter = ',',
        default_value = "2,5,10,13"
    )]
    pub d: Vec<u64>,
    /// Suite name, or "all"
    #[arg(long)]
    pub suite: String,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random points per field for cross-method
    #[arg(long)]
    pub points: Option<usize>,
    /// Upper end of the Pell membership scan
    #[arg(long)]
    pub pell_limit: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SequenceArgs {
    #[arg(long = "D", visible_alias = "d")]
    pub d: u64,
    /// Last index printed
    #[arg(long)]
    pub n: u64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[arg(long = "D", visible_alias = "d")]
    pub d: u64,
    /// Positive integer of any size
    #[arg(long)]
    pub n: String,
    /// Require the odd/even index verdict (fails for norm +1 fields)
    #[arg(long)]
    pub parity: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

/// Failure classes with their exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    Domain(String),
    /// Output was produced but contains failed rows or checks.
    ChecksFailed(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::ChecksFailed(_) | CliError::Io(_) => 3,
            CliError::Domain(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Domain(m) => write!(f, "domain error: {m}"),
            CliError::ChecksFailed(m) => write!(f, "failed: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = format!("{}: {e}", e.name());
        match e {
            Error::InvalidArgument(_) => CliError::Usage(msg),
            _ if e.is_domain_error() => CliError::Domain(msg),
            _ => CliError::Numerical(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

pub type CliResult = Result<(), CliError>;

fn settings(cli: &Cli, env_precision: Option<&str>) -> Result<Settings, CliError> {
    let mut s = Settings::load(cli.config.as_deref(), env_precision).map_err(CliError::Usage)?;
    if let Some(p) = cli.precision {
        s.precision = p;
    }
    if let Some(g) = cli.pole_guard {
        s.opts.pole_guard_radius = g;
    }
    s.validate().map_err(CliError::Usage)?;
    Ok(s)
}

fn field(d: u64, s: &Settings) -> Result<QuadraticField, CliError> {
    Ok(QuadraticField::with_precision(d, s.precision)?)
}

fn parity(text: &str) -> Result<Parity, CliError> {
    Parity::parse(text).ok_or_else(|| CliError::Usage(format!("unknown parity '{text}'")))
}

fn method(text: &str) -> Result<Method, CliError> {
    Method::parse(text).ok_or_else(|| CliError::Usage(format!("unknown method '{text}'")))
}

fn with_tol(s: &mut Settings, tol: Option<f64>) -> Result<(), CliError> {
    if let Some(t) = tol {
        s.opts.tol = t;
        s.validate().map_err(CliError::Usage)?;
    }
    Ok(())
}

/// Runs a parsed command, writing results to `out`. `env_precision` is the
/// value of FIBZETA_PRECISION, passed in so tests need not touch the process
/// environment.
pub fn run(cli: &Cli, env_precision: Option<&str>, out: &mut dyn Write) -> CliResult {
    let mut s = settings(cli, env_precision)?;
    match &cli.command {
        Command::Eval(a) => {
            with_tol(&mut s, a.tol)?;
            cmd_eval(a, &s, out)
        }
        Command::Grid(a) => {
            with_tol(&mut s, a.tol)?;
            cmd_grid(a, &s, out)
        }
        Command::Poles(a) => cmd_poles(a, &s, out),
        Command::Verify(a) => cmd_verify(a, &s, out),
        Command::Sequence(a) => cmd_sequence(a, &s, out),
        Command::Detect(a) => cmd_detect(a, &s, out),
    }
}

pub fn env_precision() -> Option<String> {
    std::env::var(PRECISION_ENV).ok()
}

#[derive(Serialize)]
struct PoleRef {
    k: u32,
    m: i64,
    re: f64,
    im: f64,
    distance: f64,
}

#[derive(Serialize)]
struct EvalRecord {
    d: u64,
    re_s: f64,
    im_s: f64,
    parity: Parity,
    method: Method,
    re_z: f64,
    im_z: f64,
    terms_used: usize,
    tail_bound: f64,
    nearest_pole: PoleRef,
    log_eps: String,
}

fn cmd_eval(a: &EvalArgs, s: &Settings, out: &mut dyn Write) -> CliResult {
    let f = field(a.d, s)?;
    let point = parse_complex(&a.s).map_err(|e| CliError::Usage(e.to_string()))?;
    let (par, m) = (parity(&a.parity)?, method(&a.method)?);
    let z = evaluate(&f, point, par, m, &s.opts)?;
    let kind = match (par, f.norm()) {
        (_, UnitNorm::Plus) => LatticeKind::NormPlusOne,
        (Parity::Combined, _) => LatticeKind::Combined,
        _ => LatticeKind::Split,
    };
    let (pole, distance) = nearest_pole(kind, f.log_eps(), point);
    let rec = EvalRecord {
        d: a.d,
        re_s: point.re,
        im_s: point.im,
        parity: par,
        method: z.method,
        re_z: z.value.re,
        im_z: z.value.im,
        terms_used: z.terms_used,
        tail_bound: z.tail_bound,
        nearest_pole: PoleRef {
            k: pole.k,
            m: pole.m,
            re: pole.location.re,
            im: pole.location.im,
            distance,
        },
        log_eps: f.log_eps_high_precision().to_string(),
    };
    match a.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rec)?)?,
        Format::Csv => {
            writeln!(out, "D,re_s,im_s,parity,method,re_z,im_z,terms_used,tail_bound,pole_k,pole_m,pole_distance")?;
            writeln!(
                out,
                "{},{:.16e},{:.16e},{},{},{:.16e},{:.16e},{},{:.16e},{},{},{:.16e}",
                rec.d,
                rec.re_s,
                rec.im_s,
                par.name(),
                z.method.name(),
                rec.re_z,
                rec.im_z,
                rec.terms_used,
                rec.tail_bound,
                pole.k,
                pole.m,
                distance
            )?;
        }
        Format::Text => {
            writeln!(out, "D             {}", a.d)?;
            writeln!(out, "s             {}", format_complex(point))?;
            writeln!(out, "parity        {}", par.name())?;
            writeln!(out, "method        {}", z.method.name())?;
            writeln!(out, "value         {}", format_complex(z.value))?;
            writeln!(out, "terms_used    {}", z.terms_used)?;
            writeln!(out, "tail_bound    {:.3e}", z.tail_bound)?;
            writeln!(
                out,
                "nearest_pole  k={} m={} at {} (distance {:.6e})",
                pole.k,
                pole.m,
                format_complex(pole.location),
                distance
            )?;
        }
    }
    Ok(())
}

fn cmd_grid(a: &GridArgs, s: &Settings, out: &mut dyn Write) -> CliResult {
    let f = field(a.d, s)?;
    let methods = a
        .methods
        .iter()
        .map(|m| method(m))
        .collect::<Result<Vec<_>, _>>()?;
    let req = GridRequest {
        d: a.d,
        parity: parity(&a.parity)?,
        re: Range::parse(&a.re).map_err(CliError::Usage)?,
        im: Range::parse(&a.im).map_err(CliError::Usage)?,
        methods,
    };
    let rows = run_grid(&f, &req, &s.opts);
    match a.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?,
        Format::Csv | Format::Text => {
            writeln!(out, "{CSV_HEADER}")?;
            for r in &rows {
                writeln!(out, "{}", r.to_csv())?;
            }
        }
    }
    let failed = rows.iter().filter(|r| r.is_failure()).count();
    if failed > 0 {
        return Err(CliError::ChecksFailed(format!("{failed} grid rows failed")));
    }
    Ok(())
}

fn opt_parts(z: Option<Complex>) -> (String, String) {
    match z {
        Some(z) => (format!("{:.16e}", z.re), format!("{:.16e}", z.im)),
        None => (String::new(), String::new()),
    }
}

fn pole_csv(p: &PoleSpec) -> String {
    let (ro, io) = opt_parts(p.residue_odd);
    let (re, ie) = opt_parts(p.residue_even);
    format!(
        "{},{},{:.16e},{:.16e},{ro},{io},{re},{ie},{:.16e},{:.16e},{}",
        p.k,
        p.m,
        p.location.re,
        p.location.im,
        p.residue_combined.re,
        p.residue_combined.im,
        p.survives_in_combined
    )
}

fn cmd_poles(a: &PolesArgs, s: &Settings, out: &mut dyn Write) -> CliResult {
    let f = field(a.d, s)?;
    let which = PoleSet::parse(&a.which)
        .ok_or_else(|| CliError::Usage(format!("unknown pole set '{}'", a.which)))?;
    let poles = pole_lattice(&f, a.kmax, a.mmax, which)?;
    match a.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&poles)?)?,
        Format::Csv => {
            writeln!(out, "k,m,re_s0,im_s0,re_res_odd,im_res_odd,re_res_even,im_res_even,re_res_combined,im_res_combined,survives_in_combined")?;
            for p in &poles {
                writeln!(out, "{}", pole_csv(p))?;
            }
        }
        Format::Text => {
            let shown = |z: Option<Complex>| z.map(format_complex).unwrap_or_else(|| "-".into());
            writeln!(
                out,
                "{:>3} {:>4}  {:<48} {:<48} {:<48} {:<48} survives",
                "k", "m", "s0", "res_odd", "res_even", "res_combined"
            )?;
            for p in &poles {
                writeln!(
                    out,
                    "{:>3} {:>4}  {:<48} {:<48} {:<48} {:<48} {}",
                    p.k,
                    p.m,
                    format_complex(p.location),
                    shown(p.residue_odd),
                    shown(p.residue_even),
                    format_complex(p.residue_combined),
                    p.survives_in_combined
                )?;
            }
        }
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, s: &Settings, out: &mut dyn Write) -> CliResult {
    let suites: Vec<&str> = if a.suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&a.suite.as_str()) {
        vec![a.suite.as_str()]
    } else {
        return Err(CliError::Usage(format!(
            "unknown suite '{}' (available: {}, all)",
            a.suite,
            SUITES.join(", ")
        )));
    };
    let defaults = VerifyConfig::default();
    let config = VerifyConfig {
        seed: a.seed.unwrap_or(s.seed),
        grid_points: a.points.unwrap_or(defaults.grid_points),
        pell_limit: a.pell_limit.unwrap_or(defaults.pell_limit),
        opts: s.opts.clone(),
    };
    let reports = suites
        .iter()
        .map(|name| run_suite(name, &a.d, &config))
        .collect::<Result<Vec<SuiteReport>, _>>()?;
    match a.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&reports)?)?,
        Format::Csv => {
            writeln!(out, "suite,check,status,max_deviation,tolerance")?;
            for r in &reports {
                for c in &r.checks {
                    let status = if c.passed { "PASS" } else { "FAIL" };
                    writeln!(
                        out,
                        "{},{},{status},{:.3e},{:.1e}",
                        r.suite, c.name, c.max_deviation, c.tolerance
                    )?;
                }
            }
        }
        Format::Text => {
            for r in &reports {
                for c in &r.checks {
                    let status = if c.passed { "PASS" } else { "FAIL" };
                    writeln!(
                        out,
                        "{status} [{}] {}: max deviation {:.3e} (tolerance {:.1e}; {})",
                        r.suite, c.name, c.max_deviation, c.tolerance, c.detail
                    )?;
                }
                let overall = if r.passed() { "PASS" } else { "FAIL" };
                writeln!(
                    out,
                    "{overall} suite {} (max deviation {:.3e})",
                    r.suite,
                    r.max_deviation()
                )?;
            }
        }
    }
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.suite.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::ChecksFailed(format!(
            "suites {}",
            failed.join(", ")
        )))
    }
}

#[derive(Serialize)]
struct SequenceRow {
    n: u64,
    fib: String,
    lucas: String,
    /// L^2 - q F^2
    norm_value: String,
    norm_ok: bool,
}

fn cmd_sequence(a: &SequenceArgs, s: &Settings, out: &mut dyn Write) -> CliResult {
    let f = field(a.d, s)?;
    let q = num_bigint::BigInt::from(f.q());
    let nsign = f.norm().sign();
    let rows: Vec<SequenceRow> = f
        .sequence()
        .take(a.n as usize + 1)
        .map(|t| {
            let value = &t.lucas * &t.lucas - &q * &t.fib * &t.fib;
            let expect = 4 * if t.index % 2 == 1 { nsign } else { 1 };
            SequenceRow {
                n: t.index,
                norm_ok: value == expect.into(),
                fib: t.fib.to_string(),
                lucas: t.lucas.to_string(),
                norm_value: value.to_string(),
            }
        })
        .collect();
    match a.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?,
        Format::Csv => {
            writeln!(out, "n,fib,lucas,norm_value,norm_ok")?;
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.n, r.fib, r.lucas, r.norm_value, r.norm_ok
                )?;
            }
        }
        Format::Text => {
            writeln!(
                out,
                "{:>5} {:>24} {:>24} {:>8} ok",
                "n", "F_D(n)", "L_D(n)", "L^2-qF^2"
            )?;
            for r in &rows {
                writeln!(
                    out,
                    "{:>5} {:>24} {:>24} {:>8} {}",
                    r.n, r.fib, r.lucas, r.norm_value, r.norm_ok
                )?;
            }
        }
    }
    if rows.iter().all(|r| r.norm_ok) {
        Ok(())
    } else {
        Err(CliError::ChecksFailed("norm identity".into()))
    }
}

#[derive(Serialize)]
struct DetectRecord {
    d: u64,
    n: String,
    verdict: &'static str,
    witness: Vec<String>,
}

fn cmd_detect(a: &DetectArgs, s: &Settings, out: &mut dyn Write) -> CliResult {
    let f = field(a.d, s)?;
    let n: BigUint = a
        .n
        .parse()
        .ok()
        .filter(|n: &BigUint| *n > BigUint::from(0u8))
        .ok_or_else(|| CliError::Usage(format!("n must be a positive integer, got '{}'", a.n)))?;
    let verdict = if a.parity {
        f.is_fib_with_parity(&n)?
    } else {
        f.is_fib(&n)
    };
    let witness = match &verdict {
        Membership::NotMember => vec![],
        Membership::Member { witness }
        | Membership::EvenIndex { witness }
        | Membership::OddIndex { witness } => {
            vec![witness.to_string()]
        }
        Membership::BothParities {
            even_witness,
            odd_witness,
        } => {
            vec![even_witness.to_string(), odd_witness.to_string()]
        }
    };
    let rec = DetectRecord {
        d: a.d,
        n: n.to_string(),
        verdict: verdict.name(),
        witness,
    };
    match a.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rec)?)?,
        Format::Csv => writeln!(
            out,
            "D,n,verdict,witness\n{},{},{},{}",
            rec.d,
            rec.n,
            rec.verdict,
            rec.witness.join(";")
        )?,
        Format::Text => {
            write!(out, "{}", rec.verdict)?;
            if !rec.witness.is_empty() {
                write!(out, " (X = {})", rec.witness.join(", "))?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}
