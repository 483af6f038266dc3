//! Command-line front end. Every command writes one JSON Lines report to
//! stdout and returns the report's exit code.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::bigpoly::{Family, IntPolynomial};
use crate::catalog::{Catalog, CatalogError};
use crate::limits::{
    generalized_congruence_check, ordering_check, residue_generator, solve_log_equation, verify_identity,
    IdentityKind, LimitError, LogEquationSpec,
};
use crate::numfield::{certify_pisot_with, NumFieldError, NumberField, PrecisionConfig, Verdict};
use crate::report::{ErrorKind, Report};
use crate::seqlab::{alpha_expectations, beta_expectations, run_suite, Expectation, SeqError, SuiteOptions};
use crate::transform::{build_table, TransformError};

#[derive(Debug, Parser)]
#[command(name = "pisotlab", version, about = "Iterated fractional-part transforms on powers of Pisot numbers")]
pub struct Cli {
    /// Working precision for limit-point solving and identity checks.
    #[arg(long, global = true, env = "PISOTLAB_BITS", default_value_t = crate::limits::DEFAULT_BITS)]
    pub bits: u32,
    /// Residual gate for logarithmic equations and identities.
    #[arg(long, global = true, env = "PISOTLAB_TOL", default_value = "1e-30")]
    pub tol: f64,
    /// Largest exponent computed exactly; congruences past it use the
    /// detected recurrence.
    #[arg(long, global = true, env = "PISOTLAB_EXACT_LIMIT", default_value_t = 300)]
    pub exact_limit: u64,
    /// Precision cap in bits for certified rounding.
    #[arg(long, global = true, env = "PISOTLAB_PRECISION_CAP", default_value_t = 1 << 20)]
    pub precision_cap: u32,
    /// Catalog file; the bundled catalog when absent.
    #[arg(long, global = true, env = "PISOTLAB_CATALOG")]
    pub catalog: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Target {
    /// Ascending comma-separated coefficients, e.g. "-1,-1,1".
    #[arg(long, allow_hyphen_values = true)]
    pub poly: Option<String>,
    /// Catalog entry; `alpha<n>` and `beta<n>` are generated.
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long)]
    pub alpha: Option<usize>,
    #[arg(long)]
    pub beta: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify that a polynomial defines a Pisot number.
    Certify(Target),
    /// Tabulate `u^k_n` and certified fractional parts.
    Iterate {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 1)]
        kmax: usize,
        /// Exponent range `lo:hi`.
        #[arg(long, default_value = "1:20", value_parser = parse_range)]
        n: (u64, u64),
    },
    /// Run the pattern checkers and the target's expectations.
    Suite(SuiteArgs),
    /// Logarithmic-equation limit points.
    Limits {
        #[command(subcommand)]
        command: LimitsCommand,
    },
    /// Integer sequences with `u_p ≡ target (mod p)` for every prime `p`.
    Generate {
        #[arg(long)]
        target: u64,
        /// Degree minus one of the heart-family polynomial.
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// Heart-family `l`; defaults to `target − 1`.
        #[arg(long)]
        l: Option<u64>,
        #[arg(long, default_value_t = 40)]
        nmax: u64,
    },
    /// List the catalog.
    Catalog,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[arg(long, group = "suite_target", allow_hyphen_values = true)]
    pub poly: Option<String>,
    #[arg(long, group = "suite_target")]
    pub name: Option<String>,
    #[arg(long, group = "suite_target")]
    pub alpha: Option<usize>,
    #[arg(long, group = "suite_target")]
    pub beta: Option<usize>,
    /// Heart-family spec `m,n,l`, e.g. `heart:5,2,1`.
    #[arg(long, group = "suite_target", value_parser = parse_heart)]
    pub family: Option<LogEquationSpec>,
    #[arg(long, default_value_t = 2)]
    pub pmin: u64,
    #[arg(long, default_value_t = 100)]
    pub pmax: u64,
    #[arg(long, default_value_t = 120)]
    pub nmax: u64,
    #[arg(long)]
    pub kmax: Option<usize>,
    /// First prime for the alpha/beta expectations.
    #[arg(long, default_value_t = 13)]
    pub from_prime: u64,
    #[arg(long)]
    pub no_convergence: bool,
    /// Ignore expectations; report findings only.
    #[arg(long)]
    pub findings: bool,
}

#[derive(Debug, Subcommand)]
pub enum LimitsCommand {
    Solve {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: Option<u64>,
    },
    /// Every spec with `m ≤ m_max`, `n ≤ n_max`.
    Sweep {
        #[arg(long, default_value_t = 5)]
        m_max: u64,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
    },
    Identities {
        /// Range `lo:hi` of `n` for the two infinite identities.
        #[arg(long, default_value = "1:10", value_parser = parse_range)]
        n: (u64, u64),
    },
    Ordering {
        #[arg(long, default_value_t = 3)]
        count: usize,
    },
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let bad = || format!("expected lo:hi, got {s:?}");
    match s.split_once(':') {
        Some((a, b)) => Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)),
        None => s.trim().parse().map(|v| (v, v)).map_err(|_| bad()),
    }
}

fn parse_heart(s: &str) -> Result<LogEquationSpec, String> {
    let bad = || format!("expected heart:m,n,l, got {s:?}");
    let rest = s.strip_prefix("heart:").ok_or_else(bad)?;
    let v: Vec<u64> = rest.split(',').map(|t| t.trim().parse()).collect::<Result<_, _>>().map_err(|_| bad())?;
    match v[..] {
        [m, n, l] => Ok(LogEquationSpec::heart(m, n as usize, l)),
        _ => Err(bad()),
    }
}

/// Decimal digits matching `bits` of precision, plus two guard digits.
pub use crate::interval::digits_for;

struct Ctx {
    bits: u32,
    tol: f64,
    exact_limit: u64,
    precision: PrecisionConfig,
    catalog: Option<PathBuf>,
}

impl Ctx {
    fn digits(&self) -> usize {
        digits_for(self.bits)
    }

    fn catalog(&self) -> Result<Catalog, CatalogError> {
        match &self.catalog {
            Some(p) => Catalog::load(p),
            None => Ok(Catalog::builtin()),
        }
    }
}

struct Resolved {
    label: String,
    poly: IntPolynomial,
    expectations: Vec<Expectation>,
}

fn resolve(ctx: &Ctx, poly: &Option<String>, name: &Option<String>, alpha: Option<usize>, beta: Option<usize>) -> Result<Resolved, String> {
    if let Some(s) = poly {
        let p = IntPolynomial::parse_ascending(s).map_err(|e| e.to_string())?;
        return Ok(Resolved { label: p.to_string(), poly: p, expectations: Vec::new() });
    }
    let entry_name = match (name, alpha, beta) {
        (Some(n), _, _) => n.clone(),
        (_, Some(n), _) => format!("alpha{n}"),
        (_, _, Some(n)) => format!("beta{n}"),
        _ => return Err("no target given".into()),
    };
    let e = ctx.catalog().map_err(|e| e.to_string())?.get(&entry_name).map_err(|e| e.to_string())?;
    Ok(Resolved { label: e.name.clone(), poly: e.poly(), expectations: e.expectations.clone() })
}

fn field_error_kind(e: &NumFieldError) -> ErrorKind {
    match e {
        NumFieldError::NotPisot(_) => ErrorKind::NotPisot,
        NumFieldError::ExactHalfInteger | NumFieldError::PrecisionExhausted { .. } => ErrorKind::Rounding,
        NumFieldError::NotMonic | NumFieldError::ZeroConstantTerm | NumFieldError::DegreeTooSmall => ErrorKind::Parse,
        NumFieldError::DimensionMismatch { .. } => ErrorKind::Other,
    }
}

fn transform_error(r: &mut Report, e: &TransformError) {
    match e {
        TransformError::Cell { k, n, source } => {
            r.error(field_error_kind(source), e.to_string(), json!({ "k": k, "n": n }))
        }
        TransformError::InvalidRange { lo, hi } => r.error(ErrorKind::Parse, e.to_string(), json!({ "lo": lo, "hi": hi })),
        TransformError::LevelOutOfRange { .. } => r.error(ErrorKind::Other, e.to_string(), Value::Null),
    }
}

fn seq_error(r: &mut Report, e: &SeqError) {
    match e {
        SeqError::Transform(t) => transform_error(r, t),
        SeqError::InvalidRange { .. } => r.error(ErrorKind::Parse, e.to_string(), Value::Null),
        SeqError::IncomparableMagnitudes { .. } => r.error(ErrorKind::Rounding, e.to_string(), Value::Null),
        _ => r.error(ErrorKind::Other, e.to_string(), Value::Null),
    }
}

fn limit_error(r: &mut Report, e: &LimitError) {
    let kind = match e {
        LimitError::Poly(_) | LimitError::CountTooSmall(_) | LimitError::NotHeart => ErrorKind::Parse,
        LimitError::NotPisot(_) => ErrorKind::NotPisot,
        LimitError::ResidualTooLarge { .. } => ErrorKind::Residual,
        LimitError::PrecisionExhausted { .. } | LimitError::IncomparableAdjacent(..) => ErrorKind::Rounding,
        LimitError::NumField(f) => field_error_kind(f),
        LimitError::Seq(s) => return seq_error(r, s),
        LimitError::NoRootInInterval { .. } => ErrorKind::Other,
    };
    r.error(kind, e.to_string(), Value::Null);
}

fn make_field(ctx: &Ctx, r: &mut Report, poly: IntPolynomial) -> Option<Arc<NumberField>> {
    match NumberField::with_config(poly, ctx.precision) {
        Ok(f) => Some(Arc::new(f)),
        Err(e) => {
            r.error(field_error_kind(&e), e.to_string(), Value::Null);
            None
        }
    }
}

fn cmd_certify(ctx: &Ctx, t: &Target) -> Report {
    let mut r = Report::new("certify", json!({ "poly": t.poly, "name": t.name, "alpha": t.alpha, "beta": t.beta }));
    let target = match resolve(ctx, &t.poly, &t.name, t.alpha, t.beta) {
        Ok(v) => v,
        Err(e) => {
            r.error(ErrorKind::Parse, e, Value::Null);
            return r;
        }
    };
    match certify_pisot_with(&target.poly, &ctx.precision) {
        Ok(c) => {
            r.push(json!({
                "target": target.label,
                "poly": target.poly.to_decimal_strings(),
                "certificate": c.to_repr(digits_for(c.precision_bits)),
            }));
            if c.verdict == Verdict::NotPisot {
                r.error(ErrorKind::NotPisot, c.reason.clone().unwrap_or_else(|| "not pisot".into()), Value::Null);
            }
        }
        Err(e) => r.error(field_error_kind(&e), e.to_string(), Value::Null),
    }
    r
}

fn cmd_iterate(ctx: &Ctx, t: &Target, kmax: usize, (lo, hi): (u64, u64)) -> Report {
    let mut r = Report::new(
        "iterate",
        json!({ "poly": t.poly, "name": t.name, "alpha": t.alpha, "beta": t.beta, "kmax": kmax, "n": [lo, hi] }),
    );
    let target = match resolve(ctx, &t.poly, &t.name, t.alpha, t.beta) {
        Ok(v) => v,
        Err(e) => {
            r.error(ErrorKind::Parse, e, Value::Null);
            return r;
        }
    };
    let Some(f) = make_field(ctx, &mut r, target.poly) else { return r };
    match build_table(f, kmax, lo, hi) {
        Ok(table) => {
            for e in table.errors() {
                transform_error(&mut r, e);
            }
            for row in table.rows(12) {
                r.push(row);
            }
        }
        Err(e) => transform_error(&mut r, &e),
    }
    r
}

fn cmd_suite(ctx: &Ctx, a: &SuiteArgs) -> Report {
    let mut r = Report::new(
        "suite",
        json!({
            "poly": a.poly, "name": a.name, "alpha": a.alpha, "beta": a.beta,
            "family": a.family.map(|s| s.to_string()),
            "pmin": a.pmin, "pmax": a.pmax, "nmax": a.nmax, "kmax": a.kmax,
            "from_prime": a.from_prime, "convergence": !a.no_convergence, "findings": a.findings,
            "exact_limit": ctx.exact_limit,
        }),
    );
    let opts = SuiteOptions {
        n_max: a.nmax,
        p_lo: a.pmin,
        p_hi: a.pmax,
        exact_limit: ctx.exact_limit,
        k_max: a.kmax,
        convergence: !a.no_convergence,
    };
    if let Some(spec) = &a.family {
        match generalized_congruence_check(spec, a.pmax, &opts) {
            Ok(g) => {
                r.push(json!({
                    "solution": g.solution.to_repr(ctx.digits()),
                    "skipped": g.skipped,
                    "suite": g.suite,
                }));
                if !a.findings {
                    push_expectation_failures(&mut r, &g.suite.expectations);
                }
            }
            Err(e) => limit_error(&mut r, &e),
        }
        return r;
    }
    if a.poly.is_none() && a.name.is_none() && a.alpha.is_none() && a.beta.is_none() {
        r.error(ErrorKind::Parse, "suite needs --poly, --name, --alpha, --beta or --family", Value::Null);
        return r;
    }
    let target = match resolve(ctx, &a.poly, &a.name, a.alpha, a.beta) {
        Ok(v) => v,
        Err(e) => {
            r.error(ErrorKind::Parse, e, Value::Null);
            return r;
        }
    };
    let expectations: Vec<Expectation> = if a.findings {
        Vec::new()
    } else if let Some(n) = a.alpha {
        alpha_expectations(n, a.from_prime)
    } else if let Some(n) = a.beta {
        beta_expectations(n, a.from_prime)
    } else {
        target.expectations
    };
    let Some(f) = make_field(ctx, &mut r, target.poly) else { return r };
    match run_suite(f, &expectations, &opts) {
        Ok(report) => {
            for e in &report.errors {
                r.error(ErrorKind::Rounding, e.clone(), Value::Null);
            }
            push_expectation_failures(&mut r, &report.expectations);
            r.push(json!({ "target": target.label, "report": report }));
        }
        Err(e) => seq_error(&mut r, &e),
    }
    r
}

fn push_expectation_failures(r: &mut Report, outcomes: &[crate::seqlab::ExpectationOutcome]) {
    for o in outcomes.iter().filter(|o| !o.passed) {
        r.error(
            ErrorKind::ExpectationFailed,
            o.detail.clone(),
            serde_json::to_value(&o.expectation).unwrap_or(Value::Null),
        );
    }
}

fn tol_rational(tol: f64) -> num_rational::BigRational {
    num_traits::FromPrimitive::from_f64(tol).unwrap_or_else(num_traits::Zero::zero)
}

fn cmd_limits(ctx: &Ctx, c: &LimitsCommand) -> Report {
    let digits = ctx.digits();
    let tol_s = format!("{:e}", ctx.tol);
    match c {
        LimitsCommand::Solve { family, m, n, l } => {
            let spec = LogEquationSpec { family: *family, m: *m, n: *n, l: *l };
            let mut r = Report::new(
                "limits solve",
                json!({ "family": family, "m": m, "n": n, "l": l, "bits": ctx.bits, "tol": tol_s }),
            );
            match solve_log_equation(&spec, ctx.tol, ctx.bits) {
                Ok(s) => r.push(s.to_repr(digits)),
                Err(e) => limit_error(&mut r, &e),
            }
            r
        }
        LimitsCommand::Sweep { m_max, n_max } => {
            let mut r = Report::new(
                "limits sweep",
                json!({ "m_max": m_max, "n_max": n_max, "bits": ctx.bits, "tol": tol_s }),
            );
            for spec in LogEquationSpec::enumerate(*m_max, *n_max) {
                match solve_log_equation(&spec, ctx.tol, ctx.bits) {
                    Ok(s) => r.push(s.to_repr(digits)),
                    // (x − 1)² has no other root
                    Err(LimitError::NoRootInInterval { .. }) => {
                        r.push(json!({ "spec": spec, "skipped": "no root other than 1" }))
                    }
                    Err(e) => limit_error(&mut r, &e),
                }
            }
            r
        }
        LimitsCommand::Identities { n: (lo, hi) } => {
            let mut r = Report::new("limits identities", json!({ "n": [lo, hi], "bits": ctx.bits, "tol": tol_s }));
            let mut jobs: Vec<(IdentityKind, usize)> = Vec::new();
            for n in *lo..=*hi {
                jobs.push((IdentityKind::I, n as usize));
                jobs.push((IdentityKind::II, n as usize));
            }
            jobs.extend([(IdentityKind::Alpha2Pair, 2), (IdentityKind::Alpha3Extra, 3), (IdentityKind::DeltaPrime, 4)]);
            let tol = tol_rational(ctx.tol);
            for (kind, n) in jobs {
                match verify_identity(kind, n, ctx.bits) {
                    Ok(checks) => {
                        for c in checks {
                            if c.residual.hi() >= tol {
                                r.error(
                                    ErrorKind::Residual,
                                    format!("{}: residual above {tol_s}", c.label),
                                    json!({ "residual_bound": c.residual.to_repr(6).hi }),
                                );
                            }
                            r.push(c.to_repr(digits));
                        }
                    }
                    Err(e) => limit_error(&mut r, &e),
                }
            }
            r
        }
        LimitsCommand::Ordering { count } => {
            let mut r = Report::new("limits ordering", json!({ "count": count, "bits": ctx.bits }));
            match ordering_check(*count, ctx.bits) {
                Ok(o) => {
                    r.push(json!({
                        "holds": o.holds(),
                        "first_pair_identical": o.first_pair_identical,
                        "all_below_two": o.all_below_two,
                        "inversions": o.inversions,
                        "chain": o.chain_repr(digits),
                    }));
                    if !o.holds() {
                        r.error(ErrorKind::ExpectationFailed, "ordering chain does not hold", Value::Null);
                    }
                }
                Err(e) => limit_error(&mut r, &e),
            }
            r
        }
    }
}

fn cmd_generate(ctx: &Ctx, target: u64, degree: usize, l: Option<u64>, nmax: u64) -> Report {
    let l = l.unwrap_or(target.saturating_sub(1));
    let mut r = Report::new("generate", json!({ "target": target, "degree": degree, "l": l, "nmax": nmax }));
    match residue_generator(target, degree, l, nmax) {
        Ok(g) => {
            r.push(json!({
                "solution": g.solution.to_repr(ctx.digits()),
                "violations": g.violations(),
            }));
            for t in &g.terms {
                r.push(t);
            }
            if !g.violations().is_empty() {
                r.error(ErrorKind::ExpectationFailed, "residue differs from target", json!(g.violations()));
            }
        }
        Err(e) => limit_error(&mut r, &e),
    }
    r
}

fn cmd_catalog(ctx: &Ctx) -> Report {
    let mut r = Report::new("catalog", json!({ "path": ctx.catalog.as_ref().map(|p| p.display().to_string()) }));
    match ctx.catalog() {
        Ok(c) => {
            for e in c.entries() {
                r.push(e);
            }
        }
        Err(e) => r.error(ErrorKind::Parse, e.to_string(), Value::Null),
    }
    r
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Report {
    let ctx = Ctx {
        bits: cli.bits,
        tol: cli.tol,
        exact_limit: cli.exact_limit,
        precision: PrecisionConfig { cap_bits: cli.precision_cap, ..PrecisionConfig::default() },
        catalog: cli.catalog.clone(),
    };
    match &cli.command {
        Command::Certify(t) => cmd_certify(&ctx, t),
        Command::Iterate { target, kmax, n } => cmd_iterate(&ctx, target, *kmax, *n),
        Command::Suite(a) => cmd_suite(&ctx, a),
        Command::Limits { command } => cmd_limits(&ctx, command),
        Command::Generate { target, degree, l, nmax } => cmd_generate(&ctx, *target, *degree, *l, *nmax),
        Command::Catalog => cmd_catalog(&ctx),
    }
}

/// Parses `args`, runs, writes the report to stdout and returns the exit
/// code. Argument errors exit with 2.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let report = run(&cli);
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    if report.write_jsonl(&mut lock).is_err() {
        return 1;
    }
    report.exit_code()
}
