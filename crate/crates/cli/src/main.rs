use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bianchi_noether::geometry::{GeodesicState, MetricSpec, NumericMetric, DEFAULT_SMAX, DEFAULT_STEP};
use bianchi_noether::noether::{audit_case, case_catalog, derive_determining_system, find_case, CaseSpec, CASE_LABELS};
use bianchi_noether::report::{algebra_report, conserve_case};
use bianchi_noether::Error;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "bianchi-noether", version, about = "Audit Noether symmetries of the Bianchi II geodesic Lagrangian")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the determining system obtained by velocity splitting.
    Derive(Common),
    /// Verify the catalogued generators and brackets of one or all cases.
    Audit(Common),
    /// Structure constants, Killing form, series, radical and Levi factor.
    Algebra(Common),
    /// First integrals, on-shell proofs and numeric drift for one case.
    Conserve(Common),
}

#[derive(clap::Args, Debug)]
struct Common {
    /// Case label I..IX, or `all`.
    #[arg(long)]
    case: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Metric file, or inline text such as `A=1,B=t,C=2*t`.
    #[arg(long)]
    metric: Option<String>,
    /// `t,x,y,z,td,xd,yd,zd`, or only the four velocities (start at the origin).
    #[arg(long, allow_hyphen_values = true)]
    ics: Option<String>,
    #[arg(long, default_value_t = DEFAULT_STEP)]
    step: f64,
    #[arg(long, default_value_t = DEFAULT_SMAX)]
    smax: f64,
    /// Write the output to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Internal(e.to_string()),
            Error::Metric(_)
            | Error::Syntax { .. }
            | Error::UnknownSymbol { .. }
            | Error::NegativePower(_)
            | Error::NonMonomialInverse(_)
            | Error::DivisionByZero
            | Error::InvalidRule(_)
            | Error::CyclicRules(_)
            | Error::Unbound(_)
            | Error::NonClosure { .. }
            | Error::Diverged { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

enum Selection {
    All,
    One(CaseSpec),
}

fn select(case: Option<&str>, default_all: bool) -> Outcome<Selection> {
    match case {
        None if default_all => Ok(Selection::All),
        None => Err(Failure::Usage("--case is required".into())),
        Some(s) if s.eq_ignore_ascii_case("all") => Ok(Selection::All),
        Some(s) => find_case(s).map(Selection::One).ok_or_else(|| {
            Failure::Usage(format!("unknown case `{s}`; expected one of {} or all", CASE_LABELS.join(", ")))
        }),
    }
}

fn single(case: Option<&str>) -> Outcome<CaseSpec> {
    match select(case, false)? {
        Selection::One(c) => Ok(c),
        Selection::All => Err(Failure::Usage("this command takes a single case".into())),
    }
}

fn to_json<T: Serialize>(value: &T) -> Outcome<String> {
    serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| Failure::Internal(e.to_string()))
}

fn run_derive(args: &Common) -> Outcome<String> {
    let spec = match select(args.case.as_deref(), true)? {
        Selection::All => MetricSpec::generic(),
        Selection::One(c) => c.spec(),
    };
    let sys = derive_determining_system(&spec)?;
    let export = sys.export();
    if args.format == Format::Json {
        return to_json(&export);
    }
    let mut out = format!("{} nontrivial determining equations\n", export.len());
    for (k, e) in export.iter().enumerate() {
        out.push_str(&format!("{:>3}. [{}] {} = 0\n", k + 1, e.monomial, e.equation));
    }
    Ok(out)
}

fn selected_cases(args: &Common) -> Outcome<Vec<CaseSpec>> {
    Ok(match select(args.case.as_deref(), true)? {
        Selection::All => case_catalog(),
        Selection::One(c) => vec![c],
    })
}

/// Runs `f` on every case concurrently and returns results in input order.
fn fan_out<T: Send>(cases: &[CaseSpec], f: impl Fn(&CaseSpec) -> Outcome<T> + Sync) -> Outcome<Vec<T>> {
    let results: Vec<Outcome<T>> = std::thread::scope(|scope| {
        let handles: Vec<_> = cases.iter().map(|c| scope.spawn(|| f(c))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(Failure::Internal("worker thread panicked".into()))))
            .collect()
    });
    results.into_iter().collect()
}

fn run_audit(args: &Common) -> Outcome<String> {
    let cases = selected_cases(args)?;
    let reports = fan_out(&cases, |c| audit_case(c).map_err(Failure::from))?;
    if args.format == Format::Json {
        return if reports.len() == 1 { to_json(&reports[0]) } else { to_json(&reports) };
    }
    Ok(reports.iter().map(|r| r.render_text()).collect::<Vec<_>>().join("\n"))
}

fn run_algebra(args: &Common) -> Outcome<String> {
    let cases = selected_cases(args)?;
    let reports = fan_out(&cases, |c| algebra_report(c).map(|(_, r)| r).map_err(Failure::from))?;
    if args.format == Format::Json {
        return if reports.len() == 1 { to_json(&reports[0]) } else { to_json(&reports) };
    }
    Ok(reports.iter().map(|r| r.render_text()).collect::<Vec<_>>().join("\n"))
}

fn load_metric(arg: Option<&str>) -> Outcome<NumericMetric<bianchi_noether::Rational>> {
    let Some(text) = arg else { return Ok(NumericMetric::unit()) };
    let body = if Path::new(text).is_file() {
        std::fs::read_to_string(text).map_err(|e| Failure::Usage(format!("cannot read metric file `{text}`: {e}")))?
    } else {
        text.to_string()
    };
    Ok(NumericMetric::parse(&body)?)
}

fn parse_ics(arg: Option<&str>) -> Outcome<GeodesicState<f64>> {
    let text = arg.ok_or_else(|| Failure::Usage("--ics is required for conserve".into()))?;
    let values: Vec<f64> = text
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| Failure::Usage(format!("invalid number `{}` in --ics", v.trim()))))
        .collect::<Outcome<_>>()?;
    let state = match values.len() {
        8 => GeodesicState::from_slice(&values),
        4 => Some(GeodesicState::new(0.0, [0.0; 4], [values[0], values[1], values[2], values[3]])),
        n => return Err(Failure::Usage(format!("--ics needs 8 values (or 4 velocities), got {n}"))),
    };
    state
        .filter(|s| s.is_finite())
        .ok_or_else(|| Failure::Usage("--ics must be finite numbers".into()))
}

fn run_conserve(args: &Common) -> Outcome<String> {
    let case = single(args.case.as_deref())?;
    let metric = load_metric(args.metric.as_deref())?;
    let ics = parse_ics(args.ics.as_deref())?;
    if !(args.step > 0.0 && args.step.is_finite()) || !(args.smax >= 0.0 && args.smax.is_finite()) {
        return Err(Failure::Usage("--step must be positive and --smax non-negative".into()));
    }
    let outcome = conserve_case(&case, &metric, ics, args.step, args.smax)?;
    if args.format == Format::Json {
        return to_json(&outcome.report);
    }
    Ok(outcome.report.render_text())
}

fn emit(out: Option<&Path>, text: &str) -> Outcome<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write `{}`: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Failure::Internal(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (result, args) = match &cli.command {
        Command::Derive(a) => (run_derive(a), a),
        Command::Audit(a) => (run_audit(a), a),
        Command::Algebra(a) => (run_algebra(a), a),
        Command::Conserve(a) => (run_conserve(a), a),
    };
    match result.and_then(|text| emit(args.out.as_deref(), &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(2)
        }
    }
}
