//! Argument handling and report rendering for the `steinhaus` binary.
//!
//! [`run_cli`] takes the argument vector and two writers and returns the
//! process exit code, so the whole command surface can be driven in-process
//! from tests.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use steinhaus_core::forms::{parse_diagonal, parse_twice_gram, FormError, QuadForm};
use steinhaus_core::formsearch::search_diagonal_ternary;
use steinhaus_core::planar::check_binary_form;
use steinhaus_core::reproduction::reproduce;
use steinhaus_core::sos::{decompose, four_power_obstruction};
use steinhaus_core::steinhaus::{
    check_form_range_with_jobs, cholesky_basis, is_proven_form, tiling_level, FormVerdict,
};

pub const EXIT_OK: i32 = 0;
/// The computation ran and the answer is negative.
pub const EXIT_NEGATIVE: i32 = 1;
/// Bad arguments or an invalid form.
pub const EXIT_USAGE: i32 = 2;

/// Largest accepted `--radius`, `--max-coeff` or `--t-bound`.
pub const MAX_BOUND: u64 = 10_000;
pub const MAX_SQUARES: usize = 64;

#[derive(Parser, Debug)]
#[command(name = "steinhaus", version, about = "Sums of squares, quadratic forms and lattice Steinhaus obstructions")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for box scans and searches (default: available cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..=1024))]
    jobs: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct FormArg {
    /// Diagonal of B, e.g. `2,11,6`.
    #[arg(long)]
    diag: Option<String>,
    /// Rows of G = 2B, e.g. `2,1;1,2`.
    #[arg(long = "twice-gram")]
    twice_gram: Option<String>,
}

impl FormArg {
    fn parse(&self) -> Result<QuadForm, FormError> {
        match (&self.diag, &self.twice_gram) {
            (Some(d), _) => parse_diagonal(d),
            (_, Some(g)) => parse_twice_gram(g),
            _ => unreachable!("clap enforces exactly one form argument"),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical witness of n as a sum of d squares.
    Decompose {
        n: u64,
        #[arg(long)]
        squares: usize,
    },
    /// Reports n = 4^nu (8k + 7) when n is not a sum of three squares.
    Obstruction { n: u64 },
    /// Checks whether a form qualifies up to a box radius.
    Qualify {
        #[command(flatten)]
        form: FormArg,
        #[arg(long, default_value_t = 40)]
        radius: u64,
    },
    /// Determinant of B and, when it is a square, the tiling level.
    Level {
        #[command(flatten)]
        form: FormArg,
    },
    /// Runs every reproduction suite.
    VerifyPaper {
        #[arg(long, default_value_t = 60)]
        radius: u64,
    },
    /// Diagonal ternary forms that qualify, one record per line.
    Search {
        #[arg(long)]
        max_coeff: u64,
        #[arg(long)]
        radius: u64,
    },
    /// Lower-triangular lattice basis A with AᵀA = B.
    Basis {
        #[command(flatten)]
        form: FormArg,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Sum-of-two-squares premise and linear decompositions of a binary form.
    Binary {
        #[command(flatten)]
        form: FormArg,
        #[arg(long, default_value_t = 100)]
        t_bound: u64,
    },
}

#[derive(Serialize)]
struct ReportEnvelope {
    command: String,
    parameters: BTreeMap<String, Value>,
    result: Value,
    proven_vs_conjectural: String,
    version: String,
}

struct Output {
    code: i32,
    envelope: ReportEnvelope,
    text: String,
}

struct UsageError(String);

impl From<FormError> for UsageError {
    fn from(e: FormError) -> Self {
        UsageError(format!("invalid form: {e}"))
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn check_bound(name: &str, value: u64) -> Result<(), UsageError> {
    if value > MAX_BOUND {
        return Err(UsageError(format!("--{name} must be at most {MAX_BOUND}, got {value}")));
    }
    Ok(())
}

fn envelope(command: &str, parameters: Value, result: Value, status: impl Into<String>) -> ReportEnvelope {
    let parameters = match parameters {
        Value::Object(map) => map.into_iter().collect(),
        _ => BTreeMap::new(),
    };
    ReportEnvelope {
        command: command.to_string(),
        parameters,
        result,
        proven_vs_conjectural: status.into(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    }
}

fn form_params(form: &FormArg) -> Value {
    match (&form.diag, &form.twice_gram) {
        (Some(d), _) => json!({ "diag": d }),
        (_, Some(g)) => json!({ "twice_gram": g }),
        _ => json!({}),
    }
}

fn squares_text(terms: &[u64]) -> String {
    terms.iter().map(|t| format!("{t}^2")).collect::<Vec<_>>().join(" + ")
}

fn run_decompose(n: u64, squares: usize) -> Result<Output, UsageError> {
    if squares == 0 || squares > MAX_SQUARES {
        return Err(UsageError(format!("--squares must be in 1..={MAX_SQUARES}, got {squares}")));
    }
    let witness = decompose(n, squares);
    let (code, text) = match &witness {
        Some(w) => (EXIT_OK, format!("{n} = {}", squares_text(&w.terms))),
        None => (EXIT_NEGATIVE, format!("{n} is not a sum of {squares} squares")),
    };
    Ok(Output {
        code,
        envelope: envelope(
            "decompose",
            json!({ "n": n, "squares": squares }),
            json!({ "witness": witness }),
            "exact",
        ),
        text,
    })
}

fn run_obstruction(n: u64) -> Output {
    let obstruction = four_power_obstruction(n);
    let text = match &obstruction {
        Some(o) => format!("{n} = 4^{} * (8*{} + 7): not a sum of three squares", o.nu, o.k),
        None => format!("{n} is a sum of three squares"),
    };
    Output {
        code: EXIT_OK,
        envelope: envelope("obstruction", json!({ "n": n }), json!({ "obstruction": obstruction }), "exact"),
        text,
    }
}

fn run_qualify(form_arg: &FormArg, radius: u64, jobs: usize) -> Result<Output, UsageError> {
    check_bound("radius", radius)?;
    let form = form_arg.parse()?;
    let verdict = check_form_range_with_jobs(&form, radius, jobs)?;
    let proven = is_proven_form(&form);
    let (code, status, text) = match &verdict {
        FormVerdict::Qualifies { determinant, .. } => {
            let status = if proven { "proven".to_string() } else { format!("conjectural up to radius {radius}") };
            let text = format!("qualifies ({status}): every value is a sum of {} squares, det B = {determinant} is not a square", form.dim());
            (EXIT_OK, status, text)
        }
        FormVerdict::ValueCounterexample { x, value, .. } => (
            EXIT_NEGATIVE,
            "disqualified".to_string(),
            format!("does not qualify: Q({}) = {value} is not a sum of {} squares", join(x), form.dim()),
        ),
        FormVerdict::SquareDeterminant { root } => (
            EXIT_NEGATIVE,
            "disqualified".to_string(),
            format!("does not qualify: det B = {root}^2 is a square"),
        ),
    };
    let mut params = form_params(form_arg);
    params["radius"] = json!(radius);
    Ok(Output {
        code,
        envelope: envelope("qualify", params, json!({ "form": form, "verdict": verdict }), status),
        text,
    })
}

fn run_level(form_arg: &FormArg) -> Result<Output, UsageError> {
    let form = form_arg.parse()?;
    let level = tiling_level(&form);
    let text = match &level.integer_level {
        Some(l) => format!("det B = {}, tiling level {l}", level.det_b),
        None => format!("det B = {} is not a square; no integer tiling level", level.det_b),
    };
    Ok(Output {
        code: EXIT_OK,
        envelope: envelope("level", form_params(form_arg), json!({ "form": form, "tiling_level": level }), "exact"),
        text,
    })
}

fn run_verify(radius: u64, jobs: usize) -> Result<Output, UsageError> {
    check_bound("radius", radius)?;
    let suites = reproduce(radius, jobs);
    let passed = suites.iter().all(|s| s.passed);
    let mut text = String::new();
    for s in &suites {
        let mark = if s.passed { "PASS" } else { "FAIL" };
        text.push_str(&format!("{mark} {} ({} checks", s.name, s.checked_count));
        if !s.passed {
            text.push_str(&format!(", {} failures", s.counterexample_total));
        }
        text.push_str(")\n");
    }
    text.push_str(if passed { "all suites passed" } else { "some suites failed" });
    Ok(Output {
        code: if passed { EXIT_OK } else { EXIT_NEGATIVE },
        envelope: envelope(
            "verify-paper",
            json!({ "radius": radius }),
            json!({ "suites": suites, "passed": passed }),
            format!("exhaustive up to radius {radius}"),
        ),
        text,
    })
}

fn run_basis(form_arg: &FormArg, tol: f64) -> Result<Output, UsageError> {
    let form = form_arg.parse()?;
    let basis = cholesky_basis(&form, tol).map_err(|e| UsageError(format!("basis: {e}")))?;
    let text = basis
        .iter()
        .map(|row| row.iter().map(|v| format!("{v:.12}")).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n");
    let mut params = form_params(form_arg);
    params["tol"] = json!(tol);
    Ok(Output {
        code: EXIT_OK,
        envelope: envelope("basis", params, json!({ "form": form, "basis": basis }), "numeric"),
        text,
    })
}

fn run_binary(form_arg: &FormArg, t_bound: u64) -> Result<Output, UsageError> {
    check_bound("t-bound", t_bound)?;
    let form = form_arg.parse()?;
    if form.dim() != 2 {
        return Err(UsageError(format!("binary needs a 2x2 form, got dimension {}", form.dim())));
    }
    let report = check_binary_form(&form, t_bound)?;
    let mut text = match &report.premise_failure {
        Some(f) => format!("premise fails: Q({}) = {} is not a sum of two squares\n", join(&f.x), f.value),
        None => format!("premise holds for |t| <= {t_bound} ({} values)\n", report.values_checked),
    };
    match &report.determinant_root {
        Some(r) => text.push_str(&format!("det B = {} = {r}^2\n", report.determinant)),
        None => text.push_str(&format!("det B = {} is not a square\n", report.determinant)),
    }
    text.push_str(&format!("{} linear decompositions", report.decompositions.len()));
    for p in &report.decompositions {
        text.push_str(&format!("\n  ({}t + {})^2 + ({}t + {})^2", p.alpha, p.beta, p.gamma, p.delta));
    }
    let mut params = form_params(form_arg);
    params["t_bound"] = json!(t_bound);
    Ok(Output {
        code: EXIT_OK,
        envelope: envelope("binary", params, to_value(&report), format!("sampled for |t| <= {t_bound}")),
        text,
    })
}

fn join(x: &[i64]) -> String {
    x.iter().map(i64::to_string).collect::<Vec<_>>().join(", ")
}

fn run_search(max_coeff: u64, radius: u64, jobs: usize, as_json: bool, out: &mut dyn Write) -> Result<i32, UsageError> {
    check_bound("max-coeff", max_coeff)?;
    check_bound("radius", radius)?;
    for record in search_diagonal_ternary(max_coeff, radius, jobs) {
        let status = if record.proven { "proven".to_string() } else { format!("conjectural up to radius {radius}") };
        let line = if as_json {
            let mut v = to_value(&record);
            v["proven_vs_conjectural"] = json!(status);
            v.to_string()
        } else {
            let [a, b, c] = record.coefficients;
            format!("{a}x^2 + {b}y^2 + {c}z^2  {status}")
        };
        if writeln!(out, "{line}").is_err() {
            break;
        }
    }
    Ok(EXIT_OK)
}

/// Parses `argv` (including the program name), runs the command, writes to
/// `out`/`err` and returns the exit code.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    let jobs = cli
        .jobs
        .map(|j| j as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));

    let result = match &cli.command {
        Command::Search { max_coeff, radius } => {
            return match run_search(*max_coeff, *radius, jobs, cli.json, out) {
                Ok(code) => code,
                Err(UsageError(msg)) => {
                    let _ = writeln!(err, "error: {msg}");
                    EXIT_USAGE
                }
            };
        }
        Command::Decompose { n, squares } => run_decompose(*n, *squares),
        Command::Obstruction { n } => Ok(run_obstruction(*n)),
        Command::Qualify { form, radius } => run_qualify(form, *radius, jobs),
        Command::Level { form } => run_level(form),
        Command::VerifyPaper { radius } => run_verify(*radius, jobs),
        Command::Basis { form, tol } => run_basis(form, *tol),
        Command::Binary { form, t_bound } => run_binary(form, *t_bound),
    };
    match result {
        Ok(output) => {
            let rendered = if cli.json {
                serde_json::to_string_pretty(&to_value(&output.envelope)).expect("envelope serializes")
            } else {
                output.text
            };
            let _ = writeln!(out, "{rendered}");
            output.code
        }
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}
