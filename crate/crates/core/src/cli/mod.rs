//! Command-line front end: model files in, verification reports out.
//!
//! Exit status: 0 when every check passes, 1 when any check fails, 2 on
//! usage, I/O or parse errors.

mod document;
mod lexer;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use document::{parse_model_spec, print_document, GroupDecl, ModelDocument, ParseError, GRAMMAR, OPTION_NAMES};
pub use lexer::{tokenize, LexError, Tok, Token};
pub use report::{emit_report, report_json, Format};

use crate::ewmodel::{build_ew_model, run_any, run_ew_suite, Hypercharges};
use crate::gauge::ModelSpec;
use crate::liealg::{algebra_residuals, structure_constants, su_basis};
use crate::verify::{Corruption, VerificationReport, VerifyOptions, ALGEBRA_TOL};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "gaugekin", version, about = "Numerical verification of bilateral gauge kinetic Lagrangians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a model file and run the verification suite on it.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Inspect the su(n) generator basis, e.g. `algebra su3 --check`.
    Algebra {
        group: String,
        /// Run the algebra identity checks; exit 1 if any fails.
        #[arg(long)]
        check: bool,
    },
    /// Run a built-in model.
    Demo {
        model: DemoModel,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print the model-file grammar.
    Grammar,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DemoModel {
    Gws,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    points: Option<u64>,
    #[arg(long)]
    modes: Option<u32>,
    #[arg(long)]
    amplitude: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Compare analytic derivatives of transformed potentials with central differences.
    #[arg(long)]
    fd_crosscheck: bool,
    /// Inject a known fault into one check (negative control).
    #[arg(long, value_name = "CHECK")]
    corrupt: Option<String>,
    /// Worker threads for point evaluation (0 = rayon default).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

impl RunArgs {
    fn options(&self, base: VerifyOptions) -> Result<VerifyOptions, String> {
        let mut o = base;
        if let Some(v) = self.seed {
            o.seed = v;
        }
        if let Some(v) = self.points {
            o.points = v as usize;
        }
        if let Some(v) = self.modes {
            o.modes = v;
        }
        if let Some(v) = self.amplitude {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(format!("--amplitude must be finite and >= 0, got {v}"));
            }
            o.amplitude = v;
        }
        if let Some(v) = self.tol {
            if v.is_nan() || v <= 0.0 {
                return Err(format!("--tol must be positive, got {v}"));
            }
            o.tol = v;
        }
        o.fd_crosscheck |= self.fd_crosscheck;
        if let Some(name) = &self.corrupt {
            o.corruption = Some(Corruption::from_check_name(name).ok_or_else(|| {
                let names: Vec<_> = Corruption::ALL.iter().map(|c| c.check_name()).collect();
                format!("unknown check `{name}` for --corrupt (expected one of {})", names.join(", "))
            })?);
        }
        Ok(o)
    }
}

/// Reads and parses a model file into a model plus its option overrides.
pub fn load_model(path: &std::path::Path) -> Result<(ModelDocument, ModelSpec), String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let doc = parse_model_spec(&text).map_err(|e| format!("{}:{e}", path.display()))?;
    let model = doc.to_model().map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((doc, model))
}

fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, String> {
    if threads == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| e.to_string())?;
    Ok(pool.install(f))
}

fn deliver(report: &VerificationReport, run: &RunArgs, out: &mut dyn Write) -> Result<i32, String> {
    let bytes = emit_report(report, run.format);
    match &run.report {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| format!("{}: {e}", path.display()))?,
        None => out.write_all(&bytes).map_err(|e| e.to_string())?,
    }
    Ok(if report.all_pass() { EXIT_PASS } else { EXIT_FAIL })
}

fn algebra(group: &str, check: bool, out: &mut dyn Write) -> Result<i32, String> {
    let n: usize = group
        .strip_prefix("su")
        .or_else(|| group.strip_prefix("SU"))
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| format!("expected a group like `su3`, got `{group}`"))?;
    let basis = su_basis(n).map_err(|e| e.to_string())?;
    let f = &structure_constants(&basis);
    let nonzero = (0..f.len())
        .flat_map(|a| (0..f.len()).flat_map(move |b| (0..f.len()).map(move |c| (a, b, c))))
        .filter(|&(a, b, c)| a < b && b < c && f.get(a, b, c).abs() > 1e-12)
        .count();
    let w = |out: &mut dyn Write, s: String| out.write_all(s.as_bytes()).map_err(|e| e.to_string());
    w(out, format!("su({n}): {} generators, Tr(T_a T_b) = delta_ab/2\n", basis.len()))?;
    w(out, format!("independent nonzero f_abc (a<b<c): {nonzero}\n"))?;
    if !check {
        return Ok(EXIT_PASS);
    }
    let r = algebra_residuals(&basis);
    for (name, v) in [
        ("hermiticity", r.hermiticity),
        ("tracelessness", r.tracelessness),
        ("orthonormality", r.orthonormality),
        ("antisymmetry", r.antisymmetry),
        ("closure", r.closure),
        ("jacobi", r.jacobi),
    ] {
        let verdict = if v <= ALGEBRA_TOL { "ok" } else { "FAIL" };
        w(out, format!("{name:<15} {v:.3e}  {verdict}\n"))?;
    }
    Ok(if r.max() <= ALGEBRA_TOL { EXIT_PASS } else { EXIT_FAIL })
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, String> {
    match cli.command {
        Command::Grammar => {
            out.write_all(GRAMMAR.as_bytes()).map_err(|e| e.to_string())?;
            Ok(EXIT_PASS)
        }
        Command::Algebra { group, check } => algebra(&group, check, out),
        Command::Verify { file, run } => {
            let (doc, model) = load_model(&file)?;
            let opts = run.options(doc.apply_options(&VerifyOptions::default()))?;
            let report = with_threads(run.threads, || run_any(&model, &opts))?;
            deliver(&report, &run, out)
        }
        Command::Demo { model: DemoModel::Gws, run } => {
            let ew = build_ew_model(0.65, 0.35, 1.0, Hypercharges::default()).map_err(|e| e.to_string())?;
            let opts = run.options(VerifyOptions::default())?;
            let report = with_threads(run.threads, || run_ew_suite(&ew, &opts))?;
            deliver(&report, &run, out)
        }
    }
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}
