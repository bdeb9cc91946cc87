use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dstab_core::dstability::{
    certify, replay, Certificate, CertificateKind, CertifyOptions, PivotChain, ReplayError, SearchPolicy,
};
use dstab_core::exec::Exec;
use dstab_core::oracle::{search_counterexample_with, SearchConfig};
use dstab_core::{Matrix, Rational};

use crate::doc::MatrixDocument;
use crate::exit;
use crate::expr::Expr;
use crate::report::{OracleSummary, ReportDocument, Timing};
use crate::sweep::{run_sweep, ParamSpec, SweepGrid, SweepOptions};

#[derive(Parser, Debug)]
#[command(name = "dstab", version, about = "Exact D-stability certificates for square matrices")]
struct Cli {
    /// Output format for stdout.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Seed for the randomized oracle.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Include wall-clock timing in reports (makes them non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the certification pipeline on a matrix.
    Check(CheckArgs),
    /// Search for a positive diagonal D with DA unstable.
    Oracle(OracleArgs),
    /// Evaluate a matrix template over a parameter grid and write CSV.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Matrix file (JSON or CSV), or `-` for stdin.
    file: Option<PathBuf>,
    #[arg(long, value_enum)]
    input_format: Option<InputFormat>,
    /// Bind a template parameter, e.g. `--set q=1/2`.
    #[arg(long = "set", value_name = "NAME=VALUE")]
    set: Vec<String>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Try only this chain of deleted indices (1-based), e.g. `4,3`.
    #[arg(long, value_name = "K,K,...", conflicts_with = "all_chains")]
    pivot_chain: Option<String>,
    /// Explore every pivot chain (n <= 6) and list the successful ones.
    #[arg(long)]
    all_chains: bool,
    /// Treat principal submatrices of this dimension as known D-stable.
    #[arg(long, value_name = "DIM")]
    assume_submatrix_dstable: Option<usize>,
    /// Re-verify the certificate in a report instead of checking a matrix.
    #[arg(long, value_name = "REPORT", conflicts_with_all = ["file", "pivot_chain", "all_chains", "assume_submatrix_dstable"])]
    replay: Option<PathBuf>,
    /// Also write the JSON report here.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Matrix template (JSON or CSV).
    template: PathBuf,
    #[arg(long, value_enum)]
    input_format: Option<InputFormat>,
    /// `NAME=MIN:MAX:STEP` axis or `NAME=EXPR` derived value; repeatable.
    #[arg(long = "param", value_name = "SPEC", required = true)]
    params: Vec<String>,
    /// Output CSV path; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Run the oracle at every point with this many trials.
    #[arg(long, value_name = "N")]
    oracle_trials: Option<usize>,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

type Outcome = Result<i32, Failure>;

/// Output is buffered so commands can run inside a worker pool.
struct Ctx {
    format: OutputFormat,
    seed: u64,
    timing: bool,
    exec: Exec,
    started: Instant,
    out: Vec<u8>,
    err: Vec<u8>,
}

impl Ctx {
    fn print(&mut self, text: &str) -> Result<(), Failure> {
        self.out.extend_from_slice(text.as_bytes());
        Ok(())
    }

    fn timing(&self) -> Option<Timing> {
        self.timing.then(|| Timing {
            elapsed_ms: self.started.elapsed().as_secs_f64() * 1e3,
        })
    }
}

/// Parses arguments, runs one command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let threads = match std::env::var("DSTAB_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Some(n),
            _ => {
                let _ = writeln!(err, "dstab: DSTAB_THREADS must be a positive integer, got `{v}`");
                return exit::USAGE;
            }
        },
        Err(_) => None,
    };
    let mut ctx = Ctx {
        format: cli.format,
        seed: cli.seed,
        timing: cli.timing,
        exec: if cli.sequential { Exec::Sequential } else { Exec::default() },
        started: Instant::now(),
        out: Vec::new(),
        err: Vec::new(),
    };
    let result = with_threads(threads, || dispatch(&cli.command, &mut ctx));
    let mut code = match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(ctx.err, "dstab: {}", f.message);
            f.code
        }
    };
    if out.write_all(&ctx.out).and_then(|_| out.flush()).is_err() {
        code = exit::IO;
    }
    let _ = err.write_all(&ctx.err);
    code
}

#[cfg(feature = "parallel")]
fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads<R>(_threads: Option<usize>, f: impl FnOnce() -> R) -> R {
    f()
}

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Outcome {
    match cmd {
        Command::Check(a) => match &a.replay {
            Some(path) => cmd_replay(path, ctx),
            None => cmd_check(a, ctx),
        },
        Command::Oracle(a) => cmd_oracle(a, ctx),
        Command::Sweep(a) => cmd_sweep(a, ctx),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| fail(exit::IO, format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound | io::ErrorKind::PermissionDenied => {
            fail(exit::NO_INPUT, format!("cannot open {}: {e}", path.display()))
        }
        _ => fail(exit::IO, format!("reading {}: {e}", path.display())),
    })
}

fn load_document(path: &Path, format: Option<InputFormat>) -> Result<MatrixDocument, Failure> {
    let text = read_input(path)?;
    let format = format.unwrap_or_else(|| {
        let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        if is_csv || !text.trim_start().starts_with('{') {
            InputFormat::Csv
        } else {
            InputFormat::Json
        }
    });
    let doc = match format {
        InputFormat::Json => MatrixDocument::parse_json(&text),
        InputFormat::Csv => MatrixDocument::parse_csv(&text),
    };
    doc.map_err(|e| fail(exit::DATA, format!("{}: {e}", path.display())))
}

fn load_matrix(input: &InputArgs) -> Result<Matrix, Failure> {
    let path = input
        .file
        .as_deref()
        .ok_or_else(|| fail(exit::USAGE, "missing matrix file"))?;
    let doc = load_document(path, input.input_format)?;
    let mut env: BTreeMap<String, Rational> = BTreeMap::new();
    for s in &input.set {
        let (name, value) = s
            .split_once('=')
            .ok_or_else(|| fail(exit::USAGE, format!("--set expects NAME=VALUE, got `{s}`")))?;
        let v = Expr::parse(value)
            .and_then(|e| e.eval(&env))
            .map_err(|e| fail(exit::USAGE, format!("--set {s}: {e}")))?;
        env.insert(name.trim().to_string(), v);
    }
    doc.bind(&env).map_err(|e| fail(exit::USAGE, format!("{e}; bind it with --set NAME=VALUE")))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    let mut f = fs::File::create(path).map_err(|e| fail(exit::CANT_CREATE, format!("cannot create {}: {e}", path.display())))?;
    f.write_all(text.as_bytes())
        .map_err(|e| fail(exit::IO, format!("writing {}: {e}", path.display())))
}

fn parse_chain(text: &str) -> Result<PivotChain, Failure> {
    let nums = text
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| fail(exit::USAGE, format!("--pivot-chain expects comma-separated indices, got `{text}`")))?;
    PivotChain::from_one_based(&nums).map_err(|e| fail(exit::USAGE, e.to_string()))
}

fn kind_code(kind: CertificateKind) -> i32 {
    match kind {
        CertificateKind::DStable => exit::OK,
        CertificateKind::Inconclusive => exit::INCONCLUSIVE,
        CertificateKind::NotStable | CertificateKind::NecessaryFailed => exit::NOT_DSTABLE,
        CertificateKind::Counterexample => exit::COUNTEREXAMPLE,
    }
}

fn cmd_check(a: &CheckArgs, ctx: &mut Ctx) -> Outcome {
    let m = load_matrix(&a.input)?;
    let policy = match (&a.pivot_chain, a.all_chains) {
        (Some(c), _) => SearchPolicy::Fixed(parse_chain(c)?),
        (None, true) => SearchPolicy::AllChains,
        (None, false) => SearchPolicy::Default,
    };
    let opts = CertifyOptions {
        policy,
        assume_dstable_dim: a.assume_submatrix_dstable,
        exec: ctx.exec,
    };
    let cert = certify(&m, &opts).map_err(|e| fail(exit::USAGE, e.to_string()))?;
    let code = kind_code(cert.kind);
    let mut report = ReportDocument::new("check", &m);
    report.certificate = Some(cert);
    report.timing = ctx.timing();
    emit(ctx, &report, a.report.as_deref())?;
    Ok(code)
}

fn cmd_oracle(a: &OracleArgs, ctx: &mut Ctx) -> Outcome {
    let m = load_matrix(&a.input)?;
    let cfg = SearchConfig {
        trials: a.trials,
        seed: ctx.seed,
        exec: ctx.exec,
    };
    let outcome = search_counterexample_with(&m, &cfg);
    let all_failed = outcome.all_failed();
    let mut report = ReportDocument::new("oracle", &m);
    if let Some(c) = &outcome.counterexample {
        report.certificate = Some(Certificate::counterexample(&m, c.d_exact.clone()));
    }
    let found = outcome.counterexample.is_some();
    if outcome.eigen_failures > 0 {
        let _ = writeln!(ctx.err, "dstab: {} eigenvalue computations failed", outcome.eigen_failures);
    }
    report.oracle = Some(OracleSummary::new(ctx.seed, outcome));
    report.timing = ctx.timing();
    emit(ctx, &report, a.report.as_deref())?;
    Ok(if found {
        exit::COUNTEREXAMPLE
    } else if all_failed {
        exit::SOFTWARE
    } else {
        exit::OK
    })
}

fn cmd_replay(path: &Path, ctx: &mut Ctx) -> Outcome {
    let text = read_input(path)?;
    let report = ReportDocument::from_json(&text).map_err(|e| fail(exit::DATA, format!("{}: {e}", path.display())))?;
    let Some(cert) = &report.certificate else {
        ctx.print("replay: rejected: report carries no certificate\n")?;
        return Ok(exit::REPLAY_REJECTED);
    };
    match replay(&report.matrix, cert) {
        Ok(()) => {
            ctx.print(&format!(
                "replay: ok: {} ({} inequalities re-evaluated)\n",
                cert.kind,
                cert.instances().len()
            ))?;
            Ok(exit::OK)
        }
        Err(ReplayError::Rejected(msg)) => {
            ctx.print(&format!("replay: rejected: {msg}\n"))?;
            Ok(exit::REPLAY_REJECTED)
        }
        Err(ReplayError::Core(e)) => {
            ctx.print(&format!("replay: rejected: {e}\n"))?;
            Ok(exit::REPLAY_REJECTED)
        }
    }
}

fn cmd_sweep(a: &SweepArgs, ctx: &mut Ctx) -> Outcome {
    let doc = load_document(&a.template, a.input_format)?;
    let specs = a
        .params
        .iter()
        .map(|p| ParamSpec::parse(p))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| fail(exit::USAGE, e.to_string()))?;
    let grid = SweepGrid::new(specs).map_err(|e| fail(exit::USAGE, e.to_string()))?;
    let opts = SweepOptions {
        oracle_trials: a.oracle_trials,
        seed: ctx.seed,
        exec: ctx.exec,
    };
    let csv = run_sweep(&doc, &grid, &opts).map_err(|e| {
        let code = match e {
            crate::sweep::SweepError::Point { .. } => exit::DATA,
            _ => exit::USAGE,
        };
        fail(code, e.to_string())
    })?;
    match &a.out {
        Some(path) => write_file(path, &csv)?,
        None => ctx.print(&csv)?,
    }
    Ok(exit::OK)
}

fn emit(ctx: &mut Ctx, report: &ReportDocument, path: Option<&Path>) -> Result<(), Failure> {
    let json = report.to_json();
    if let Some(p) = path {
        write_file(p, &json)?;
    }
    match ctx.format {
        OutputFormat::Json => ctx.print(&json),
        OutputFormat::Text => ctx.print(&render_text(report)),
    }
}

fn render_text(r: &ReportDocument) -> String {
    let mut s = String::new();
    let mut line = |t: String| {
        s.push_str(&t);
        s.push('\n');
    };
    line(format!("matrix: {}x{} {}", r.matrix.dim(), r.matrix.dim(), r.input_digest));
    if let Some(c) = &r.certificate {
        line(format!("verdict: {}", c.kind));
        match c.kind {
            CertificateKind::DStable => {
                if let Some(chain) = &c.pivot_chain {
                    line(format!("pivot chain: {chain}"));
                }
                line(format!("inequalities: {} checked, all satisfied", c.instances().len()));
                if let Some(b) = &c.base {
                    line(format!("base: {} {}", b.subset, b.kind));
                }
                if let Some(chains) = c.search.as_ref().and_then(|s| s.successful_chains.as_ref()) {
                    let list: Vec<String> = chains.iter().map(|ch| ch.to_string()).collect();
                    line(format!("successful chains: {}", list.join(" ")));
                }
            }
            CertificateKind::Inconclusive => {
                if let Some(v) = &c.violation {
                    let i = &v.instance;
                    line(format!(
                        "violated: pivot {} on {}, alpha {}, beta {}: {}",
                        i.pivot + 1,
                        v.subset,
                        i.alpha,
                        i.beta,
                        i.value
                    ));
                }
            }
            CertificateKind::NotStable => {
                let d: Vec<String> = c.stability.determinants.iter().map(|v| v.to_string()).collect();
                line(format!("hurwitz determinants: {}", d.join(" ")));
            }
            CertificateKind::NecessaryFailed => {
                if let Some(n) = &c.necessary {
                    if let Some(w) = n.p0_witness {
                        line(format!("-A has a negative principal minor on {w}"));
                    } else if let Some(k) = n.failing_order {
                        line(format!("-A has no positive principal minor of order {k}"));
                    }
                }
            }
            CertificateKind::Counterexample => {
                if let Some(d) = &c.counterexample_d {
                    let d: Vec<String> = d.iter().map(|v| v.to_string()).collect();
                    line(format!("d: {}", d.join(" ")));
                }
            }
        }
        if let Some(note) = &c.note {
            line(format!("note: {note}"));
        }
    }
    if let Some(o) = &r.oracle {
        line(format!(
            "oracle: seed {}, {} of {} trials, {} eigen failures, {} discarded",
            o.seed, o.trials_run, o.trials_requested, o.eigen_failures, o.discarded
        ));
        match &o.counterexample {
            Some(c) => line(format!(
                "counterexample at trial {}: abscissa {:.6e}",
                c.d.trial_index, c.abscissa
            )),
            None => line("no counterexample found".into()),
        }
    }
    if let Some(t) = &r.timing {
        line(format!("elapsed: {:.3} ms", t.elapsed_ms));
    }
    s
}
