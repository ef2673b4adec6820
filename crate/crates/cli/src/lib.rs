//! `isolab` command line.
//!
//! Exit codes: 0 on success, 1 when a solver result fails verification or
//! another internal property check trips, 2 on usage or input errors.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use isolab::dimacs::{parse_dimacs, read_dimacs, write_dimacs_to};
use isolab::experiments::{
    parse_config, run_lcs_trials, run_sis_trials, sweep_sis_window, write_lcs, write_sis,
    write_sweep, ExperimentConfig, ExperimentKind, OutputFormat, ReportOptions, RunSettings,
    DEFAULT_LCS_NODES, DEFAULT_SIS_NODES,
};
use isolab::mcis::max_common_induced_subgraph;
use isolab::sis::{contains_induced, count_induced_embeddings};
use isolab::theory::{alon_window, lcs_threshold, phi_exact, sis_threshold};
use isolab::{
    gnp_sample, is_induced_isomorphism, rado_prefix, Error, Graph, SearchBudget, Seed, Verdict,
};

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "ISOLAB_WORKERS";

#[derive(Parser, Debug)]
#[command(
    name = "isolab",
    version,
    about = "Isomorphism experiments on random graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample G(n, p) and print it as DIMACS
    Gen {
        n: usize,
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the first n vertices of the binary-digit Rado graph as DIMACS
    Rado {
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print predicted windows
    Predict {
        #[command(subcommand)]
        which: PredictKind,
    },
    /// Largest common induced subgraph of two DIMACS graphs (`-` reads stdin)
    Mcis {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Whether TARGET contains PATTERN as an induced subgraph (`-` reads stdin)
    Sis {
        pattern: PathBuf,
        target: PathBuf,
        /// Also count ordered induced embeddings (full search, no budget)
        #[arg(long)]
        count: bool,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Exact phi(m, n) for m <= n <= 8
    Phi { m: usize, n: usize },
    /// Seeded Monte Carlo experiments
    Experiment {
        #[arg(value_enum)]
        kind: KindArg,
        #[command(flatten)]
        flags: ExperimentFlags,
    },
}

#[derive(Subcommand, Debug)]
enum PredictKind {
    /// Common induced subgraph window floor(x_N -/+ eps_N)
    Lcs(RangeArgs),
    /// Containment window floor(y_N -/+ eps_N)
    Sis(RangeArgs),
}

#[derive(Args, Debug)]
struct RangeArgs {
    /// A single N
    #[arg(long = "n-for", conflicts_with_all = ["from", "to"])]
    n_for: Option<u64>,
    #[arg(long, requires = "to")]
    from: Option<u64>,
    #[arg(long, requires = "from")]
    to: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct BudgetArgs {
    #[arg(long)]
    max_nodes: Option<u64>,
    #[arg(long)]
    max_time_ms: Option<u64>,
}

#[derive(Args, Debug)]
struct ExperimentFlags {
    /// key=value file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "N")]
    big_n: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    from: Option<usize>,
    #[arg(long)]
    to: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    max_nodes: Option<u64>,
    #[arg(long)]
    max_time_ms: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Include wall-clock milliseconds (makes output run-dependent)
    #[arg(long)]
    timing: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => OutputFormat::Text,
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Lcs,
    Sis,
    Sweep,
}

impl From<KindArg> for ExperimentKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Lcs => ExperimentKind::Lcs,
            KindArg::Sis => ExperimentKind::Sis,
            KindArg::Sweep => ExperimentKind::Sweep,
        }
    }
}

enum Failure {
    Usage(String),
    Input(Error),
    Property(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PropertyViolation(msg) => Failure::Property(msg),
            Error::Io(e) => Failure::Io(e),
            other => Failure::Input(other),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type CliResult = Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(
                err,
                "error: {msg}\n\nRun `isolab --help` for the command grammar."
            );
            2
        }
        Err(Failure::Input(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
        Err(Failure::Property(msg)) => {
            let _ = writeln!(err, "property check failed: {msg}");
            1
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CliResult {
    match cmd {
        Command::Gen {
            n,
            p,
            seed,
            stream,
            output,
        } => {
            let g = gnp_sample(n, p, Seed::new(seed, stream))?;
            emit_graph(&g, output.as_deref(), out)
        }
        Command::Rado { n, output } => emit_graph(&rado_prefix(n)?, output.as_deref(), out),
        Command::Predict { which } => match which {
            PredictKind::Lcs(r) => predict_lcs(&r, out),
            PredictKind::Sis(r) => predict_sis(&r, out),
        },
        Command::Mcis {
            first,
            second,
            budget,
            format,
        } => mcis_cmd(&first, &second, &budget, format, out),
        Command::Sis {
            pattern,
            target,
            count,
            budget,
            format,
        } => sis_cmd(&pattern, &target, count, &budget, format, out),
        Command::Phi { m, n } => {
            let r = phi_exact(m, n)?;
            writeln!(out, "phi({m}, {n}) = {r} ~ {:.6}", r.to_f64())?;
            Ok(())
        }
        Command::Experiment { kind, flags } => experiment_cmd(kind.into(), flags, out),
    }
}

fn emit_graph(g: &Graph, path: Option<&Path>, out: &mut dyn Write) -> CliResult {
    match path {
        Some(p) => isolab::dimacs::write_dimacs(g, p)?,
        None => write_dimacs_to(g, out)?,
    }
    Ok(())
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        return Ok(parse_dimacs(&text).map_err(|e| e.in_stdin())?);
    }
    Ok(read_dimacs(path)?)
}

trait StdinContext {
    fn in_stdin(self) -> Error;
}

impl StdinContext for Error {
    fn in_stdin(self) -> Error {
        match self {
            Error::Parse { line, msg } => Error::Parse {
                line,
                msg: format!("<stdin>: {msg}"),
            },
            other => other,
        }
    }
}

fn budget_of(b: &BudgetArgs) -> SearchBudget {
    SearchBudget {
        max_nodes: b.max_nodes,
        max_time: b.max_time_ms.map(Duration::from_millis),
        target: None,
    }
}

fn range_of(r: &RangeArgs) -> Result<std::ops::RangeInclusive<u64>, Failure> {
    match (r.n_for, r.from, r.to) {
        (Some(n), _, _) => Ok(n..=n),
        (None, Some(a), Some(b)) if a <= b => Ok(a..=b),
        (None, Some(a), Some(b)) => Err(Failure::Usage(format!(
            "--from {a} is larger than --to {b}"
        ))),
        _ => Err(Failure::Usage("give --n-for N or --from A --to B".into())),
    }
}

fn flag(b: bool) -> &'static str {
    if b {
        "  *"
    } else {
        ""
    }
}

fn predict_lcs(r: &RangeArgs, out: &mut dyn Write) -> CliResult {
    let rows = range_of(r)?
        .map(lcs_threshold)
        .collect::<Result<Vec<_>, _>>()?;
    match r.format {
        Format::Text => {
            writeln!(
                out,
                "{:>6} {:>9} {:>7} {:>6} {:>6}",
                "N", "x_N", "eps_N", "lo", "hi"
            )?;
            for p in &rows {
                writeln!(
                    out,
                    "{:>6} {:>9.4} {:>7.4} {:>6} {:>6}{}",
                    p.big_n,
                    p.x,
                    p.eps,
                    p.lo,
                    p.hi,
                    flag(p.boundary_flag)
                )?;
            }
            if rows.iter().any(|p| p.boundary_flag) {
                writeln!(out, "* floor argument within 2^-30 of an integer")?;
            }
        }
        Format::Csv => {
            writeln!(out, "N,x,eps,lo,hi,boundary_flag")?;
            for p in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    p.big_n, p.x, p.eps, p.lo, p.hi, p.boundary_flag
                )?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &rows).map_err(Error::from)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn predict_sis(r: &RangeArgs, out: &mut dyn Write) -> CliResult {
    let rows = range_of(r)?
        .map(sis_threshold)
        .collect::<Result<Vec<_>, _>>()?;
    match r.format {
        Format::Text => {
            writeln!(
                out,
                "{:>6} {:>9} {:>7} {:>9} {:>9} {:>9}",
                "N", "y_N", "eps_N", "contain", "exclude", "alon"
            )?;
            for p in &rows {
                let alon =
                    alon_window(p.big_n).map_or_else(|_| "-".to_string(), |a| format!("{a:.4}"));
                writeln!(
                    out,
                    "{:>6} {:>9.4} {:>7.4} {:>9} {:>9} {:>9}{}",
                    p.big_n,
                    p.y,
                    p.eps,
                    p.n_contain,
                    p.n_exclude,
                    alon,
                    flag(p.boundary_flag)
                )?;
            }
            if rows.iter().any(|p| p.boundary_flag) {
                writeln!(out, "* floor argument within 2^-30 of an integer")?;
            }
        }
        Format::Csv => {
            writeln!(out, "N,y,eps,n_contain,n_exclude,boundary_flag")?;
            for p in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    p.big_n, p.y, p.eps, p.n_contain, p.n_exclude, p.boundary_flag
                )?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &rows).map_err(Error::from)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn mcis_cmd(
    a: &Path,
    b: &Path,
    budget: &BudgetArgs,
    format: Format,
    out: &mut dyn Write,
) -> CliResult {
    let g1 = load_graph(a)?;
    let g2 = load_graph(b)?;
    let r = max_common_induced_subgraph(&g1, &g2, budget_of(budget));
    if !is_induced_isomorphism(&g1, &g2, &r.mapping)? {
        return Err(Failure::Property(
            "returned mapping is not an induced isomorphism".into(),
        ));
    }
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &r).map_err(Error::from)?;
            writeln!(out)?;
        }
        Format::Text | Format::Csv => {
            writeln!(out, "size: {}", r.size)?;
            writeln!(out, "optimal: {}", r.optimal)?;
            writeln!(out, "nodes: {}", r.nodes_explored)?;
            let pairs: Vec<String> = r
                .mapping
                .iter()
                .map(|(u, v)| format!("{}->{}", u + 1, v + 1))
                .collect();
            writeln!(out, "mapping: {}", pairs.join(" "))?;
        }
    }
    Ok(())
}

fn sis_cmd(
    p: &Path,
    t: &Path,
    count: bool,
    budget: &BudgetArgs,
    format: Format,
    out: &mut dyn Write,
) -> CliResult {
    let pattern = load_graph(p)?;
    let target = load_graph(t)?;
    let r = contains_induced(&pattern, &target, budget_of(budget));
    if let Some(pairs) = r.witness_pairs() {
        if !is_induced_isomorphism(&pattern, &target, &pairs)? {
            return Err(Failure::Property(
                "returned witness is not an induced embedding".into(),
            ));
        }
    }
    let embeddings = count.then(|| count_induced_embeddings(&pattern, &target));
    if let Some(c) = embeddings {
        if (c > 0) != (r.found == Verdict::True) && r.found != Verdict::Unknown {
            return Err(Failure::Property(format!(
                "decision {} disagrees with embedding count {c}",
                r.found.as_str()
            )));
        }
    }
    match format {
        Format::Json => {
            let mut v = serde_json::to_value(&r).map_err(Error::from)?;
            if let (Some(c), Some(map)) = (embeddings, v.as_object_mut()) {
                map.insert(
                    "embeddings".into(),
                    serde_json::Value::String(c.to_string()),
                );
            }
            serde_json::to_writer_pretty(&mut *out, &v).map_err(Error::from)?;
            writeln!(out)?;
        }
        Format::Text | Format::Csv => {
            writeln!(out, "found: {}", r.found.as_str())?;
            writeln!(out, "nodes: {}", r.nodes_explored)?;
            if let Some(w) = &r.witness {
                let pairs: Vec<String> = w
                    .iter()
                    .enumerate()
                    .map(|(u, v)| format!("{}->{}", u + 1, v + 1))
                    .collect();
                writeln!(out, "witness: {}", pairs.join(" "))?;
            }
            if let Some(c) = embeddings {
                writeln!(out, "embeddings: {c}")?;
            }
        }
    }
    Ok(())
}

fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0)
}

fn experiment_cmd(kind: ExperimentKind, flags: ExperimentFlags, out: &mut dyn Write) -> CliResult {
    let from_file = match &flags.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::from(e).in_path(path))?;
            parse_config(&text).map_err(|e| e.in_path(path))?
        }
        None => ExperimentConfig::default(),
    };
    if from_file.kind.is_some_and(|k| k != kind) {
        return Err(Failure::Usage(
            "config file `kind` disagrees with the subcommand".into(),
        ));
    }
    let cfg = from_file.overlay(&ExperimentConfig {
        kind: Some(kind),
        big_n: flags.big_n,
        n: flags.n,
        from: flags.from,
        to: flags.to,
        trials: flags.trials,
        seed: flags.seed,
        workers: flags.workers,
        max_nodes: flags.max_nodes,
        max_time_ms: flags.max_time_ms,
        format: flags.format.map(Into::into),
        timing: flags.timing.then_some(true),
    });

    let big_n = cfg
        .big_n
        .ok_or_else(|| Failure::Usage("--N is required".into()))?;
    let trials = cfg.trials.unwrap_or(1);
    let default_nodes = match kind {
        ExperimentKind::Lcs => DEFAULT_LCS_NODES,
        _ => DEFAULT_SIS_NODES,
    };
    let settings = RunSettings {
        master_seed: cfg.seed.unwrap_or(0),
        workers: cfg.workers.unwrap_or_else(default_workers),
        budget: SearchBudget {
            max_nodes: Some(cfg.max_nodes.unwrap_or(default_nodes)),
            max_time: cfg.max_time_ms.map(Duration::from_millis),
            target: None,
        },
    };
    let format = cfg.format.unwrap_or(OutputFormat::Text);
    let opts = ReportOptions {
        timing: cfg.timing.unwrap_or(false),
    };

    let mut buf = Vec::new();
    match kind {
        ExperimentKind::Lcs => {
            let e = run_lcs_trials(big_n, trials, settings)?;
            write_lcs(&e, format, opts, &mut buf)?;
        }
        ExperimentKind::Sis => {
            let n = cfg
                .n
                .ok_or_else(|| Failure::Usage("--n is required for `experiment sis`".into()))?;
            let e = run_sis_trials(n, big_n, trials, settings)?;
            write_sis(&e, format, opts, &mut buf)?;
        }
        ExperimentKind::Sweep => {
            let (Some(a), Some(b)) = (cfg.from, cfg.to) else {
                return Err(Failure::Usage(
                    "--from and --to are required for `experiment sweep`".into(),
                ));
            };
            let r = sweep_sis_window(big_n, a, b, trials, settings)?;
            write_sweep(&r, format, opts, &mut buf)?;
        }
    }
    match &flags.output {
        Some(path) => fs::write(path, &buf).map_err(|e| Error::from(e).in_path(path))?,
        None => out.write_all(&buf)?,
    }
    Ok(())
}

trait PathContext {
    fn in_path(self, path: &Path) -> Error;
}

impl PathContext for Error {
    fn in_path(self, path: &Path) -> Error {
        Error::File {
            path: path.to_path_buf(),
            source: Box::new(self),
        }
    }
}
