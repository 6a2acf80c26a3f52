use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lslab::census::census;
use lslab::cnf::Assignment;
use lslab::experiment::{
    run_to_path, run_to_writer, ExperimentKind, ExperimentSpec, InitialKind, OutputFormat,
};
use lslab::generate::{sample, GeneratorConfig, Mode};
use lslab::oracle::{brute_force_opt, enumerate_minima, MAX_MINIMA_VARS};
use lslab::solver::{coupled_run, run, RunOptions, SolverKind, TraceLevel};
use lslab::{dimacs, Error, Result, Seed};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "lslab", version, about = "Local search experiments on random 3-CNF")]
struct Cli {
    /// Base seed for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record format for sweeps.
    #[arg(long, global = true, value_parser = parse_format)]
    format: Option<OutputFormat>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// JSON config: a generator config for `generate`, an experiment spec
    /// for `sweep`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a formula and write it as DIMACS.
    Generate(GenerateArgs),
    /// Run one solver on a DIMACS file and print its trace as JSON.
    Solve(SolveArgs),
    /// Count caps, crowns and isolated pairs in a DIMACS file.
    Census(CensusArgs),
    /// Exhaustive OPT and local-minima census of a small DIMACS file.
    Verify(FileArg),
    /// Run an experiment sweep.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, conflicts_with_all = ["kappa", "rho"])]
    m: Option<usize>,
    #[arg(long, conflicts_with = "rho")]
    kappa: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long, value_parser = parse_mode)]
    mode: Option<Mode>,
}

#[derive(Args, Debug)]
struct FileArg {
    #[arg(long)]
    file: PathBuf,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    file: PathBuf,
    /// ls, mls, sd, or coupled (SD and MLS on one pick stream).
    #[arg(long, default_value = "ls")]
    solver: String,
    /// random, ones, zeros, or an explicit 0/1 string of length n.
    #[arg(long, default_value = "random")]
    initial: String,
    #[arg(long)]
    budget: Option<u64>,
    /// Include per-step records.
    #[arg(long)]
    full: bool,
    /// Recheck the incremental state from scratch every K flips.
    #[arg(long, value_name = "K")]
    verify_every: Option<u64>,
}

#[derive(Args, Debug)]
struct CensusArgs {
    #[arg(long)]
    file: PathBuf,
    #[arg(long, default_value_t = 1)]
    d1: usize,
    #[arg(long, default_value_t = 2)]
    d2: usize,
    /// Also list every cap and crown found.
    #[arg(long)]
    list: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_parser = parse_kind)]
    kind: Option<ExperimentKind>,
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    kappa: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    rho: Vec<f64>,
    #[arg(long, value_parser = parse_mode)]
    mode: Option<Mode>,
    #[arg(long, value_parser = parse_solver)]
    solver: Option<SolverKind>,
    #[arg(long)]
    trials: Option<usize>,
    /// Step budget per run (solver default when absent).
    #[arg(long)]
    budget: Option<u64>,
    /// Initial assignment: random, all_ones or all_zeros.
    #[arg(long, value_parser = parse_initial)]
    initial: Option<InitialKind>,
    /// zero_flood: zero fractions of the two batches.
    #[arg(long)]
    q0: Option<f64>,
    #[arg(long)]
    q1: Option<f64>,
    /// zero_flood: assignments per batch.
    #[arg(long)]
    samples: Option<usize>,
    /// sd_uniformity: initial ones, horizon and runs per repetition.
    #[arg(long)]
    m0: Option<usize>,
    #[arg(long)]
    t: Option<u64>,
    #[arg(long)]
    probe_trials: Option<u64>,
    /// structure_census: isolation level and pair distance.
    #[arg(long)]
    d1: Option<usize>,
    #[arg(long)]
    d2: Option<usize>,
    /// Keep complete cells already present in --out and run the rest.
    #[arg(long, requires = "out")]
    resume: bool,
}

fn parse_format(s: &str) -> std::result::Result<OutputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mode(s: &str) -> std::result::Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_kind(s: &str) -> std::result::Result<ExperimentKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_initial(s: &str) -> std::result::Result<InitialKind, String> {
    serde_json::from_value(serde_json::Value::from(s)).map_err(|_| {
        format!("unknown initial assignment {s:?}; expected random, all_ones or all_zeros")
    })
}

fn parse_solver(s: &str) -> std::result::Result<SolverKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn generate(cli: &Cli, a: &GenerateArgs) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(p) => serde_json::from_str::<GeneratorConfig>(&read_text(p)?)
            .map_err(|e| Error::InvalidSpec(format!("generator config: {e}")))?,
        None => GeneratorConfig {
            n: a.n.ok_or_else(|| Error::InvalidSpec("--n is required".into()))?,
            m: None,
            kappa: None,
            rho: None,
            mode: Mode::Planted,
            seed: None,
        },
    };
    if let Some(n) = a.n {
        cfg.n = n;
    }
    if a.m.is_some() || a.kappa.is_some() || a.rho.is_some() {
        cfg.m = a.m;
        cfg.kappa = a.kappa;
        cfg.rho = a.rho;
    }
    if let Some(mode) = a.mode {
        cfg.mode = mode;
    }
    let seed = cli.seed.or(cfg.seed).unwrap_or(0);
    let spec = cfg.to_spec()?;
    let f = sample(&spec, Seed::single(seed))?;
    let text = dimacs::write_with_comments(&f, &[cfg.describe(spec.m, seed)]);
    emit(cli.out.as_deref(), &text)
}

fn initial(s: &str, n: usize, seed: Seed) -> Result<Option<Assignment>> {
    Ok(match s {
        "random" => None,
        "ones" => Some(InitialKind::AllOnes.draw(n, seed)),
        "zeros" => Some(InitialKind::AllZeros.draw(n, seed)),
        bits => {
            let values = bits
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::InvalidSpec(format!(
                        "--initial must be random, ones, zeros or a 0/1 string, got {bits:?}"
                    ))),
                })
                .collect::<Result<Vec<_>>>()?;
            Some(Assignment::new(values))
        }
    })
}

fn solve(cli: &Cli, a: &SolveArgs) -> Result<()> {
    let f = dimacs::read_path(&a.file)?;
    let seed = Seed::single(cli.seed.unwrap_or(0));
    let start = initial(&a.initial, f.num_vars(), seed)?;
    let level = if a.full {
        TraceLevel::Full
    } else {
        TraceLevel::Compact
    };
    let opts = RunOptions {
        step_budget: a.budget,
        trace: level,
        verify_every: a.verify_every,
    };
    let value = if a.solver == "coupled" {
        let t = coupled_run(&f, start, seed, &opts)?;
        serde_json::to_value(t).expect("serializable")
    } else {
        let kind: SolverKind = a.solver.parse()?;
        run(kind, &f, start, seed, &opts)?.to_json(level)
    };
    emit(cli.out.as_deref(), &format!("{value}\n"))
}

fn census_cmd(cli: &Cli, a: &CensusArgs) -> Result<()> {
    let f = dimacs::read_path(&a.file)?;
    let report = census(&f, a.d1, a.d2, a.list);
    let text = serde_json::to_string(&report).expect("serializable");
    emit(cli.out.as_deref(), &format!("{text}\n"))
}

fn verify(cli: &Cli, a: &FileArg) -> Result<()> {
    let f = dimacs::read_path(&a.file)?;
    let (opt, witness) = brute_force_opt(&f)?;
    if f.sat_count(&witness) != opt {
        return Err(Error::Invariant("OPT witness does not reach OPT".into()));
    }
    let minima = if f.num_vars() <= MAX_MINIMA_VARS {
        let c = enumerate_minima(&f)?;
        let satisfiable = opt == f.num_clauses();
        if satisfiable != (c.global_minima > 0) {
            return Err(Error::Invariant(
                "minima census disagrees with OPT on satisfiability".into(),
            ));
        }
        serde_json::to_value(c.summary()).expect("serializable")
    } else {
        serde_json::Value::Null
    };
    let value = json!({
        "n": f.num_vars(),
        "m": f.num_clauses(),
        "opt": opt,
        "witness": witness.to_string(),
        "minima": minima,
    });
    emit(cli.out.as_deref(), &format!("{value}\n"))
}

fn sweep(cli: &Cli, a: &SweepArgs) -> Result<()> {
    let mut spec = match &cli.config {
        Some(p) => {
            let text = read_text(p)?;
            serde_json::from_str::<ExperimentSpec>(&text)
                .map_err(|e| Error::InvalidSpec(format!("experiment config: {e}")))?
        }
        None => {
            let kind = a
                .kind
                .ok_or_else(|| Error::InvalidSpec("--kind or --config is required".into()))?;
            ExperimentSpec::new(kind, Vec::new(), 1)
        }
    };
    if let Some(k) = a.kind {
        spec.kind = k;
    }
    if !a.n.is_empty() {
        spec.n = a.n.clone();
    }
    if !a.kappa.is_empty() {
        spec.kappa = Some(a.kappa.clone());
        spec.rho = None;
    }
    if !a.rho.is_empty() {
        spec.rho = Some(a.rho.clone());
        spec.kappa = None;
    }
    if let Some(m) = a.mode {
        spec.mode = m;
    }
    if let Some(s) = a.solver {
        spec.solver = Some(s);
    }
    if let Some(t) = a.trials {
        spec.trials = t;
    }
    if a.budget.is_some() {
        spec.step_budget = a.budget;
    }
    if let Some(i) = a.initial {
        spec.initial = i;
    }
    if a.q0.is_some() {
        spec.q0 = a.q0;
    }
    if a.q1.is_some() {
        spec.q1 = a.q1;
    }
    if let Some(s) = a.samples {
        spec.samples = s;
    }
    if a.m0.is_some() {
        spec.m0 = a.m0;
    }
    if a.t.is_some() {
        spec.t = a.t;
    }
    if a.probe_trials.is_some() {
        spec.probe_trials = a.probe_trials;
    }
    if let Some(d) = a.d1 {
        spec.d1 = d;
    }
    if let Some(d) = a.d2 {
        spec.d2 = d;
    }
    if let Some(s) = cli.seed {
        spec.base_seed = s;
    }
    if let Some(f) = cli.format {
        spec.format = f;
    }
    if cli.threads.is_some() {
        spec.threads = cli.threads;
    }
    if let Some(o) = &cli.out {
        spec.output = Some(o.clone());
    }
    spec.validate()?;
    match spec.output.clone() {
        Some(path) => {
            let s = run_to_path(&spec, &path, a.resume)?;
            eprintln!(
                "{} cells ({} resumed), {} records written to {}",
                s.cells,
                s.resumed_cells,
                s.records_written,
                path.display()
            );
        }
        None => {
            let mut stdout = io::stdout().lock();
            run_to_writer(&spec, &mut stdout, Path::new("<stdout>"), 0, true)?;
        }
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Generate(a) => generate(cli, a),
        Command::Solve(a) => solve(cli, a),
        Command::Census(a) => census_cmd(cli, a),
        Command::Verify(a) => verify(cli, a),
        Command::Sweep(a) => sweep(cli, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let line = msg.lines().next().unwrap_or("usage error");
            eprintln!("{line}");
            return ExitCode::from(1);
        }
    };
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
