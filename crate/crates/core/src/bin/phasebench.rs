use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use phasebench::error::{Error, Result};
use phasebench::hamiltonian::expand_to_ising;
use phasebench::sat::dimacs::{read_dimacs_with, write_dimacs, DimacsOptions};
use phasebench::sat::generate_random_ksat;
use phasebench::solvers::{backbone_fraction, brute_force_maxsat, dpll_solve_with, DpllConfig};
use phasebench::sweep::{run_sweep, write_results, DensityGrid, Experiment, OutputFormat, SweepConfig};
use phasebench::verify::{run_oracle_suite, OracleSuiteConfig};

#[derive(Parser)]
#[command(name = "phasebench", version, about = "Phase-transition benchmarks for random k-SAT")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random k-SAT formula in DIMACS CNF.
    Generate(GenerateArgs),
    /// Solve a DIMACS file and print a JSON summary.
    Solve(SolveArgs),
    /// Run a density sweep.
    Sweep(SweepArgs),
    /// Run the oracle-equivalence suite on small formulas.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Clause count.
    #[arg(long, conflicts_with = "alpha", required_unless_present = "alpha")]
    m: Option<usize>,
    /// Clause density; m = round(alpha * n).
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    input: PathBuf,
    /// Accept clause-count mismatches and clauses without a trailing 0.
    #[arg(long)]
    relaxed: bool,
    /// Abort the search after this many decisions.
    #[arg(long)]
    decision_cap: Option<u64>,
    #[arg(long)]
    pure_literal: bool,
    /// Also compute the exact MAX-SAT optimum by enumeration.
    #[arg(long)]
    maxsat: bool,
    /// Also compute the backbone by enumeration.
    #[arg(long)]
    backbone: bool,
    /// Write the Ising expansion table to this file.
    #[arg(long)]
    ising: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// TOML config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    experiment: Option<Experiment>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, requires_all = ["alpha_max", "alpha_step"])]
    alpha_min: Option<f64>,
    #[arg(long, requires_all = ["alpha_min", "alpha_step"])]
    alpha_max: Option<f64>,
    #[arg(long, requires_all = ["alpha_min", "alpha_max"])]
    alpha_step: Option<f64>,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated QAOA depths.
    #[arg(long, value_delimiter = ',')]
    depths: Option<Vec<usize>>,
    /// Comma-separated inverse temperatures.
    #[arg(long, value_delimiter = ',')]
    betas: Option<Vec<f64>>,
    /// Output file (JSON on stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to the output file's extension.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 500)]
    formulas: usize,
    #[arg(long, default_value_t = 12)]
    max_n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn write_text(path: &PathBuf, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })
}

fn generate(args: GenerateArgs) -> Result<()> {
    let m = match (args.m, args.alpha) {
        (Some(m), _) => m,
        (None, Some(alpha)) if alpha.is_finite() && alpha >= 0.0 => (alpha * args.n as f64).round() as usize,
        (None, alpha) => return Err(Error::Config(format!("invalid density {alpha:?}"))),
    };
    let formula = generate_random_ksat(args.n, m, args.k, args.seed)?;
    let text = write_dimacs(&formula);
    match args.out {
        Some(path) => write_text(&path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn solve(args: SolveArgs) -> Result<()> {
    let text = fs::read_to_string(&args.input).map_err(|source| Error::Io {
        path: args.input.clone(),
        source,
    })?;
    let options = if args.relaxed {
        DimacsOptions::relaxed()
    } else {
        DimacsOptions::strict()
    };
    let formula = read_dimacs_with(&text, options)?;
    let config = DpllConfig {
        pure_literal: args.pure_literal,
        decision_cap: args.decision_cap,
        ..Default::default()
    };
    let result = dpll_solve_with(&formula, &config);
    let mut summary = json!({
        "n": formula.n(),
        "m": formula.m(),
        "k": formula.k(),
        "density": formula.density(),
        "status": result.status,
        "decisions": result.effort.decisions,
        "propagations": result.effort.propagations,
        "wall_seconds": result.effort.wall_time,
        "witness": result.witness.as_ref().map(|w| {
            w.bits()
                .iter()
                .enumerate()
                .map(|(i, &b)| if b { i as i64 + 1 } else { -(i as i64 + 1) })
                .collect::<Vec<_>>()
        }),
    });
    if args.maxsat {
        let r = brute_force_maxsat(&formula)?;
        summary["min_unsat"] = json!(r.min_unsat);
        summary["optimal_count"] = json!(r.optimal_count);
    }
    if args.backbone {
        let b = backbone_fraction(&formula)?;
        summary["backbone_fraction"] = json!(b.fixed_fraction);
        summary["backbone"] = json!(b
            .fixed_variables
            .iter()
            .map(|&(v, value)| if value { v as i64 + 1 } else { -(v as i64 + 1) })
            .collect::<Vec<_>>());
    }
    if let Some(path) = &args.ising {
        write_text(path, &expand_to_ising(&formula).to_table())?;
    }
    println!("{}", serde_json::to_string_pretty(&summary).expect("summary serialises"));
    Ok(())
}

fn sweep_config(args: &SweepArgs) -> Result<SweepConfig> {
    let mut config = match &args.config {
        Some(path) => SweepConfig::from_file(path)?,
        None => {
            let missing = |flag: &str| Error::Config(format!("--{flag} is required without --config"));
            SweepConfig::new(
                args.experiment.ok_or_else(|| missing("experiment"))?,
                args.n.ok_or_else(|| missing("n"))?,
                args.k.unwrap_or(3),
                Vec::new(),
                args.instances.ok_or_else(|| missing("instances"))?,
                args.seed.unwrap_or(0),
            )
        }
    };
    if let Some(e) = args.experiment {
        config.experiment = e;
    }
    if let Some(n) = args.n {
        config.n = n;
    }
    if let Some(k) = args.k {
        config.k = k;
    }
    if let (Some(min), Some(max), Some(step)) = (args.alpha_min, args.alpha_max, args.alpha_step) {
        config.densities = DensityGrid { min, max, step }.points()?;
    }
    if let Some(i) = args.instances {
        config.instances = i;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if let Some(d) = &args.depths {
        config.qaoa.depths = d.clone();
    }
    if let Some(b) = &args.betas {
        config.gibbs.betas = b.clone();
    }
    if let Some(t) = args.threads {
        config.threads = t;
    }
    config.validate()?;
    Ok(config)
}

fn sweep(args: SweepArgs) -> Result<()> {
    let config = sweep_config(&args)?;
    let result = run_sweep(&config)?;
    match &args.out {
        Some(path) => {
            let format = args.format.unwrap_or_else(|| OutputFormat::from_path(path));
            write_results(&result, path, format)?;
            eprintln!(
                "wrote {} points to {} in {:.1} s",
                result.points.len(),
                path.display(),
                result.timing.total_seconds
            );
        }
        None => println!("{}", serde_json::to_string_pretty(&result).expect("result serialises")),
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<bool> {
    let config = OracleSuiteConfig {
        formulas: args.formulas,
        max_n: args.max_n,
        seed: args.seed,
        ..Default::default()
    };
    if config.max_n > 20 {
        return Err(Error::LimitExceeded {
            what: "oracle suite",
            n: config.max_n,
            limit: 20,
        });
    }
    let report = run_oracle_suite(&config)?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "{} formulas, {} satisfiable", report.formulas, report.satisfiable).ok();
    for c in &report.checks {
        let verdict = if c.ok() { "ok" } else { "FAILED" };
        writeln!(out, "{verdict:>6}  {}/{}  {}", c.passed, c.total, c.name).ok();
    }
    Ok(report.all_passed())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Generate(a) => generate(a).map(|_| true),
        Command::Solve(a) => solve(a).map(|_| true),
        Command::Sweep(a) => sweep(a).map(|_| true),
        Command::Verify(a) => verify(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
