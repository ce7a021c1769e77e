use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gaode::config::ConfigDocument;
use gaode::harness;
use gaode::metrics;

#[derive(Parser)]
#[command(
    name = "gaode",
    version,
    about = "Adaptive-DE experiment harness with a greedy one-step parameter oracle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one experiment cell and write its outputs.
    Run(CommonArgs),
    /// Execute a method x function x dimension cross product.
    Sweep(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Config document; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Method token: jde | epsde | jade | mde | shade | gao.
    #[arg(long)]
    method: Option<String>,

    /// Function token: sphere | ellipsoid | rot-ellipsoid | rosenbrock |
    /// ackley | rastrigin.
    #[arg(long)]
    function: Option<String>,

    /// Problem dimensionality (>= 2).
    #[arg(long)]
    dim: Option<usize>,

    /// Independent runs per cell (default 51).
    #[arg(long)]
    runs: Option<usize>,

    /// Population size (default: 20 for D <= 4, 5*D above).
    #[arg(long)]
    population: Option<usize>,

    /// Evaluation budget per run (default: D * 100000).
    #[arg(long)]
    budget: Option<u64>,

    /// Success threshold on |f - f*| (default 1e-8).
    #[arg(long)]
    target_error: Option<f64>,

    /// Master seed (default 1).
    #[arg(long)]
    seed: Option<u64>,

    /// Worker threads; 0 = all cores.
    #[arg(long)]
    threads: Option<usize>,

    /// Output directory (also rooted by $GAODE_OUT when relative).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Oracle candidates per trial event (default 200).
    #[arg(long)]
    lambda: Option<usize>,

    /// Oracle preset: gaode00 | gaode04 | composite.
    #[arg(long)]
    preset: Option<String>,

    /// Oracle runs per variant in composite mode (default 1).
    #[arg(long)]
    repeats: Option<usize>,
}

impl CommonArgs {
    fn into_document(self) -> gaode::Result<ConfigDocument> {
        let mut doc = match &self.config {
            Some(path) => ConfigDocument::load(path)?,
            None => ConfigDocument::default(),
        };
        let exp = &mut doc.experiment;
        merge(&mut exp.method, self.method);
        merge(&mut exp.function, self.function);
        merge(&mut exp.dim, self.dim);
        merge(&mut exp.runs, self.runs);
        merge(&mut exp.population, self.population);
        merge(&mut exp.budget, self.budget);
        merge(&mut exp.target_error, self.target_error);
        merge(&mut exp.seed, self.seed);
        merge(&mut exp.threads, self.threads);
        merge(&mut exp.output, self.out);
        let oracle = &mut doc.oracle;
        merge(&mut oracle.lambda, self.lambda);
        merge(&mut oracle.preset, self.preset);
        merge(&mut oracle.repeats, self.repeats);
        Ok(doc)
    }
}

fn merge<T>(slot: &mut Option<T>, value: Option<T>) {
    if value.is_some() {
        *slot = value;
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn cmd_run(args: CommonArgs) -> gaode::Result<()> {
    let doc = args.into_document()?;
    let cfg = doc.resolve_experiment()?;
    let records = harness::run_experiment(&cfg)?;
    harness::write_experiment_outputs(&cfg, &records)?;

    let successes = records.iter().filter(|r| r.success).count();
    println!(
        "{} on {} D={}: {}/{} runs reached {:e}",
        cfg.method,
        cfg.function.token(),
        cfg.dim,
        successes,
        records.len(),
        cfg.target_error
    );
    match metrics::sp1(&records) {
        Some(v) => println!("sp1 = {v:.1}"),
        None => println!("sp1 = undefined (no successes)"),
    }
    println!("outputs: {}", cfg.output.display());
    Ok(())
}

fn cmd_sweep(args: CommonArgs) -> gaode::Result<()> {
    let doc = args.into_document()?;
    let root = doc.sweep_root();
    let cells = doc.resolve_sweep()?;
    let results = harness::run_sweep(&cells, &root)?;
    for cell in &results {
        let score = harness::cell_score(cell)
            .map(|v| format!("{v:.1}"))
            .unwrap_or_else(|| "-".into());
        println!(
            "{:>7} {:>14} D={:<3} score={score}",
            cell.cfg.method,
            cell.cfg.function.token(),
            cell.cfg.dim
        );
    }
    println!("outputs: {}", root.display());
    Ok(())
}
