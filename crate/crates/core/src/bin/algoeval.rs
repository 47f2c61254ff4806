use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use algoeval::catalog::manifest_jsonl;
use algoeval::runner::{self, EvaluateOptions, RunConfig};

#[derive(Parser)]
#[command(name = "algoeval", version, about = "Complexity-stratified ID/OOD evaluation of algorithmic reasoning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Run config (TOML).
    #[arg(long, short)]
    config: PathBuf,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Use desk-scale sizes (500 harvested examples, 32 per split).
    #[arg(long)]
    desk_scale: bool,
    /// Restrict the run to one subject.
    #[arg(long)]
    subject: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Harvest generations and write ID/OOD splits.
    Synthesize(RunArgs),
    /// Prompt subjects on every split instance and record graded answers.
    Evaluate {
        #[command(flatten)]
        run: RunArgs,
        /// Stop after this many new records.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Compute level scores and critical complexity.
    Score(RunArgs),
    /// Infer probe-task complexity from anchor curves.
    Probe(RunArgs),
    /// Run every stage and write a summary.
    ReportAll(RunArgs),
    /// Print the task catalog as JSON lines.
    Tasks,
}

fn load(args: &RunArgs) -> algoeval::Result<RunConfig> {
    let mut cfg = RunConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if args.desk_scale {
        cfg.desk_scale = true;
    }
    if let Some(id) = &args.subject {
        cfg.select_subject(id)?;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> algoeval::Result<()> {
    match cli.command {
        Command::Synthesize(a) => {
            let files = runner::cmd_synthesize(&load(&a)?)?;
            println!("{} split files ready", files.len());
        }
        Command::Evaluate { run, limit } => {
            let n = runner::cmd_evaluate(&load(&run)?, EvaluateOptions { max_new_records: limit })?;
            println!("{n} records appended");
        }
        Command::Score(a) => {
            let cfg = load(&a)?;
            let reports = runner::cmd_score(&cfg)?;
            print!("{}", algoeval::metrics::scores_csv(&reports)?);
        }
        Command::Probe(a) => {
            let rows = runner::cmd_probe(&load(&a)?)?;
            print!("{}", algoeval::metrics::probe_csv(&rows)?);
        }
        Command::ReportAll(a) => {
            let s = runner::report_all(&load(&a)?)?;
            print!("{}", algoeval::metrics::summary_text(&s.reports, &s.probes));
        }
        Command::Tasks => print!("{}", manifest_jsonl()),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
