use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qclab::config::{ConfigDraft, ExperimentConfig};
use qclab::HarnessError;

#[derive(Parser)]
#[command(
    name = "qclab",
    version,
    about = "Desk-scale simulation lab for state-based commitments and one-time signatures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one registered experiment and write its report.
    Run(Box<RunArgs>),
    /// List the registered experiments, generator families, and adversaries.
    List,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment name (see `qclab list`).
    #[arg(long)]
    experiment: Option<String>,

    /// Generator family: basis-embed | binary-phase | prg-embed.
    #[arg(long)]
    generator: Option<String>,

    /// Key length in bits.
    #[arg(long)]
    n: Option<usize>,

    /// Output width in qubits.
    #[arg(long)]
    m: Option<usize>,

    /// Copy count (owsg/haar-bound) or copy parameter T (sym-moment).
    #[arg(long)]
    t: Option<usize>,

    /// Monte-Carlo trials / sampled candidates.
    #[arg(long)]
    trials: Option<usize>,

    /// Base seed; every trial derives its own stream from it.
    #[arg(long)]
    seed: Option<u64>,

    /// Adversary strategy for the signature experiments.
    #[arg(long)]
    adversary: Option<String>,

    /// Fidelity threshold for the sdcid verdict.
    #[arg(long)]
    threshold: Option<f64>,

    /// Flat key=value config file; flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Report destination (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Report format: json | csv.
    #[arg(long)]
    format: Option<String>,
}

impl RunArgs {
    fn into_draft(self) -> ConfigDraft {
        ConfigDraft {
            experiment: self.experiment,
            generator: self.generator,
            n: self.n,
            m: self.m,
            t: self.t,
            trials: self.trials,
            seed: self.seed,
            adversary: self.adversary,
            threshold: self.threshold,
            out: self.out,
            format: self.format,
        }
    }
}

fn run_command(args: RunArgs) -> Result<bool, HarnessError> {
    let file_draft = match &args.config {
        None => ConfigDraft::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                HarnessError::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            ConfigDraft::from_file(&text)?
        }
    };
    let config = ExperimentConfig::from_draft(file_draft.overlaid(args.into_draft()))?;
    let report = qclab::run(&config)?;
    report.write_out()?;
    for v in &report.verdicts {
        eprintln!(
            "{}: {} ({})",
            v.name,
            if v.pass { "pass" } else { "FAIL" },
            v.detail
        );
    }
    Ok(report.all_pass())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            println!("experiments:");
            for e in qclab::ExperimentName::ALL {
                println!("  {e}");
            }
            println!("generators:");
            for f in generators::Family::ALL {
                println!("  {f}");
            }
            println!("adversaries:");
            for a in signatures::AdversaryKind::ALL {
                println!("  {a}");
            }
            ExitCode::SUCCESS
        }
        Command::Run(args) => match run_command(*args) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
    }
}
