use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use levy_greeks::job::{run_and_emit, Command, JobSpec, OutputFormat, Overrides, ThetaSign};
use levy_greeks::weights::GammaVariant;

#[derive(Parser)]
#[command(name = "levy-greeks", version, about = "Monte Carlo prices and Malliavin Greeks under an exponential Lévy jump-diffusion")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Discounted expected payoff
    Price(Args),
    /// Malliavin-weight Greeks
    Greeks(Args),
    /// Malliavin Greeks next to common-random-number finite differences
    Compare(Args),
    /// Error against cost over an (n_paths, grid_steps) lattice
    Convergence(Args),
}

#[derive(clap::Args)]
struct Args {
    /// JSON job file
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    paths: Option<u64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Worker threads (never changes results)
    #[arg(long)]
    workers: Option<usize>,
    /// Write here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_enum)]
    gamma_variant: Option<Gamma>,
    #[arg(long, value_enum)]
    theta_sign: Option<Sign>,
    /// Fill wall_time_ms (output is then no longer reproducible)
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Gamma {
    Theorem,
    AppendixA,
    AppendixB,
    Derived,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sign {
    Negative,
    Positive,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Price(a) => (Command::Price, a),
        Cmd::Greeks(a) => (Command::Greeks, a),
        Cmd::Compare(a) => (Command::Compare, a),
        Cmd::Convergence(a) => (Command::Convergence, a),
    };
    let overrides = Overrides {
        seed: args.seed,
        n_paths: args.paths,
        grid_steps: args.steps,
        workers: args.workers,
        output_path: args.out,
        output: args.format.map(|f| match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }),
        gamma_variant: args.gamma_variant.map(|g| match g {
            Gamma::Theorem => GammaVariant::Theorem,
            Gamma::AppendixA => GammaVariant::AppendixA,
            Gamma::AppendixB => GammaVariant::AppendixB,
            Gamma::Derived => GammaVariant::Derived,
        }),
        theta_sign: args.theta_sign.map(|s| match s {
            Sign::Negative => ThetaSign::Negative,
            Sign::Positive => ThetaSign::Positive,
        }),
        record_timing: args.timing,
    };

    let result = JobSpec::from_path(&args.config).and_then(|mut spec| {
        overrides.apply(&mut spec);
        run_and_emit(command, &spec)
    });
    match result {
        Ok(Some(text)) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("levy-greeks: {e}");
            ExitCode::from(2)
        }
    }
}
