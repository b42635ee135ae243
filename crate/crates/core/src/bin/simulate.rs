use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use log::LevelFilter;

use qheat::cli::{self, exit, load_config, ExperimentConfig, Mode, OutputFormat, Overrides};
use qheat::thermo::Scenario;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    TwoQubit,
    Collision,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    TwoQubitSweep,
    Collision,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

/// Heat-flow simulations for correlated qubits.
#[derive(Debug, Parser)]
#[command(name = "simulate", version)]
struct Args {
    /// What to run; may also come from --mode or the config file.
    command: Option<Command>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// JSON config file; flags override its values.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_scenario)]
    scenario: Option<Scenario>,
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Worker threads for grid points and seeds.
    #[arg(long, value_name = "K")]
    jobs: Option<usize>,
    #[arg(long)]
    allow_out_of_window: bool,
    /// Comma-separated grid indices (two-qubit) or steps (collision).
    #[arg(long, value_name = "STEPS", value_delimiter = ',')]
    dump_density: Option<Vec<usize>>,
    /// Number of bath qubits.
    #[arg(long)]
    n_bath: Option<usize>,
    /// Collisions per run.
    #[arg(long)]
    steps: Option<usize>,
    /// Consecutive seeds to run, starting at --seed.
    #[arg(long)]
    seeds: Option<usize>,
    /// Correlation amplitude between the system and the first bath qubit.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Skip the α = 0 companion run.
    #[arg(long)]
    unpaired: bool,
    /// Write the resolved config to stdout and exit.
    #[arg(long)]
    print_config: bool,
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
    #[arg(short, long)]
    quiet: bool,
}

fn parse_scenario(s: &str) -> Result<Scenario, String> {
    s.parse().map_err(|e: qheat::Error| e.to_string())
}

fn resolve(args: &Args) -> Result<ExperimentConfig, String> {
    let from_command = args.command.map(|c| match c {
        Command::TwoQubit => Mode::TwoQubitSweep,
        Command::Collision => Mode::Collision,
    });
    let from_flag = args.mode.map(|m| match m {
        ModeArg::TwoQubitSweep => Mode::TwoQubitSweep,
        ModeArg::Collision => Mode::Collision,
    });
    if let (Some(a), Some(b)) = (from_command, from_flag) {
        if a != b {
            return Err(format!("subcommand selects {a:?} but --mode selects {b:?}"));
        }
    }
    let overrides = Overrides {
        mode: from_command.or(from_flag),
        scenario: args.scenario,
        seed: args.seed,
        output_dir: args.out.clone(),
        format: args.format.map(|f| match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }),
        allow_out_of_window: args.allow_out_of_window,
        dump_density: args.dump_density.clone(),
        n_bath: args.n_bath,
        steps: args.steps,
        seeds: args.seeds,
        alpha: args.alpha,
        unpaired: args.unpaired,
    };
    load_config(args.config.as_deref(), &overrides).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let level = match (args.quiet, args.verbose) {
        (true, _) => LevelFilter::Error,
        (false, 0) => LevelFilter::Warn,
        (false, 1) => LevelFilter::Info,
        _ => LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();

    let cfg = match resolve(&args) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(exit::USAGE as u8);
        }
    };
    if args.print_config {
        println!("{}", cfg.to_json());
        return ExitCode::SUCCESS;
    }

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(k) = args.jobs {
        pool = pool.num_threads(k.max(1));
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(exit::USAGE as u8);
        }
    };

    match pool.install(|| cli::run(&cfg)) {
        Ok(true) => {
            if !args.quiet {
                println!("ok: outputs in {}", cfg.output_dir.display());
            }
            ExitCode::from(exit::OK as u8)
        }
        Ok(false) => {
            eprintln!(
                "expectation failed; see {}",
                cfg.output_dir.join("run.json").display()
            );
            ExitCode::from(exit::EXPECTATION_FAILED as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::USAGE as u8)
        }
    }
}
