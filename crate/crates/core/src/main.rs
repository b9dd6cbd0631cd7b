use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use elastica_core::config::{Config, LiftMode};
use elastica_core::Error;

mod cli;

#[derive(Parser)]
#[command(name = "elastica", version, about = "Elastic metamorphosis distances and geodesics between curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct MatchArgs {
    /// First curve (CSV, one point per line)
    a: PathBuf,
    /// Second curve
    b: PathBuf,
    /// Weight between stretching and bending; needs 2 sigma >= 1
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Arc-length samples per curve
    #[arg(long, default_value_t = 256)]
    grid: usize,
    /// Largest lattice step of the DP
    #[arg(long, default_value_t = 4)]
    kmax: usize,
    /// Minimize over rotations of the first curve
    #[arg(long)]
    rotation: bool,
    /// Minimize over the starting point of the first curve (closed curves)
    #[arg(long)]
    offset: bool,
    /// Inputs are sampled real functions, compared modulo reparametrization
    #[arg(long)]
    one_dim: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the distance and optimal matching as JSON
    Dist(MatchArgs),
    /// Write the frames of the optimal path between two curves
    Geodesic {
        #[command(flatten)]
        args: MatchArgs,
        /// Number of time intervals
        #[arg(long, default_value_t = 16)]
        time_steps: usize,
        #[arg(long, value_enum, default_value_t = LiftMode::Measurable)]
        lift: LiftMode,
        /// Close the intermediate curves for display
        #[arg(long)]
        close_frames: bool,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the cost field and the optimal reparametrization
    Match {
        #[command(flatten)]
        args: MatchArgs,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
    /// Grassmann distance between two closed planar curves
    Grassmann {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        /// Minimize over the starting point of the first curve
        #[arg(long)]
        offset: bool,
    },
    /// Close a planar curve by the closing projection of its tangents
    Close {
        a: PathBuf,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        /// Output file; standard output if omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn config_from(args: &MatchArgs) -> Config {
    Config {
        sigma: args.sigma,
        n: args.grid,
        k_max: args.kmax,
        rotation: args.rotation,
        offset: args.offset,
        ..Config::default()
    }
}

fn set_threads() -> Result<(), Error> {
    let Ok(value) = std::env::var("ELASTICA_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::BadConfig(format!("ELASTICA_THREADS must be a positive integer, got {value:?}")))?;
    // Fails only if a pool already exists, which cannot happen this early.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn run(cli: Cli) -> Result<String, Error> {
    set_threads()?;
    match cli.command {
        Command::Dist(args) => cli::dist(&args.a, &args.b, args.one_dim, &config_from(&args)),
        Command::Geodesic {
            args,
            time_steps,
            lift,
            close_frames,
            out,
        } => {
            let config = Config {
                time_steps,
                lift_mode: lift,
                close_frames,
                ..config_from(&args)
            };
            cli::geodesic(&args.a, &args.b, args.one_dim, &config, &out)
        }
        Command::Match { args, out } => cli::matching(&args.a, &args.b, args.one_dim, &config_from(&args), &out),
        Command::Grassmann { a, b, grid, offset } => {
            let config = Config {
                n: grid,
                offset,
                ..Config::default()
            };
            cli::grassmann(&a, &b, &config)
        }
        Command::Close { a, grid, out } => {
            let config = Config {
                n: grid,
                ..Config::default()
            };
            cli::close(&a, &config, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(stdout) => {
            print!("{stdout}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
