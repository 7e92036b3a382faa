use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod args;
mod commands;

use args::{ConeArgs, DyadicArgs, GenArgs, NormsArgs, PreimageArgs, SweepArgs};

/// Finite Blaschke products: zero-set generators, derivative norms, cone
/// functions and dyadic sums.
#[derive(Debug, Parser)]
#[command(name = "blaschke", version)]
struct Cli {
    /// Directory for outputs written without an explicit --output.
    #[arg(long, global = true, env = "BLASCHKE_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a zero list from a family recipe.
    Gen(GenArgs),
    /// Evaluate every functional of a zero list.
    Norms(NormsArgs),
    /// Dyadic tree dump, maximal families and dyadic sums.
    Dyadic(DyadicArgs),
    /// Scaling sweep over a one-parameter family, or ratio bands over a list of recipes.
    Sweep(SweepArgs),
    /// Preimages of a point and the depth sum over them.
    Preimage(PreimageArgs),
    /// Cone-function profile, level arcs and norm.
    Cone(ConeArgs),
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<blaschke::Error>() {
        return if e.is_numeric() { 3 } else { 2 };
    }
    if err.downcast_ref::<commands::NumericFailure>().is_some() {
        return 3;
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return 1;
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => commands::gen(&a, &cli.out_dir),
        Command::Norms(a) => commands::norms(&a, &cli.out_dir),
        Command::Dyadic(a) => commands::dyadic(&a, &cli.out_dir),
        Command::Sweep(a) => commands::sweep(&a, &cli.out_dir),
        Command::Preimage(a) => commands::preimage(&a, &cli.out_dir),
        Command::Cone(a) => commands::cone(&a, &cli.out_dir),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
