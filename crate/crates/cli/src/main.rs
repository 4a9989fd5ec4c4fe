mod cmd;
mod config;
mod error;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "qst",
    version,
    about = "Tomography of 2-local ground states from local measurements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample Hamiltonians and write ground-state measurement records
    Gen(cmd::gen::GenArgs),
    /// Train a network mapping measurements to Hamiltonian coefficients
    Train(cmd::train::TrainArgs),
    /// Score a trained model on a test dataset
    Eval(cmd::eval::EvalArgs),
    /// Reconstruct a single state from one measurement vector
    Predict(cmd::predict::PredictArgs),
    /// Train and score over a grid of dataset sizes, epochs and batch sizes
    Sweep(cmd::sweep::SweepArgs),
    /// Score a model on measurements with added Gaussian noise
    NoiseEval(cmd::noise::NoiseArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd::gen::run(a),
        Command::Train(a) => cmd::train::run(a),
        Command::Eval(a) => cmd::eval::run(a),
        Command::Predict(a) => cmd::predict::run(a),
        Command::Sweep(a) => cmd::sweep::run(a),
        Command::NoiseEval(a) => cmd::noise::run(a),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
