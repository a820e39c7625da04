use clap::{Parser, Subcommand};

use lesc_cli::commands::{bounds, decode_answers, exact, make_queries, simulate};

/// Query-efficient label recovery: bound tabulation, Monte Carlo sweeps,
/// and the dataset -> queries -> answers -> labels pipeline.
#[derive(Parser)]
#[command(name = "lesc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate bound curves to CSV
    Bounds(bounds::BoundsArgs),
    /// Run a config-file experiment (single run, sweep, or survey)
    Simulate(simulate::SimulateArgs),
    /// Closed-form threshold-decoder error over a degree grid
    Exact(exact::ExactArgs),
    /// Build a query sheet and manifest from a dataset
    MakeQueries(make_queries::MakeQueriesArgs),
    /// Decode collected answers back into labels
    DecodeAnswers(decode_answers::DecodeAnswersArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Bounds(args) => bounds::run(args).map(|written| {
            for path in written {
                println!("wrote {}", path.display());
            }
        }),
        Command::Simulate(args) => simulate::run(args),
        Command::Exact(args) => exact::run(args),
        Command::MakeQueries(args) => make_queries::run(args),
        Command::DecodeAnswers(args) => decode_answers::run(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
