use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sentinel::config::read_config;
use sentinel::graph_file::read_graph;
use sentinel::legacy::import_legacy_trace;
use sentinel::output::{emit_outputs, format_centrality};
use sentinel::trace_csv::write_trace_file;
use sentinel::Result;
use sentinel_core::centrality::{compute, Measure};
use sentinel_core::experiment::run_experiment_with;

/// Central-node anomaly detection experiments on simulated mesh networks.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a replicated experiment and write its result files.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides `replications` from the config file.
        #[arg(long)]
        replications: Option<usize>,
        /// Overrides `rng_seed` from the config file.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Score the nodes of a graph file and print `node,measure,score,rank`.
    Centrality {
        #[arg(long)]
        graph: PathBuf,
        /// information_exact, information_pathsum, closeness, betweenness, eigenvector or degree
        #[arg(long)]
        measure: String,
    },
    /// Convert a legacy text trace to the native trace CSV.
    Import {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Run { config, out, replications, seed } => {
            let mut config = read_config(&config)?;
            if let Some(r) = replications {
                config.replications = r;
            }
            if let Some(s) = seed {
                config.rng_seed = s;
            }
            config.validate()?;
            let total = config.replications;
            let summary = run_experiment_with(&config, |r, result| match result {
                Ok(_) => eprintln!("replication {}/{total} done", r + 1),
                Err(f) => eprintln!("replication {}/{total} failed: {}", r + 1, f.error),
            })?;
            emit_outputs(&summary, &out)
        }
        Command::Centrality { graph, measure } => {
            let measure: Measure = measure.parse()?;
            let g = read_graph(&graph)?;
            print!("{}", format_centrality(&[compute(&g, measure)?]));
            Ok(())
        }
        Command::Import { trace, out } => {
            let imported = import_legacy_trace(&trace)?;
            if imported.skipped > 0 {
                eprintln!("skipped {} of {} lines", imported.skipped, imported.lines);
            }
            if imported.unsent > 0 {
                eprintln!("warning: {} records belong to packets with no send record", imported.unsent);
            }
            write_trace_file(&out, &imported.records)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
