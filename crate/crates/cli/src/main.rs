//! Command-line driver: loads a manifest, runs one command, and emits a
//! human-readable section followed by a machine-readable JSON section
//! (or JSON only with `--machine`). Reports are byte-identical across runs
//! on the same inputs.

mod commands;
mod manifest;

use clap::{Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "mfnum", version, about = "Frobenius twists, perversity data and Morita Frobenius numbers of finite-dimensional algebras over finite fields")]
struct Cli {
    /// Manifest file describing the workspace.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Seed for seeded internals (module splitting words).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Node budget for isomorphism searches.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget: u64,
    /// Largest twist power tried by the Frobenius-number searches
    /// (default: the subfield bound).
    #[arg(long, global = true)]
    max_m: Option<u32>,
    /// Also write the full report to this path.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Emit only the machine-readable section.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// List the canonical simple modules of an algebra.
    Simples { algebra: String },
    /// Print the Cartan matrix.
    Cartan { algebra: String },
    /// Apply the Frobenius twist to the structure constants.
    Twist {
        algebra: String,
        #[arg(long)]
        t: u32,
    },
    /// Decompose into blocks.
    Blocks { algebra: String },
    /// Defect from the Cartan elementary divisors.
    Defect { algebra: String },
    /// Morita Frobenius number.
    MfNumber { algebra: String },
    /// Sigma-Morita Frobenius number.
    SigmaMfNumber { algebra: String },
    /// Least split subfield form bound.
    SubfieldBound { algebra: String },
    /// Check an equivalence against a perversity datum.
    CheckPerverse { equivalence: String, datum: String },
    /// Compose two perversity data.
    DatumCompose { first: String, second: String },
    /// Invert a perversity datum.
    DatumInvert { datum: String },
    /// Twist the labels of a perversity datum.
    DatumTwist {
        datum: String,
        #[arg(long)]
        t: u32,
    },
    /// Run the three transfer certificates.
    VerifyTransfer { equivalence: String, datum: String, witness: String },
    /// (|Out(P)|_{p'})^2 for a p-group.
    OutBound {
        group: String,
        #[arg(long)]
        p: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    let Some(path) = &cli.manifest else {
        eprintln!("error: --manifest <path> is required");
        return 2;
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return 2;
        }
    };
    let ws = match manifest::ingest(&text) {
        Ok(ws) => ws,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let flags = commands::Flags {
        seed: if cli.seed != 0 { cli.seed } else { ws.seed },
        budget: cli.budget,
        max_m: cli.max_m,
    };
    match commands::run(&ws, &cli.command, &flags) {
        Ok(report) => {
            let machine =
                serde_json::to_string_pretty(&report.machine).expect("reports serialize");
            let mut full = String::new();
            if !cli.machine {
                full.push_str(&report.human);
                full.push_str("-- machine --\n");
            }
            full.push_str(&machine);
            full.push('\n');
            print!("{full}");
            if let Some(rpath) = &cli.report {
                if let Err(e) = std::fs::write(rpath, &full) {
                    eprintln!("error: cannot write report {}: {e}", rpath.display());
                    return 2;
                }
            }
            report.exit
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                manifest::CliError::Core(mfnum::Error::IsoUndecided) => 3,
                other => other.exit_code(),
            }
        }
    }
}
