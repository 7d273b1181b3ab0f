//! `powerops`: run the library's checks from the command line.
//!
//! Exit codes: 0 when every executed check passed, 1 when some check
//! failed, 2 on usage or input errors.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::Format;

#[derive(Parser)]
#[command(name = "powerops", version, about = "Partition complexes, uniform complexes, bar complexes and linearization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Reduced homology of P̄_m and of P̄_m^A for each transitive abelian A.
    PartitionHomology,
    /// Build and verify the k-contraction of NQ̃(Ū) for m = p^k.
    UniformContract,
    /// Validate a graded ring and decide Koszulness up to --m-max.
    KoszulCheck,
    /// Unique completions, pushout filtration and jump properties of U_{p^k}.
    ShellingVerify,
    /// Linearize a functor, its cross-effect sequence and the chain rule.
    LinearizeDemo,
    /// Counts: partitions, complete filtrations, transitive abelian classes.
    Enumerate,
    /// Compare ⋃_A U^A with the union over elementary abelian A.
    ExperimentElementaryUnion,
    /// Run the full acceptance suite.
    Report,
}

#[derive(Args, Clone, Debug, Default)]
pub struct Opts {
    #[arg(long, global = true)]
    pub p: Option<usize>,
    /// Exponent of m = p^k; for linearize-demo, the field is F_{p^k}.
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Number of points; for linearize-demo, the dimension of X.
    #[arg(long, global = true)]
    pub m: Option<usize>,
    #[arg(long = "m-max", global = true)]
    pub m_max: Option<usize>,
    /// Sum functor (free, orbit, transitive, transab-fixed, fixed:<gens>) or,
    /// for linearize-demo, a functor such as sym2 or tensor2∘sym2.
    #[arg(long, global = true)]
    pub functor: Option<String>,
    /// Ring file, or the name of a bundled ring.
    #[arg(long, global = true)]
    pub ring: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "markdown")]
    pub format: Format,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Lift the m ≤ 9 guard (also raises POWEROPS_MAX_PARTITION_M to 12).
    #[arg(long = "unsafe-large", global = true)]
    pub unsafe_large: bool,
    /// Restrict partition-homology to one abelian type, e.g. 2x2.
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Use F_p coefficients in uniform-contract.
    #[arg(long, global = true)]
    pub field: bool,
    /// uniform-contract: also run the transfer to NQ̃(P̄_m).
    #[arg(long, global = true)]
    pub transfer: bool,
    /// uniform-contract: write the contraction as JSON to this path.
    #[arg(long, global = true)]
    pub contraction: Option<PathBuf>,
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let o = &cli.opts;
    let rep = match cli.command {
        Command::PartitionHomology => commands::partition_homology_cmd(o)?,
        Command::UniformContract => commands::uniform_contract_cmd(o)?,
        Command::KoszulCheck => commands::koszul_check_cmd(o)?,
        Command::ShellingVerify => commands::shelling_verify_cmd(o)?,
        Command::LinearizeDemo => commands::linearize_demo_cmd(o)?,
        Command::Enumerate => commands::enumerate_cmd(o)?,
        Command::ExperimentElementaryUnion => commands::elementary_union_cmd(o)?,
        Command::Report => commands::report_cmd(o)?,
    };
    let text = rep.render(o.format)?;
    match &o.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(rep.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
