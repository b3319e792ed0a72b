use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "locc-lab", version, about = "Information ledgers, LOCC protocols and restricted commutators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Information ledger of a bipartite state.
    Info,
    /// Extract one classical bit from a singlet, step by step.
    SingletDemo,
    /// Teleport Haar-random qubits and inspect what is left behind.
    TeleportDemo,
    /// Outcome statistics of entanglement concentration on n copies.
    Concentrate,
    /// Split concentration outcomes between singlets and classical bits.
    Tradeoff,
    /// Parity/phase commutators, global and local.
    Commutator,
    /// Certify the canonical form of commuting product observables.
    Prop1,
    /// Nine product states, their operators and the ping-pong protocol.
    Sausage,
    /// Every acceptance check in one report.
    Suite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Opts {
    /// singlet, psi_plus, phi_plus, phi_minus, product00, maxmix, schmidt(a2=X) or @file.json
    #[arg(long, global = true)]
    pub state: Option<String>,
    /// Number of copies.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Squared Schmidt coefficient a² of each copy.
    #[arg(long, global = true)]
    pub a2: Option<f64>,
    /// Comma-separated outcomes k routed to singlet extraction.
    #[arg(long, global = true, allow_hyphen_values = false)]
    pub kq: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true, env = "LOCC_LAB_SEED")]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// State label for the sausage protocol (e.g. psi7).
    #[arg(long, global = true)]
    pub input: Option<String>,
}
