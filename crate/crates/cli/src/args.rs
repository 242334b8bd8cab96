use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use idemfact::RingKind;

#[derive(Debug, Parser)]
#[command(name = "idemfact", version, about = "Idempotent factorization of singular matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factor a singular matrix into rank n-1 idempotents.
    Factor(FactorArgs),
    /// Analyze the rfix-preorder of a finite monoid.
    Analyze(AnalyzeArgs),
    /// Re-check a factorization file independently.
    Verify(VerifyArgs),
    /// Factor every matrix in a directory, or a seeded random sample.
    Batch(BatchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RingArg {
    Q,
    Fp,
    Zp,
}

impl From<RingArg> for RingKind {
    fn from(r: RingArg) -> Self {
        match r {
            RingArg::Q => RingKind::Q,
            RingArg::Fp => RingKind::Fp,
            RingArg::Zp => RingKind::Zp,
        }
    }
}

/// Overrides the ring recorded in the matrix file.
#[derive(Clone, Debug, Default, Args)]
pub struct RingArgs {
    #[arg(long, value_enum)]
    pub ring: Option<RingArg>,
    #[arg(long, requires = "ring")]
    pub p: Option<u64>,
}

#[derive(Debug, Args)]
pub struct FactorArgs {
    /// Matrix JSON file.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub ring: RingArgs,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Prime q for the monoid of singular matrices over F_q plus the identity.
    #[arg(long, requires = "size", conflicts_with = "cayley")]
    pub field: Option<u8>,
    #[arg(long, requires = "field")]
    pub size: Option<usize>,
    /// Cayley-table JSON file.
    #[arg(long, required_unless_present = "field")]
    pub cayley: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Factorization JSON file.
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    /// Directory of matrix JSON files, processed in file-name order.
    #[arg(long, conflicts_with = "generate", required_unless_present = "generate")]
    pub input: Option<PathBuf>,
    /// Number of random singular matrices to generate instead.
    #[arg(long)]
    pub generate: Option<usize>,
    /// Matrix size for generated input.
    #[arg(long, default_value_t = 3)]
    pub size: usize,
    #[command(flatten)]
    pub ring: RingArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}
