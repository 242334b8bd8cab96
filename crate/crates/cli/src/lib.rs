//! Command implementations behind the `idemfact` binary. Each command
//! returns a [`RunReport`]; the binary only prints it and exits with its
//! status.

pub mod args;
pub mod commands;
pub mod report;

pub use args::Cli;
pub use commands::{cmd_analyze, cmd_batch, cmd_factor, cmd_verify, run};
pub use report::{RunReport, Status};
