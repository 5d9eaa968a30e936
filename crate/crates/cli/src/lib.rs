//! HTTP service and command-line front end over `mates-core`.

pub mod api;
pub mod cli;

pub use api::{app, router, ApiError, ErrorCode};
pub use cli::{run, Cli, CliError};
