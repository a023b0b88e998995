//! Command-line front end for `liehopf-core`: presentation files,
//! expressions, report rendering and command dispatch.

pub mod cli;
pub mod expr;
pub mod format;
pub mod report;

pub use expr::{eval_str, parse_expression, Expr, ExprError};
pub use format::{load_presentation, parse_presentation, write_presentation, PresentationFile};

/// Exit statuses shared by every subcommand.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const UNSUPPORTED: i32 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("expression: {0}")]
    Expr(#[from] ExprError),
    #[error("{0}")]
    Unsupported(String),
}

impl From<liehopf_core::Error> for CliError {
    fn from(e: liehopf_core::Error) -> Self {
        match e {
            liehopf_core::Error::UnsupportedMode(m) => CliError::Unsupported(format!("unsupported mode: {m}")),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Expr(_) => exit::INPUT,
            CliError::Unsupported(_) => exit::UNSUPPORTED,
        }
    }
}
