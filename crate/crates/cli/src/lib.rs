//! Library side of the `kahlerq` command: expression parsing, JSON documents
//! and the verification suite.

pub mod config;
pub mod expr;
pub mod suite;

pub use config::{Config, ConfigError, Report};
pub use expr::{parse, print, ExprError};
pub use suite::run_suite;
