//! Instance files, record streams and the `sknap` command line.

mod cli;
mod format;
pub mod records;

pub use cli::{run_cli, EXIT_OK, EXIT_UNEXPECTED_VERDICT, EXIT_USAGE, EXIT_VIOLATION};
pub use format::{parse_document, parse_instance, serialize, serialize_instance, serialize_kqus};
