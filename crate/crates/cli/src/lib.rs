//! Command-line front end for `k3sys`: system literals, output records and
//! the `k3sys` command.

mod app;
pub mod literal;
pub mod record;

pub use app::{csv_writer, parse_window, run, Format, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};
pub use literal::{parse_literal, ParseError, ParseErrorKind, SystemLiteral};
pub use record::{CsvRecord, OutputRecord, CSV_HEADER};
