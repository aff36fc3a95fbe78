//! Command-line front end: an expression language for sets and models, and
//! the `spectra` verbs.

pub mod lexer;
pub mod parser;
pub mod run;

pub use parser::{parse_expression, parse_program, ErrorKind, ParseError, Sort, Value};
pub use run::{run, run_args, Cli, Outcome};
