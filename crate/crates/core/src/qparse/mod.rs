//! Text and JSON front end: the quadric parser, input specs, and report documents.

pub mod input;
pub mod parser;
pub mod report;

pub use input::{Flags, Format, InputSpec, MatrixEntry, QuadricSource};
pub use parser::{format_quadric, parse_quadric, parse_scalar};
pub use report::{
    analyze, oracle_check, run, stratify, Analysis, Command, OracleDocument, Output,
    ProfileDocument, ReportDocument, Route, REPORT_VERSION,
};
