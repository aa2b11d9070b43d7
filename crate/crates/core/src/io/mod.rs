//! Readers and writers for the two input formats.

mod qdimacs;
mod text;

use serde::{Deserialize, Serialize};

pub use qdimacs::{parse_qdimacs, print_qdimacs};
pub use text::{parse_qbf_bytes, parse_qbf_text, print_formula, print_qbf};

use crate::error::{ParseError, Result};
use crate::qbf::PrenexQbf;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Qdimacs,
}

pub fn parse(input: &str, format: Format) -> std::result::Result<PrenexQbf, ParseError> {
    match format {
        Format::Text => parse_qbf_text(input),
        Format::Qdimacs => parse_qdimacs(input),
    }
}

pub fn print(q: &PrenexQbf, format: Format) -> Result<String> {
    match format {
        Format::Text => Ok(print_qbf(q)),
        Format::Qdimacs => print_qdimacs(q),
    }
}
