//! Spec files, report rendering and the command line.

pub mod polyparse;
pub mod render;
pub mod run;
pub mod specfile;

pub use polyparse::{parse_cochain, parse_poly, ParseError};
pub use run::{run, run_with};
pub use specfile::{parse_spec, render_spec, SpecDocument};
