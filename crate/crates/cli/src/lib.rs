//! Command-line front end for `cantorparam-core`.

pub mod cli;
pub mod json;
pub mod svg;

pub use cli::run;
