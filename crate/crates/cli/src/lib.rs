//! Implementation of the `dirtymac` command line tool.
//!
//! Kept as a library so the acceptance tests can drive the same parameter
//! resolution, CSV writing and validation checks that the binary uses.

pub mod covgrid;
pub mod csvout;
pub mod numfmt;
pub mod params;
pub mod sweep;
pub mod validate;
