//! Experiment suites over the `hypenergy-core` library, with CSV and JSON
//! output.

pub mod coverage;
pub mod rows;
pub mod setspec;
pub mod suites;

pub use rows::{write_csv, write_json, ExperimentRow, Labels};
pub use setspec::{parse_set_spec, SetSpec};
pub use suites::{run_suite, HarnessError, SuiteConfig, DEFAULT_GRID, SUITES};
