//! Scenario I/O, seeded instance generation, analysis reports, and the
//! verification suites behind the `wce` command-line tool.

pub mod generate;
pub mod report;
pub mod rng;
pub mod scenario;
pub mod suites;
