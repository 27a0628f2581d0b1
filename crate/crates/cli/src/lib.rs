//! Batch driver: certification sweeps, falsification scans, integral and
//! identity checks, and report emission.

pub mod config;
pub mod corollary;
pub mod falsify;
pub mod integrals;
pub mod markdown;
pub mod report;

pub use config::{Format, OmegaRange, RunConfig};
pub use report::{run_certify, verify_report, LemmaReport, Verdict};

/// Process exit codes.
pub mod exit {
    pub const CERTIFIED: i32 = 0;
    pub const FALSIFIED: i32 = 1;
    pub const INCONCLUSIVE: i32 = 2;
    pub const USAGE: i32 = 3;
}
