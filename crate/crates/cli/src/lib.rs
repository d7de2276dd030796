//! Study harness behind the `flexwave` binary: configuration layering,
//! sweep orchestration with CSV emission, and the verification suite.

pub mod config;
pub mod fmt;
pub mod study;
pub mod verify;

pub use study::{run_study, ConvergenceRecord, StudyOutcome, StudySpec, StudySummary, SweepAxis};
pub use verify::{verify, CheckResult, Report};
