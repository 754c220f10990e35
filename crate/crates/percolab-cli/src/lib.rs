//! Library side of the CLI: canonical output formatting and the pinned
//! claim-report suites. The binary in `main.rs` is a thin dispatcher over
//! these.

pub mod output;
pub mod suites;
