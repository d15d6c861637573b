//! Seeded instance generation, suite runs with CSV output, and the scripted
//! `f = 1/z` reproduction.

pub mod counterexample;
pub mod generate;
pub mod instance;
pub mod rng;
pub mod suite;

pub use counterexample::{counterexample, CounterexampleReport};
pub use generate::generate_instance;
pub use instance::{Instance, CHECKERS};
pub use suite::{run_suite, ExitStatus, SuiteConfig, SuiteOutcome};
