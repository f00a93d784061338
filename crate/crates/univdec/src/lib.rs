//! Universal decoding over families of decoding metrics.
//!
//! The crate builds random-coding priors, channels and metric families over
//! small discrete alphabets, computes pairwise error probabilities exactly
//! by rational enumeration (with Monte Carlo cross-checks), constructs the
//! minimum-pairwise-error universal decoder and its approximations, and
//! verifies the redundancy, domination and rate-function inequalities that
//! govern them.

pub mod config;
pub mod error;
pub mod model;
pub mod numeric;
pub mod pairwise;
pub mod ratefn;
pub mod report;
pub mod rngutil;
pub mod simulator;
pub mod universal;

pub use error::{Result, UnivdecError};
