//! Engagement analytics: salvo and duel kill probabilities, collision-course
//! intercept geometry, Gaussian range-advantage models with a seeded Monte
//! Carlo oracle, pure-pursuit replay, radar timing and sensor-cue fusion.

pub mod advantage;
pub mod calculus;
pub mod cli;
pub mod detection;
pub mod error;
pub mod geometry;
pub mod normal;
pub mod oracle;
pub mod pursuit;
pub mod radar;

pub use error::{EngageError, Result};
