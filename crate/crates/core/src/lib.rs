//! Adversarial bandits with graph feedback.
//!
//! The crate covers the graph side (observability, 1-degeneracy, fractional
//! and integral domination and packing numbers, rounding of packings into
//! 1-packing independent sets), the learner (online stochastic mirror
//! descent with negentropy and an LP-derived exploration distribution), the
//! loss environments used to stress it, and a small experiment harness that
//! fits regret growth on a log-log scale.

mod bitset;
pub mod degeneracy;
pub mod domination;
pub mod env;
pub mod error;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod osmd;
pub mod rng;
pub mod rounding;
pub mod simplex;

pub use error::{Error, Result};
pub use graph::{DirectedGraph, ObservabilityClass};
