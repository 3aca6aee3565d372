//! Attentive monitoring of multiple streams as Bayesian foraging.
//!
//! The library simulates an observer that watches K concurrent streams,
//! pre-attentively scores each by the configurational complexity of its
//! interest points, commits its gaze to the most promising stream, forages
//! within it through Levy-flight gaze shifts and detection rewards, and
//! gives the stream up by an optimal Bayesian rule benchmarked against
//! Charnov, Deterministic and Random baselines on synthetic ground-truth
//! landscapes.

pub mod complexity;
pub mod engine;
pub mod error;
pub mod eval;
pub mod gaze;
pub mod grid;
pub mod manifest;
pub mod perception;
pub mod scenario;
pub mod strategy;

pub use engine::{run, ForagerConfig, Timeline};
pub use error::{Error, Result};
pub use eval::{compare_strategies, evaluate, EvalReport};
pub use scenario::{generate_scenario, load_scenario, save_scenario, Landscape, ScenarioConfig};
