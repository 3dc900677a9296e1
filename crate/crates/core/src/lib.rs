//! Individual-based health-system simulation.
//!
//! Disease modules generate demand for care; a resource-constrained supply
//! side delivers it through Leontief-gated appointments under one of three
//! constraint modes; delivered and undelivered care feed back into health
//! outcomes measured in DALYs.
//!
//! The usual entry points are [`config::ScenarioConfig::load`] followed by
//! [`config::ScenarioConfig::validate`] and [`engine::run`]. The
//! [`commands`] module wraps these into the batch operations behind the
//! `hss` binary.

pub mod burden;
pub mod commands;
pub mod config;
pub mod disease;
pub mod engine;
pub mod health_system;
pub mod ids;
pub mod minutes;
pub mod population;
pub mod production;
pub mod rng;
pub mod seeking;

pub use config::{Scenario, ScenarioConfig};
pub use engine::{run, RunResult, RunSummary, Simulation};
pub use production::Mode;
