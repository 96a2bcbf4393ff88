//! Deterministic single-agent exploration of T-interval-connected dynamic
//! graphs.
//!
//! The crate is organised as
//! - [`graph`]: port-numbered graphs, schedules, the interval-connectivity
//!   oracle and the window functions;
//! - [`sim`]: the environment loop, traces and potential accounting;
//! - [`explorers`]: the greedy explorers and a left-hand baseline;
//! - [`adversaries`]: adaptive lower-bound constructions;
//! - [`generators`]: random interval-connected instances;
//! - [`experiments`]: batch runners behind the command-line tool.

pub mod adversaries;
pub mod experiments;
pub mod explorers;
pub mod generators;
pub mod graph;
pub mod sim;
