//! Exploring agents and trace statistics about them.

mod ge0;
mod ge1;
mod map;

use std::collections::HashSet;

pub use ge0::GreedyExp0;
pub use ge1::GreedyExp1;
pub use map::MapState;

pub(crate) use ge1::decide as ge1_decide;

use crate::graph::Port;
use crate::sim::{Agent, AgentAction, AgentError, Observation, Trace};

/// Baseline that leaves through the first available port after the one it
/// arrived on, cyclically. It never terminates while a port is available.
#[derive(Clone, Debug, Default)]
pub struct LeftHandAgent;

impl LeftHandAgent {
    pub fn new() -> Self {
        LeftHandAgent
    }
}

impl Agent for LeftHandAgent {
    fn name(&self) -> &'static str {
        "left-hand"
    }

    fn act(&mut self, obs: &Observation) -> Result<AgentAction, AgentError> {
        let Some(&first) = obs.available_ports.first() else {
            return Ok(AgentAction::Terminate);
        };
        let port: Port = match obs.incoming_port {
            None => first,
            Some(p_in) => obs
                .available_ports
                .iter()
                .copied()
                .find(|&p| p > p_in)
                .unwrap_or(first),
        };
        Ok(AgentAction::Move(port))
    }
}

/// Moves over a never-used edge into a node that was already visited.
pub fn redundant_move_count(trace: &Trace) -> u64 {
    let mut used = HashSet::new();
    let mut visited = HashSet::new();
    visited.insert(trace.start);
    let mut count = 0;
    for pair in trace.positions.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let key = (a.min(b), a.max(b));
        if used.insert(key) && visited.contains(&b) {
            count += 1;
        }
        visited.insert(b);
    }
    count
}
