use std::collections::BTreeSet;

use super::MapState;
use crate::graph::{tau, NodeId, Port, WindowParams};
use crate::sim::{Agent, AgentAction, AgentError, Observation};

/// Greedy exploration without a neighbor view. Works in rounds; each round
/// forgets the deleted ports seen so far except at the current node.
#[derive(Clone, Debug)]
pub struct GreedyExp0 {
    map: MapState,
    c: u64,
    timer: u64,
    round: u64,
    last_port: Option<Port>,
}

impl GreedyExp0 {
    pub fn new(c: u64) -> Self {
        GreedyExp0 {
            map: MapState::new(),
            c: c.max(1),
            timer: 0,
            round: 0,
            last_port: None,
        }
    }

    pub fn map(&self) -> &MapState {
        &self.map
    }

    pub fn timer(&self) -> u64 {
        self.timer
    }

    /// `P_open(v)`: ports of a visited node whose edge was never traversed.
    pub fn open_ports(&self, v: NodeId) -> Vec<Port> {
        let known: BTreeSet<Port> = self.map.known_ports(v).collect();
        let degree = self.map.degree_of(v).unwrap_or(0);
        (1..=degree).filter(|p| !known.contains(p)).collect()
    }

    /// `V_target`, ascending.
    pub fn targets(&self) -> Vec<NodeId> {
        self.map
            .v_map()
            .iter()
            .copied()
            .filter(|&v| {
                self.open_ports(v)
                    .iter()
                    .any(|&p| !self.map.is_deleted(v, p))
            })
            .collect()
    }

    /// `(n', m')` as used for the round budget.
    pub fn estimates(&self) -> (usize, usize) {
        let n_est = self.map.v_map().len();
        let (e1, _) = self.map.map_edges();
        let open: usize = self
            .map
            .v_map()
            .iter()
            .map(|&v| self.open_ports(v).len())
            .sum();
        (n_est, e1.len() + open.div_ceil(2))
    }

    /// Length of the current round. The estimates are lifted into the domain
    /// of the window function (at least 3 nodes, at least as many edges).
    pub fn round_budget(&self) -> u64 {
        let (n_est, m_est) = self.estimates();
        let n = n_est.max(3);
        let m = m_est.max(n);
        tau(WindowParams { n, m, c: self.c }).expect("lifted estimates are in range")
    }
}

impl Agent for GreedyExp0 {
    fn name(&self) -> &'static str {
        "ge0"
    }

    fn act(&mut self, obs: &Observation) -> Result<AgentAction, AgentError> {
        let previous = self.map.current();
        if let (Some(prev), Some(p)) = (previous, self.last_port) {
            self.map.learn(prev, obs.node, p)?;
        }
        self.map.arrive(obs, previous, false)?;
        self.map.delete_unavailable(obs);

        if self.targets().is_empty() {
            return Ok(AgentAction::Terminate);
        }
        if self.timer >= self.round_budget() {
            self.map.reset_deleted(obs.node, obs.unavailable_ports());
            self.timer = 0;
            self.round += 1;
        }
        let cur = obs.node;
        let open_here: Vec<Port> = self
            .open_ports(cur)
            .into_iter()
            .filter(|&p| !self.map.is_deleted(cur, p))
            .collect();
        let port = match open_here.first() {
            Some(&p) => p,
            None => {
                let targets = self.targets();
                let (_, hop) =
                    self.map
                        .step_toward(&targets, false)
                        .ok_or(AgentError::NoReachableTarget {
                            t: obs.t,
                            node: cur,
                        })?;
                self.map
                    .lambda(cur, hop)
                    .expect("map edges carry a known port")
            }
        };
        self.timer += 1;
        self.last_port = Some(port);
        Ok(AgentAction::Move(port))
    }

    fn round_index(&self) -> Option<u64> {
        Some(self.round)
    }
}
