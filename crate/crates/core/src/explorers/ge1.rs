use super::MapState;
use crate::graph::NodeId;
use crate::sim::{Agent, AgentAction, AgentError, Model, Observation};

/// Greedy exploration with a one-hop view: always heads for the closest
/// mapped-but-unvisited node.
#[derive(Clone, Debug, Default)]
pub struct GreedyExp1 {
    map: MapState,
}

impl GreedyExp1 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn map(&self) -> &MapState {
        &self.map
    }
}

/// The move rule on an already updated map.
pub(crate) fn decide(map: &MapState, t: u64) -> Result<AgentAction, AgentError> {
    if map.fully_visited() {
        return Ok(AgentAction::Terminate);
    }
    let cur = map
        .current()
        .expect("map has a current node after the first observation");
    let unvisited: Vec<NodeId> = map.v_map().difference(map.v_vis()).copied().collect();
    let (_, hop) = map
        .step_toward(&unvisited, true)
        .ok_or(AgentError::NoReachableTarget { t, node: cur })?;
    let port = map.lambda(cur, hop).expect("map edges carry a known port");
    Ok(AgentAction::Move(port))
}

impl Agent for GreedyExp1 {
    fn name(&self) -> &'static str {
        "ge1"
    }

    fn act(&mut self, obs: &Observation) -> Result<AgentAction, AgentError> {
        if obs.kt1_view.is_none() {
            return Err(AgentError::WrongModel(Model::Kt1));
        }
        let previous = self.map.current();
        self.map.arrive(obs, previous, true)?;
        self.map.delete_unavailable(obs);
        decide(&self.map, obs.t)
    }
}
