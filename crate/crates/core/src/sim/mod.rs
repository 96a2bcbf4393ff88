//! The environment loop: the schedule commits the edge set of each step, the
//! agent observes its surroundings and answers with a port or terminates.

mod potential;
mod trace;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeId, FixedSchedule, NodeId, Port, PortGraph};

pub use potential::{instrument_potential, Instrumentation, PotentialError};
pub use trace::{Outcome, StepLine, StepRecord, SummaryLine, Trace};

/// Visibility model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Own id, degree, available ports and incoming port.
    Kt0,
    /// KT0 plus the ids and ports of currently adjacent neighbors.
    Kt1,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Kt0 => "kt0",
            Model::Kt1 => "kt1",
        })
    }
}

/// What the agent sees at one time step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observation {
    pub t: u64,
    pub node: NodeId,
    pub degree: usize,
    /// `P(node, t)`, ascending.
    pub available_ports: Vec<Port>,
    /// `p_in(t)`; `None` at `t = 0`.
    pub incoming_port: Option<Port>,
    /// Present neighbors with their port at `node`, ascending by port. Only
    /// populated under KT1.
    pub kt1_view: Option<Vec<(NodeId, Port)>>,
}

impl Observation {
    pub fn is_available(&self, p: Port) -> bool {
        self.available_ports.binary_search(&p).is_ok()
    }

    /// `[1..degree] \ available`, ascending.
    pub fn unavailable_ports(&self) -> Vec<Port> {
        (1..=self.degree)
            .filter(|&p| !self.is_available(p))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AgentAction {
    Move(Port),
    Terminate,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AgentError {
    #[error("agent requires a {0} observation")]
    WrongModel(Model),
    #[error("no target reachable in the agent's map at t={t} from node {node}")]
    NoReachableTarget { t: u64, node: NodeId },
    #[error("inconsistent observation: {0}")]
    Inconsistent(String),
}

/// A deterministic exploring agent. The first observation it receives is the
/// one at `t = 0`.
pub trait Agent: Send {
    fn name(&self) -> &'static str;

    fn act(&mut self, obs: &Observation) -> Result<AgentAction, AgentError>;

    /// Current round for agents that work in rounds.
    fn round_index(&self) -> Option<u64> {
        None
    }

    /// Called once before `t = 0` when the run reveals the full underlying
    /// graph (ports included) to the agent.
    fn reveal_graph(&mut self, _graph: &PortGraph) {}
}

/// The run so far as seen by an adaptive schedule.
#[derive(Clone, Copy, Debug)]
pub struct History<'a> {
    /// `ν(0), ..., ν(t)`.
    pub positions: &'a [NodeId],
}

impl History<'_> {
    pub fn current(&self) -> NodeId {
        *self.positions.last().expect("history is never empty")
    }
}

/// Anything that decides edge presence (and, for lazily bound adversaries,
/// ports) while a run is in progress.
pub trait Environment: Send {
    fn graph(&self) -> &PortGraph;

    fn supports(&self, _model: Model) -> bool {
        true
    }

    /// Fixes `E(t)` as a presence flag per edge. Called exactly once per step,
    /// before the agent observes.
    fn commit(&mut self, t: u64, history: &History<'_>) -> Vec<bool>;

    /// `P(v, t)` for the committed presence flags.
    fn available_ports(&mut self, v: NodeId, present: &[bool]) -> Vec<Port> {
        let g = self.graph();
        let mut ports: Vec<Port> = g
            .incident(v)
            .iter()
            .filter(|(_, e)| present[e.0])
            .map(|&(_, e)| g.edge(e).port_at(v))
            .collect();
        ports.sort_unstable();
        ports
    }

    /// `λ_v` of the edge `e`.
    fn port_of(&mut self, v: NodeId, e: EdgeId) -> Port {
        self.graph().edge(e).port_at(v)
    }

    /// `N(v, p)` with the traversed edge.
    fn follow(&mut self, v: NodeId, p: Port) -> Option<(NodeId, EdgeId)> {
        self.graph().neighbor(v, p)
    }

    /// The port assignment as it stands after the run.
    fn realized_graph(&self) -> PortGraph {
        self.graph().clone()
    }
}

impl Environment for FixedSchedule {
    fn graph(&self) -> &PortGraph {
        FixedSchedule::graph(self)
    }

    fn commit(&mut self, t: u64, _history: &History<'_>) -> Vec<bool> {
        self.present_at(t)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("start node {0} is not in the graph")]
    BadStart(NodeId),
    #[error("schedule does not support the {0} model")]
    UnsupportedModel(Model),
    #[error("protocol violation at t={t}: {agent} chose port {port} at node {node}, available {available:?}")]
    ProtocolViolation {
        t: u64,
        agent: &'static str,
        node: NodeId,
        port: Port,
        available: Vec<Port>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub model: Model,
    /// Maximum number of observed time steps.
    pub max_steps: u64,
    pub reveal_graph: bool,
}

impl RunConfig {
    pub fn new(model: Model, max_steps: u64) -> Self {
        RunConfig {
            model,
            max_steps,
            reveal_graph: false,
        }
    }
}

/// Builds the observation at `current`, given the committed presence flags.
pub fn build_observation(
    env: &mut dyn Environment,
    t: u64,
    present: &[bool],
    current: NodeId,
    previous: Option<NodeId>,
    model: Model,
) -> Observation {
    let degree = env.graph().degree(current);
    let available_ports = env.available_ports(current, present);
    let incoming_port = previous.map(|prev| {
        let e = env
            .graph()
            .edge_between(current, prev)
            .expect("consecutive positions are adjacent");
        env.port_of(current, e)
    });
    let kt1_view = match model {
        Model::Kt0 => None,
        Model::Kt1 => {
            let present_incident: Vec<(NodeId, EdgeId)> = env
                .graph()
                .incident(current)
                .iter()
                .copied()
                .filter(|(_, e)| present[e.0])
                .collect();
            let mut view: Vec<(NodeId, Port)> = present_incident
                .into_iter()
                .map(|(u, e)| (u, env.port_of(current, e)))
                .collect();
            view.sort_unstable_by_key(|&(_, p)| p);
            Some(view)
        }
    };
    Observation {
        t,
        node: current,
        degree,
        available_ports,
        incoming_port,
        kt1_view,
    }
}

/// Runs `agent` from `start` until it terminates, fails, or `max_steps`
/// observations have been made.
pub fn run(
    env: &mut dyn Environment,
    agent: &mut dyn Agent,
    start: NodeId,
    config: &RunConfig,
) -> Result<Trace, SimError> {
    let n = env.graph().n();
    if start.0 >= n {
        return Err(SimError::BadStart(start));
    }
    if !env.supports(config.model) {
        return Err(SimError::UnsupportedModel(config.model));
    }
    if config.reveal_graph {
        agent.reveal_graph(env.graph());
    }
    let mut positions = vec![start];
    let mut seen = vec![false; n];
    seen[start.0] = true;
    let mut visited = vec![start];
    let mut observed = vec![false; n];
    let mut rows: Vec<Vec<bool>> = Vec::new();
    let mut steps = Vec::new();
    let mut outcome = Outcome::StepLimit;

    for t in 0..config.max_steps {
        let current = *positions.last().expect("non-empty");
        let previous = (positions.len() >= 2).then(|| positions[positions.len() - 2]);
        let present = env.commit(
            t,
            &History {
                positions: &positions,
            },
        );
        debug_assert_eq!(present.len(), env.graph().m());
        let obs = build_observation(env, t, &present, current, previous, config.model);
        rows.push(present);
        let new_visit = !observed[current.0];
        observed[current.0] = true;
        let action = match agent.act(&obs) {
            Ok(a) => a,
            Err(err) => {
                steps.push(StepRecord {
                    observation: obs,
                    action: None,
                    new_visit,
                    round: agent.round_index(),
                });
                outcome = Outcome::AgentFailed(err.to_string());
                break;
            }
        };
        let round = agent.round_index();
        match action {
            AgentAction::Terminate => {
                steps.push(StepRecord {
                    observation: obs,
                    action: Some(action),
                    new_visit,
                    round,
                });
                outcome = Outcome::Terminated;
                break;
            }
            AgentAction::Move(p) => {
                if !obs.is_available(p) {
                    return Err(SimError::ProtocolViolation {
                        t,
                        agent: agent.name(),
                        node: current,
                        port: p,
                        available: obs.available_ports,
                    });
                }
                let (next, _) = env
                    .follow(current, p)
                    .expect("available ports always resolve to a neighbor");
                steps.push(StepRecord {
                    observation: obs,
                    action: Some(action),
                    new_visit,
                    round,
                });
                positions.push(next);
                if !seen[next.0] {
                    seen[next.0] = true;
                    visited.push(next);
                }
            }
        }
    }

    let realized = FixedSchedule::from_presence(env.realized_graph(), &rows);
    Ok(Trace {
        agent: agent.name().to_string(),
        model: config.model,
        start,
        steps,
        positions,
        visited,
        outcome,
        realized,
        instrumentation: None,
    })
}
