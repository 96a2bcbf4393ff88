use serde::{Deserialize, Serialize};

use super::{AgentAction, Instrumentation, Model, Observation};
use crate::graph::{FixedSchedule, NodeId, Port};

/// One observed time step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub observation: Observation,
    /// `None` when the agent failed at this step.
    pub action: Option<AgentAction>,
    pub new_visit: bool,
    pub round: Option<u64>,
}

impl StepRecord {
    pub fn t(&self) -> u64 {
        self.observation.t
    }

    pub fn node(&self) -> NodeId {
        self.observation.node
    }

    pub fn moved_port(&self) -> Option<Port> {
        match self.action {
            Some(AgentAction::Move(p)) => Some(p),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Terminated,
    StepLimit,
    /// The agent reported an internal error (e.g. an empty map frontier).
    AgentFailed(String),
}

/// Complete record of one run.
#[derive(Clone, Debug)]
pub struct Trace {
    pub agent: String,
    pub model: Model,
    pub start: NodeId,
    pub steps: Vec<StepRecord>,
    /// `ν(0), ..., ν(moves)`.
    pub positions: Vec<NodeId>,
    /// First-visit order.
    pub visited: Vec<NodeId>,
    pub outcome: Outcome,
    /// Edge presence as committed during the run, with the final port binding.
    pub realized: FixedSchedule,
    pub instrumentation: Option<Instrumentation>,
}

/// JSONL step line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepLine {
    pub t: u64,
    pub node: usize,
    pub port: Option<Port>,
    pub avail: Vec<Port>,
    pub new_visit: bool,
}

/// JSONL summary line, last in the file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummaryLine {
    pub terminated: bool,
    pub steps: u64,
    pub visited: u64,
    pub sum_iota_v: i64,
    pub sum_iota_e: i64,
}

impl Trace {
    pub fn terminated(&self) -> bool {
        self.outcome == Outcome::Terminated
    }

    /// Number of moves made, i.e. the termination time for terminated runs.
    pub fn moves(&self) -> u64 {
        (self.positions.len() - 1) as u64
    }

    pub fn final_node(&self) -> NodeId {
        *self.positions.last().expect("positions are never empty")
    }

    /// Time of the first visit to `v`, if any.
    pub fn first_visit(&self, v: NodeId) -> Option<u64> {
        self.positions
            .iter()
            .position(|&x| x == v)
            .map(|i| i as u64)
    }

    /// Earliest first visit among `nodes`.
    pub fn first_visit_any(&self, nodes: &[NodeId]) -> Option<u64> {
        nodes.iter().filter_map(|&v| self.first_visit(v)).min()
    }

    /// Whether every node of the underlying graph was visited.
    pub fn explored_all(&self) -> bool {
        self.visited.len() == self.realized.graph().n()
    }

    /// Times at which a new round began.
    pub fn round_markers(&self) -> Vec<u64> {
        let mut markers = Vec::new();
        let mut last = None;
        for s in &self.steps {
            if s.round.is_some() && s.round != last {
                markers.push(s.t());
                last = s.round;
            }
        }
        markers
    }

    pub fn step_lines(&self) -> Vec<StepLine> {
        self.steps
            .iter()
            .map(|s| StepLine {
                t: s.t(),
                node: s.node().0,
                port: s.moved_port(),
                avail: s.observation.available_ports.clone(),
                new_visit: s.new_visit,
            })
            .collect()
    }

    pub fn summary_line(&self) -> SummaryLine {
        let (iv, ie) = self
            .instrumentation
            .as_ref()
            .map_or((0, 0), |i| (i.sum_iota_v(), i.sum_iota_e()));
        SummaryLine {
            terminated: self.terminated(),
            steps: self.moves(),
            visited: self.visited.len() as u64,
            sum_iota_v: iv,
            sum_iota_e: ie,
        }
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for line in self.step_lines() {
            out.push_str(&serde_json::to_string(&line).expect("serializable"));
            out.push('\n');
        }
        out.push_str(&serde_json::to_string(&self.summary_line()).expect("serializable"));
        out.push('\n');
        out
    }
}
