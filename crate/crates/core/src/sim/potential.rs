//! Potential accounting for one-hop greedy runs.
//!
//! The run is replayed with each time step split in two: the agent arrives
//! (visited set, mapped nodes and ports grow), then the ports unavailable at
//! the new position are deleted one map edge at a time in ascending edge id
//! order. Changes of `d_cur` in the first half are charged to the node on its
//! first visit and changes in the second half to the eliminated edge.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{AgentAction, Trace};
use crate::explorers::{ge1_decide, MapState};
use crate::graph::{EdgeId, NodeId, PortGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PotentialError {
    #[error("trace has no steps")]
    Empty,
    #[error("replay needs a one-hop view at t={0}")]
    MissingView(u64),
    #[error("no unvisited node reachable in the map at t={0}")]
    Unreachable(u64),
    #[error("replay diverged at t={t}: recorded {recorded:?}, replayed {replayed:?}")]
    Diverged {
        t: u64,
        recorded: Option<AgentAction>,
        replayed: Option<AgentAction>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Instrumentation {
    /// `d_cur` after both halves of each observed step.
    pub d_cur: Vec<usize>,
    /// Charge per visited node.
    pub iota_v: BTreeMap<NodeId, i64>,
    /// Charge per eliminated edge; edges never eliminated are omitted.
    pub iota_e: BTreeMap<EdgeId, i64>,
    /// Revisits where `d_cur` dropped by more than one in the first half.
    pub extra_drops: u64,
}

impl Instrumentation {
    pub fn sum_iota_v(&self) -> i64 {
        self.iota_v.values().sum()
    }

    pub fn sum_iota_e(&self) -> i64 {
        self.iota_e.values().sum()
    }

    /// `n + Σι_V + Σι_E`.
    pub fn time_bound(&self, n: usize) -> i64 {
        n as i64 + self.sum_iota_v() + self.sum_iota_e()
    }
}

fn potential(map: &MapState, t: u64) -> Result<i64, PotentialError> {
    map.d_cur()
        .map(|d| d as i64)
        .ok_or(PotentialError::Unreachable(t))
}

/// Replays a one-hop greedy trace and computes its charges. `graph` supplies
/// the edge ids used to order eliminations.
pub fn instrument_potential(
    trace: &Trace,
    graph: &PortGraph,
) -> Result<Instrumentation, PotentialError> {
    if trace.steps.is_empty() {
        return Err(PotentialError::Empty);
    }
    let mut map = MapState::new();
    let mut out = Instrumentation::default();
    let mut d = 0i64;

    for (i, step) in trace.steps.iter().enumerate() {
        let obs = &step.observation;
        if obs.kt1_view.is_none() {
            return Err(PotentialError::MissingView(obs.t));
        }
        let previous = map.current();
        let first_visit = !map.v_vis().contains(&obs.node);

        map.arrive(obs, previous, true)
            .map_err(|_| PotentialError::Diverged {
                t: obs.t,
                recorded: step.action,
                replayed: None,
            })?;
        if i == 0 {
            out.iota_v.insert(obs.node, 0);
        } else {
            let after = potential(&map, obs.t)?;
            if first_visit {
                out.iota_v.insert(obs.node, after - d);
            } else if after < d - 1 {
                out.extra_drops += 1;
            }
            d = after;
        }

        let v = obs.node;
        let mut eliminated: Vec<(EdgeId, usize)> = obs
            .unavailable_ports()
            .into_iter()
            .filter(|&p| !map.is_deleted(v, p))
            .filter_map(|p| graph.neighbor(v, p).map(|(_, e)| (e, p)))
            .collect();
        eliminated.sort_unstable();
        for (e, p) in eliminated {
            let was_map_edge = graph
                .neighbor(v, p)
                .is_some_and(|(u, _)| map.lambda(v, u) == Some(p) && map.has_map_edge(v, u));
            map.delete_port(v, p);
            let after = potential(&map, obs.t)?;
            if was_map_edge {
                out.iota_e.insert(e, after - d);
            }
            d = after;
        }
        if i == 0 {
            d = potential(&map, obs.t)?;
        }
        out.d_cur.push(d as usize);

        let replayed = ge1_decide(&map, obs.t).ok();
        if step.action.is_some() && replayed != step.action {
            return Err(PotentialError::Diverged {
                t: obs.t,
                recorded: step.action,
                replayed,
            });
        }
    }
    Ok(out)
}
