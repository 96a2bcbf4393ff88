//! Adaptive schedules that keep an agent away from designated nodes.
//!
//! Every construction is packaged as an [`AdversaryInstance`]: the adaptive
//! environment, the start node, the nodes the agent must not reach, the number
//! of steps that is guaranteed, and the declared window size (`None` meaning
//! the schedule keeps a spanning tree present forever).
//!
//! Padding ("null") edges are absent exactly at the steps where the agent
//! occupies one of their endpoints, so no agent can ever use them.

mod clique;
mod kt0;
mod window;

use std::collections::HashSet;

use thiserror::Error;

pub use clique::{
    clique_confinement, kt1_time_layout, kt1_time_lower, CliqueAdversary, Confinement,
};
pub use kt0::{kt0_layout, kt0_time_lower, LazyPathAdversary};
pub use window::{
    dense_layout, window_lower_dense, window_lower_sparse, DenseWindowAdversary,
    SparseWindowAdversary,
};

use crate::graph::{verify_interval_connectivity, GraphError, NodeId, ScheduleDoc};
use crate::sim::{Environment, Trace};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdversaryError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// An adaptive environment plus the claim it is built to enforce.
pub struct AdversaryInstance {
    pub name: &'static str,
    pub env: Box<dyn Environment>,
    pub start: NodeId,
    pub forbidden: Vec<NodeId>,
    /// Steps during which no forbidden node is reached.
    pub guaranteed_steps: u64,
    /// Declared window size; `None` for a schedule connected at every window.
    pub claimed_t: Option<u64>,
}

impl std::fmt::Debug for AdversaryInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AdversaryInstance")
            .field("name", &self.name)
            .field("start", &self.start)
            .field("forbidden", &self.forbidden)
            .field("guaranteed_steps", &self.guaranteed_steps)
            .field("claimed_t", &self.claimed_t)
            .finish_non_exhaustive()
    }
}

/// Outcome of a run against an adversary.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Verdict {
    pub forbidden_reached: bool,
    pub steps_until_forbidden: Option<u64>,
    pub guaranteed: u64,
    #[serde(rename = "oracle_T_ok")]
    pub oracle_t_ok: bool,
}

impl Verdict {
    /// No forbidden node before the guaranteed bound and the realized schedule
    /// has the declared window.
    pub fn holds(&self) -> bool {
        self.steps_until_forbidden
            .is_none_or(|s| s >= self.guaranteed)
            && self.oracle_t_ok
    }
}

impl AdversaryInstance {
    /// The window checked by the oracle: the declared one, or the realized
    /// horizon when every window is claimed to be connected.
    pub fn oracle_window(&self, trace: &Trace) -> u64 {
        let horizon = trace.realized.horizon().max(1);
        self.claimed_t.unwrap_or(horizon).min(horizon)
    }

    pub fn verdict(&self, trace: &Trace) -> Result<Verdict, GraphError> {
        let first = trace.first_visit_any(&self.forbidden);
        let oracle_t_ok = if trace.realized.horizon() == 0 {
            true
        } else {
            verify_interval_connectivity(&trace.realized, self.oracle_window(trace))?.is_connected()
        };
        Ok(Verdict {
            forbidden_reached: first.is_some(),
            steps_until_forbidden: first,
            guaranteed: self.guaranteed_steps,
            oracle_t_ok,
        })
    }

    /// The realized schedule with the claim attached.
    pub fn dump(&self, trace: &Trace) -> ScheduleDoc {
        let mut doc = ScheduleDoc::from_schedule(&trace.realized);
        doc.claimed_t = Some(self.oracle_window(trace));
        doc.forbidden = Some(self.forbidden.iter().map(|v| v.0).collect());
        doc.guaranteed_steps = Some(self.guaranteed_steps);
        doc
    }
}

/// `Σ_{k=2}^{g-3} (g-2-k)`: moves forced inside a `g`-node gadget.
pub fn confinement_bound(g: usize) -> u64 {
    (2..=g.saturating_sub(3)).map(|k| (g - 2 - k) as u64).sum()
}

/// Appends `m - base.len()` padding edges between non-adjacent pairs in
/// lexicographic order. Returns the index of the first padding edge.
pub(crate) fn pad_with_nulls(
    n: usize,
    pairs: &mut Vec<(usize, usize)>,
    m: usize,
) -> Result<usize, AdversaryError> {
    let base = pairs.len();
    if m < base {
        return Err(AdversaryError::Params(format!(
            "m = {m} is below the {base} edges of the construction"
        )));
    }
    if m > n * (n - 1) / 2 {
        return Err(AdversaryError::Params(format!("m = {m} exceeds n(n-1)/2")));
    }
    let mut taken: HashSet<(usize, usize)> =
        pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    'outer: for a in 0..n {
        for b in a + 1..n {
            if pairs.len() == m {
                break 'outer;
            }
            if taken.insert((a, b)) {
                pairs.push((a, b));
            }
        }
    }
    Ok(base)
}

/// Presence with padding edges (ids `>= null_from`) removed around `cur`.
pub(crate) fn null_presence(
    graph: &crate::graph::PortGraph,
    null_from: usize,
    cur: NodeId,
    present: &mut [bool],
) {
    for (i, e) in graph.edges().iter().enumerate().skip(null_from) {
        present[i] = !e.touches(cur);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gadget_bounds() {
        assert_eq!(confinement_bound(10), 21);
        assert_eq!(confinement_bound(20), 136);
        assert_eq!(confinement_bound(30), 351);
        assert_eq!(confinement_bound(6), 3);
    }

    #[test]
    fn padding_is_lexicographic() {
        let mut pairs = vec![(0, 1), (1, 2), (2, 3)];
        let first = pad_with_nulls(4, &mut pairs, 5).unwrap();
        assert_eq!(first, 3);
        assert_eq!(&pairs[3..], &[(0, 2), (0, 3)]);
        assert!(pad_with_nulls(4, &mut pairs.clone(), 7).is_err());
    }
}
