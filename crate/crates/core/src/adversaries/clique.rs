use std::collections::BTreeSet;

use super::{confinement_bound, null_presence, pad_with_nulls, AdversaryError, AdversaryInstance};
use crate::graph::{EdgeId, NodeId, PortGraph};
use crate::sim::{Environment, History};

/// Blocking strategy inside a gadget `K_g(u, v)` (complete graph minus the
/// edge between the two gates). Keeps the agent on trap nodes by deleting,
/// before every move, all edges from its position to blocked nodes. A node
/// is blocked once it is the only one not visited since the last blocking.
#[derive(Clone, Debug)]
pub struct Confinement {
    nodes: BTreeSet<NodeId>,
    v_blk: BTreeSet<NodeId>,
    blocked_order: Vec<NodeId>,
    v_done: BTreeSet<NodeId>,
    e_del: BTreeSet<EdgeId>,
    finished: bool,
    moves: u64,
    finished_after: Option<u64>,
}

impl Confinement {
    pub fn new(
        nodes: impl IntoIterator<Item = NodeId>,
        u: NodeId,
        v: NodeId,
        start: NodeId,
    ) -> Self {
        Confinement {
            nodes: nodes.into_iter().collect(),
            v_blk: [u, v].into_iter().collect(),
            blocked_order: Vec::new(),
            v_done: [start].into_iter().collect(),
            e_del: BTreeSet::new(),
            finished: false,
            moves: 0,
            finished_after: None,
        }
    }

    pub fn blocked(&self) -> &BTreeSet<NodeId> {
        &self.v_blk
    }

    /// Traps in the order they were blocked.
    pub fn blocked_order(&self) -> &[NodeId] {
        &self.blocked_order
    }

    pub fn deleted(&self) -> &BTreeSet<EdgeId> {
        &self.e_del
    }

    pub fn is_deleted(&self, e: EdgeId) -> bool {
        self.e_del.contains(&e)
    }

    pub fn finished(&self) -> bool {
        self.finished
    }

    /// Moves the agent made before the strategy stopped.
    pub fn finished_after(&self) -> Option<u64> {
        self.finished_after
    }

    /// Deletes every edge between `cur` and a blocked node.
    pub fn before_move(&mut self, graph: &PortGraph, cur: NodeId) {
        if self.finished {
            return;
        }
        for &w in &self.v_blk {
            if let Some(e) = graph.edge_between(cur, w) {
                self.e_del.insert(e);
            }
        }
    }

    /// Bookkeeping after the agent moved to `cur`.
    pub fn after_move(&mut self, cur: NodeId) {
        if self.finished {
            return;
        }
        self.moves += 1;
        if !self.nodes.contains(&cur) {
            return;
        }
        self.v_done.insert(cur);
        let g = self.nodes.len();
        if self.v_done.len() + self.v_blk.len() < g - 1 {
            return;
        }
        let rest: Vec<NodeId> = self
            .nodes
            .iter()
            .copied()
            .filter(|w| !self.v_blk.contains(w) && !self.v_done.contains(w))
            .collect();
        if let [w] = rest[..] {
            self.v_blk.insert(w);
            self.blocked_order.push(w);
        }
        self.v_done = [cur].into_iter().collect();
        if self.v_blk.len() >= g - 2 {
            self.finished = true;
            self.finished_after = Some(self.moves);
        }
    }
}

/// A gadget, optionally attached to a path and padded with null edges, under
/// the blocking strategy. Once the strategy stops its deletions stay in
/// force.
pub struct CliqueAdversary {
    graph: PortGraph,
    null_from: usize,
    conf: Confinement,
}

impl CliqueAdversary {
    pub fn confinement(&self) -> &Confinement {
        &self.conf
    }
}

impl Environment for CliqueAdversary {
    fn graph(&self) -> &PortGraph {
        &self.graph
    }

    fn commit(&mut self, t: u64, history: &History<'_>) -> Vec<bool> {
        let cur = history.current();
        if t > 0 {
            self.conf.after_move(cur);
        }
        self.conf.before_move(&self.graph, cur);
        let mut present: Vec<bool> = (0..self.graph.m())
            .map(|e| !self.conf.is_deleted(EdgeId(e)))
            .collect();
        null_presence(&self.graph, self.null_from, cur, &mut present);
        present
    }
}

/// Gadget pairs on nodes `offset..offset+g` with gates `offset` and
/// `offset + 1`.
fn gadget_pairs(offset: usize, g: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for a in 0..g {
        for b in a + 1..g {
            if (a, b) != (0, 1) {
                pairs.push((offset + a, offset + b));
            }
        }
    }
    pairs
}

/// `K_g(0, 1)` on its own; traps are `2..g`.
pub fn clique_confinement(g: usize, start: NodeId) -> Result<AdversaryInstance, AdversaryError> {
    if g < 6 {
        return Err(AdversaryError::Params(format!(
            "gadget size {g} is below 6"
        )));
    }
    if start.0 < 2 || start.0 >= g {
        return Err(AdversaryError::Params(format!(
            "start {start} is not a trap of K_{g}"
        )));
    }
    let pairs = gadget_pairs(0, g);
    let graph = PortGraph::from_pairs(g, &pairs)?;
    let null_from = graph.m();
    let conf = Confinement::new((0..g).map(NodeId), NodeId(0), NodeId(1), start);
    Ok(AdversaryInstance {
        name: "clique",
        env: Box::new(CliqueAdversary {
            graph,
            null_from,
            conf,
        }),
        start,
        forbidden: vec![NodeId(0), NodeId(1)],
        guaranteed_steps: confinement_bound(g),
        claimed_t: None,
    })
}

/// Path `g..n` attached by its first node to gate `0` of `K_g(0, 1)` with
/// `g = ⌊√m⌋`, padded with null edges to `m` edges. The agent starts on trap
/// `2`.
pub fn kt1_time_lower(n: usize, m: usize) -> Result<AdversaryInstance, AdversaryError> {
    let g = m.isqrt();
    if g < 6 || g >= n {
        return Err(AdversaryError::Params(format!(
            "gadget size ⌊√{m}⌋ = {g} must lie in [6, n)"
        )));
    }
    let mut pairs = gadget_pairs(0, g);
    pairs.push((g, 0));
    pairs.extend((g..n - 1).map(|i| (i, i + 1)));
    let null_from = pad_with_nulls(n, &mut pairs, m)?;
    let graph = PortGraph::from_pairs(n, &pairs)?;
    let start = NodeId(2);
    let conf = Confinement::new((0..g).map(NodeId), NodeId(0), NodeId(1), start);
    Ok(AdversaryInstance {
        name: "kt1-time",
        env: Box::new(CliqueAdversary {
            graph,
            null_from,
            conf,
        }),
        start,
        forbidden: vec![NodeId(0), NodeId(1)],
        guaranteed_steps: confinement_bound(g),
        claimed_t: None,
    })
}

/// Construction parameters of [`kt1_time_lower`]: gadget size, base edge
/// count and number of null edges.
pub fn kt1_time_layout(n: usize, m: usize) -> (usize, usize, usize) {
    let g = m.isqrt();
    let base = g * (g - 1) / 2 - 1 + n - g;
    (g, base, m.saturating_sub(base))
}
