use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::graph::{NodeId, Port};
use crate::sim::{AgentError, Observation};

/// The agent-side map shared by both greedy explorers.
///
/// `lambda[(u, v)]` is the learned value of `λ_u(v)`; an absent key means
/// the port is still unknown. Every key has a visited first component.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MapState {
    current: Option<NodeId>,
    v_map: BTreeSet<NodeId>,
    v_vis: BTreeSet<NodeId>,
    lambda: BTreeMap<(NodeId, NodeId), Port>,
    by_port: BTreeMap<(NodeId, Port), NodeId>,
    p_del: BTreeMap<NodeId, BTreeSet<Port>>,
    degree_of: BTreeMap<NodeId, usize>,
}

/// Breadth-first search result over the map graph.
pub(crate) struct MapBfs {
    pub dist: BTreeMap<NodeId, usize>,
    pub parent: BTreeMap<NodeId, NodeId>,
}

impl MapBfs {
    /// First hop on the recorded shortest path from the search source to `w`.
    pub fn first_hop(&self, src: NodeId, w: NodeId) -> Option<NodeId> {
        let mut x = w;
        loop {
            let p = *self.parent.get(&x)?;
            if p == src {
                return Some(x);
            }
            x = p;
        }
    }
}

impl MapState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn current(&self) -> Option<NodeId> {
        self.current
    }

    pub fn v_map(&self) -> &BTreeSet<NodeId> {
        &self.v_map
    }

    pub fn v_vis(&self) -> &BTreeSet<NodeId> {
        &self.v_vis
    }

    pub fn lambda(&self, u: NodeId, v: NodeId) -> Option<Port> {
        self.lambda.get(&(u, v)).copied()
    }

    pub fn degree_of(&self, v: NodeId) -> Option<usize> {
        self.degree_of.get(&v).copied()
    }

    pub fn p_del(&self, v: NodeId) -> impl Iterator<Item = Port> + '_ {
        self.p_del
            .get(&v)
            .into_iter()
            .flat_map(|s| s.iter().copied())
    }

    pub fn is_deleted(&self, v: NodeId, p: Port) -> bool {
        self.p_del.get(&v).is_some_and(|s| s.contains(&p))
    }

    /// `V_map \ V_vis` is empty.
    pub fn fully_visited(&self) -> bool {
        self.v_map.len() == self.v_vis.len()
    }

    /// Records `λ_u(v) = p`.
    pub fn learn(&mut self, u: NodeId, v: NodeId, p: Port) -> Result<(), AgentError> {
        if let Some(&old) = self.lambda.get(&(u, v)) {
            if old != p {
                return Err(AgentError::Inconsistent(format!(
                    "port of {v} at {u} changed from {old} to {p}"
                )));
            }
            return Ok(());
        }
        if let Some(&w) = self.by_port.get(&(u, p)) {
            return Err(AgentError::Inconsistent(format!(
                "port {p} at {u} leads to both {w} and {v}"
            )));
        }
        self.lambda.insert((u, v), p);
        self.by_port.insert((u, p), v);
        Ok(())
    }

    /// First half of a step: move the agent, mark the node visited and absorb
    /// the identifiers and ports it can see. `previous` is the node the agent
    /// just left. The neighbor view is ignored unless `use_view` is set.
    pub fn arrive(
        &mut self,
        obs: &Observation,
        previous: Option<NodeId>,
        use_view: bool,
    ) -> Result<(), AgentError> {
        let v = obs.node;
        self.current = Some(v);
        self.v_vis.insert(v);
        self.v_map.insert(v);
        self.degree_of.insert(v, obs.degree);
        if let Some(view) = obs.kt1_view.as_ref().filter(|_| use_view) {
            for &(w, p) in view {
                self.v_map.insert(w);
                self.learn(v, w, p)?;
            }
        }
        if let (Some(prev), Some(p_in)) = (previous, obs.incoming_port) {
            self.v_map.insert(prev);
            self.learn(v, prev, p_in)?;
        }
        Ok(())
    }

    /// Ports at `v` whose neighbor is known, ascending.
    pub fn known_ports(&self, v: NodeId) -> impl Iterator<Item = Port> + '_ {
        self.by_port
            .range((v, 0)..=(v, Port::MAX))
            .map(|(&(_, p), _)| p)
    }

    /// Second half of a step: ports unavailable right now join `P_del` of the
    /// current node. Returns the newly deleted ports, ascending.
    pub fn delete_unavailable(&mut self, obs: &Observation) -> Vec<Port> {
        let del = self.p_del.entry(obs.node).or_default();
        obs.unavailable_ports()
            .into_iter()
            .filter(|&p| del.insert(p))
            .collect()
    }

    /// Adds a single port to `P_del(v)`.
    pub(crate) fn delete_port(&mut self, v: NodeId, p: Port) {
        self.p_del.entry(v).or_default().insert(p);
    }

    /// Clears `P_del` everywhere except at `keep`, whose set becomes `ports`.
    pub(crate) fn reset_deleted(&mut self, keep: NodeId, ports: impl IntoIterator<Item = Port>) {
        self.p_del.clear();
        self.p_del.insert(keep, ports.into_iter().collect());
    }

    fn usable(&self, u: NodeId, v: NodeId) -> bool {
        self.lambda(u, v).is_some_and(|p| !self.is_deleted(u, p))
    }

    /// Whether `{u, v}` is currently an edge of `E¹ ∪ E²`.
    pub fn has_map_edge(&self, u: NodeId, v: NodeId) -> bool {
        let (a, b) = if self.v_vis.contains(&u) {
            (u, v)
        } else {
            (v, u)
        };
        if !self.v_vis.contains(&a) || !self.usable(a, b) {
            return false;
        }
        if self.v_vis.contains(&b) {
            self.usable(b, a)
        } else {
            self.v_map.contains(&b)
        }
    }

    /// `(E¹, E²)`: edges between visited nodes whose ports are known and
    /// undeleted on both sides, and edges from a visited node to an observed
    /// unvisited node whose port is known and undeleted at the visited side.
    /// `E¹` pairs are `(smaller, larger)`; `E²` pairs are `(visited, unvisited)`.
    pub fn map_edges(&self) -> (Vec<(NodeId, NodeId)>, Vec<(NodeId, NodeId)>) {
        let mut e1 = Vec::new();
        let mut e2 = Vec::new();
        for &(u, v) in self.lambda.keys() {
            if !self.v_vis.contains(&u) || !self.usable(u, v) {
                continue;
            }
            if self.v_vis.contains(&v) {
                if u < v && self.usable(v, u) {
                    e1.push((u, v));
                }
            } else if self.v_map.contains(&v) {
                e2.push((u, v));
            }
        }
        (e1, e2)
    }

    pub(crate) fn map_adjacency(&self, with_e2: bool) -> BTreeMap<NodeId, Vec<NodeId>> {
        let (e1, e2) = self.map_edges();
        let mut adj: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        let extra = if with_e2 { e2 } else { Vec::new() };
        for (a, b) in e1.into_iter().chain(extra) {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        for list in adj.values_mut() {
            list.sort_unstable();
        }
        adj
    }

    pub(crate) fn bfs(&self, src: NodeId, with_e2: bool) -> MapBfs {
        let adj = self.map_adjacency(with_e2);
        let mut dist = BTreeMap::new();
        let mut parent = BTreeMap::new();
        let mut queue = VecDeque::new();
        dist.insert(src, 0);
        queue.push_back(src);
        while let Some(x) = queue.pop_front() {
            let d = dist[&x];
            for &y in adj.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
                if let std::collections::btree_map::Entry::Vacant(slot) = dist.entry(y) {
                    slot.insert(d + 1);
                    parent.insert(y, x);
                    queue.push_back(y);
                }
            }
        }
        MapBfs { dist, parent }
    }

    /// The closest node of `targets` (ties: lowest id) and the first hop on
    /// the lexicographically least shortest path to it.
    pub(crate) fn step_toward<'a>(
        &self,
        targets: impl IntoIterator<Item = &'a NodeId>,
        with_e2: bool,
    ) -> Option<(NodeId, NodeId)> {
        let src = self.current?;
        let search = self.bfs(src, with_e2);
        let (_, w) = targets
            .into_iter()
            .filter_map(|w| search.dist.get(w).map(|&d| (d, *w)))
            .min()?;
        Some((w, search.first_hop(src, w)?))
    }

    /// `d_cur`: map distance from the agent to the closest unvisited node, or
    /// zero once every mapped node is visited. `None` if no unvisited node is
    /// reachable.
    pub fn d_cur(&self) -> Option<usize> {
        if self.fully_visited() {
            return Some(0);
        }
        let src = self.current?;
        let search = self.bfs(src, true);
        self.v_map
            .difference(&self.v_vis)
            .filter_map(|w| search.dist.get(w).copied())
            .min()
    }
}
