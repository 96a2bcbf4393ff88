use std::collections::BTreeMap;

use super::{null_presence, pad_with_nulls, AdversaryError, AdversaryInstance};
use crate::graph::{Edge, EdgeId, NodeId, Port, PortGraph};
use crate::sim::{Environment, History, Model};

/// Port state of one node whose labels are fixed on demand.
#[derive(Clone, Debug)]
struct LazyPorts {
    /// Number of non-padding edges; they take ports `1..=k`.
    k: usize,
    /// Non-padding edges: trap edges first, then path edges, each ascending.
    candidates: Vec<EdgeId>,
    /// Padding edges with their fixed ports `k+1..`.
    padding: Vec<(EdgeId, Port)>,
    by_port: BTreeMap<Port, EdgeId>,
    by_edge: BTreeMap<EdgeId, Port>,
}

impl LazyPorts {
    fn bind(&mut self, p: Port, e: EdgeId) {
        self.by_port.insert(p, e);
        self.by_edge.insert(e, p);
    }

    fn unbound_ports(&self) -> impl Iterator<Item = Port> + '_ {
        (1..=self.k).filter(|p| !self.by_port.contains_key(p))
    }

    fn unbound_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.candidates
            .iter()
            .copied()
            .filter(|e| !self.by_edge.contains_key(e))
    }

    /// Port of `e`, binding it to the smallest free port if needed.
    fn port_for(&mut self, e: EdgeId) -> Port {
        if let Some(&p) = self.by_edge.get(&e) {
            return p;
        }
        if let Some(&(_, p)) = self.padding.iter().find(|(f, _)| *f == e) {
            return p;
        }
        let p = self
            .unbound_ports()
            .next()
            .expect("a free port remains for every free edge");
        self.bind(p, e);
        p
    }

    /// Edge behind `p`, binding a free port to the first free edge.
    fn edge_for(&mut self, p: Port) -> Option<EdgeId> {
        if let Some(&e) = self.by_port.get(&p) {
            return Some(e);
        }
        if p > self.k {
            return self.padding.iter().find(|(_, q)| *q == p).map(|&(e, _)| e);
        }
        let e = self.unbound_edges().next()?;
        self.bind(p, e);
        Some(e)
    }

    fn is_consistent(&self) -> bool {
        self.by_port.len() == self.by_edge.len()
            && self
                .by_port
                .iter()
                .all(|(&p, e)| p >= 1 && p <= self.k && self.by_edge.get(e) == Some(&p))
    }
}

/// Path `v_1 .. v_n` plus trap edges between its left third `V_L` and its
/// right part `V_R`. A trap edge is absent while the agent stands on its
/// `V_L` end; path edges are always present. At `V_R` nodes ports are bound
/// only when used: an unused port leads over an unused trap edge while one is
/// left there.
pub struct LazyPathAdversary {
    graph: PortGraph,
    null_from: usize,
    /// Trap edges are `EdgeId(n - 1) .. EdgeId(trap_end)`.
    trap_end: usize,
    lazy: BTreeMap<NodeId, LazyPorts>,
}

impl LazyPathAdversary {
    fn is_trap(&self, e: EdgeId) -> bool {
        e.0 >= self.graph.n() - 1 && e.0 < self.trap_end
    }

    /// Every partial binding is duplicate-free and within `1..=k`.
    pub fn bindings_consistent(&self) -> bool {
        self.lazy.values().all(LazyPorts::is_consistent)
    }

    /// Number of bound ports over all lazy nodes.
    pub fn bound_ports(&self) -> usize {
        self.lazy.values().map(|l| l.by_port.len()).sum()
    }
}

impl Environment for LazyPathAdversary {
    fn graph(&self) -> &PortGraph {
        &self.graph
    }

    fn supports(&self, model: Model) -> bool {
        model == Model::Kt0
    }

    fn commit(&mut self, _t: u64, history: &History<'_>) -> Vec<bool> {
        let cur = history.current();
        if let [.., prev, _] = history.positions {
            if let Some(e) = self.graph.edge_between(cur, *prev) {
                if let Some(l) = self.lazy.get_mut(&cur) {
                    l.port_for(e);
                }
            }
        }
        let mut present = vec![true; self.graph.m()];
        let traps = self.graph.n() - 1..self.trap_end;
        for (flag, edge) in present[traps.clone()]
            .iter_mut()
            .zip(&self.graph.edges()[traps])
        {
            *flag = edge.u != cur;
        }
        null_presence(&self.graph, self.null_from, cur, &mut present);
        present
    }

    fn available_ports(&mut self, v: NodeId, present: &[bool]) -> Vec<Port> {
        let Some(l) = self.lazy.get(&v) else {
            let g = &self.graph;
            let mut ports: Vec<Port> = g
                .incident(v)
                .iter()
                .filter(|(_, e)| present[e.0])
                .map(|&(_, e)| g.edge(e).port_at(v))
                .collect();
            ports.sort_unstable();
            return ports;
        };
        let free = l.unbound_edges().filter(|e| present[e.0]).count();
        let mut ports: Vec<Port> = l
            .by_port
            .iter()
            .filter(|(_, e)| present[e.0])
            .map(|(&p, _)| p)
            .chain(l.unbound_ports().take(free))
            .chain(
                l.padding
                    .iter()
                    .filter(|(e, _)| present[e.0])
                    .map(|&(_, p)| p),
            )
            .collect();
        ports.sort_unstable();
        ports
    }

    fn port_of(&mut self, v: NodeId, e: EdgeId) -> Port {
        match self.lazy.get_mut(&v) {
            Some(l) => l.port_for(e),
            None => self.graph.edge(e).port_at(v),
        }
    }

    fn follow(&mut self, v: NodeId, p: Port) -> Option<(NodeId, EdgeId)> {
        let e = match self.lazy.get_mut(&v) {
            Some(l) => l.edge_for(p)?,
            None => return self.graph.neighbor(v, p),
        };
        debug_assert!(self.is_trap(e) || e.0 < self.graph.n() - 1 || e.0 >= self.null_from);
        Some((self.graph.edge(e).other(v), e))
    }

    fn realized_graph(&self) -> PortGraph {
        let mut edges: Vec<Edge> = self.graph.edges().to_vec();
        for (&v, l) in &self.lazy {
            let mut l = l.clone();
            let free: Vec<EdgeId> = l.unbound_edges().collect();
            for e in free {
                l.port_for(e);
            }
            for (&e, &p) in l
                .by_edge
                .iter()
                .chain(l.padding.iter().map(|(e, p)| (e, p)))
            {
                let edge = &mut edges[e.0];
                if edge.u == v {
                    edge.port_u = p;
                } else {
                    edge.port_v = p;
                }
            }
        }
        PortGraph::with_ports(self.graph.n(), edges).expect("completed binding is a port bijection")
    }
}

/// Sizes of [`kt0_time_lower`]: `(ℓ, r, |V_L|, |V_R|, m_T)`.
pub fn kt0_layout(n: usize, m: usize) -> (usize, usize, usize, usize, usize) {
    let (l, r) = (n / 3, 2 * n / 3);
    let left = l;
    let right = n.saturating_sub(r);
    let spare = (m + 1).saturating_sub(n);
    (l, r, left, right, spare.min(left * right))
}

/// Node `v_i` has id `i - 1`. The agent starts at `v_1`; `v_n` is forbidden.
pub fn kt0_time_lower(n: usize, m: usize) -> Result<AdversaryInstance, AdversaryError> {
    let adv = LazyPathAdversary::new(n, m)?;
    let (l, r, _, _, m_t) = kt0_layout(n, m);
    Ok(AdversaryInstance {
        name: "kt0-time",
        env: Box::new(adv),
        start: NodeId(0),
        forbidden: vec![NodeId(n - 1)],
        guaranteed_steps: (m_t * (r - l)) as u64,
        claimed_t: None,
    })
}

impl LazyPathAdversary {
    pub fn new(n: usize, m: usize) -> Result<Self, AdversaryError> {
        if n < 6 {
            return Err(AdversaryError::Params(format!("n = {n} is below 6")));
        }
        if m < n - 1 {
            return Err(AdversaryError::Params(format!("m = {m} is below n - 1")));
        }
        let (l, r, _, _, m_t) = kt0_layout(n, m);
        let v_l = 0..l;
        let v_r = r - 1..n - 1;
        let mut pairs: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        'fill: for b in v_r.clone() {
            for a in v_l.clone() {
                if pairs.len() == n - 1 + m_t {
                    break 'fill;
                }
                pairs.push((a, b));
            }
        }
        let trap_end = pairs.len();
        let null_from = pad_with_nulls(n, &mut pairs, m)?;
        let graph = PortGraph::from_pairs(n, &pairs)?;

        let mut lazy = BTreeMap::new();
        for v in v_r.map(NodeId) {
            let mut traps = Vec::new();
            let mut path = Vec::new();
            let mut padding = Vec::new();
            for &(_, e) in graph.incident(v) {
                if e.0 >= null_from {
                    padding.push(e);
                } else if e.0 >= n - 1 {
                    traps.push(e);
                } else {
                    path.push(e);
                }
            }
            let k = traps.len() + path.len();
            traps.extend(path);
            lazy.insert(
                v,
                LazyPorts {
                    k,
                    candidates: traps,
                    padding: padding.into_iter().zip(k + 1..).collect(),
                    by_port: BTreeMap::new(),
                    by_edge: BTreeMap::new(),
                },
            );
        }
        Ok(LazyPathAdversary {
            graph,
            null_from,
            trap_end,
            lazy,
        })
    }
}
