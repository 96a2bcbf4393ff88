//! Static port-numbered graphs, dynamic schedules and the interval-connectivity
//! oracle.

mod json;
mod schedule;
mod unionfind;
mod window;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use json::{AbsenceRecord, EdgeRecord, ScheduleDoc};
pub use schedule::{
    intersection_graph, verify_interval_connectivity, ConnectivityVerdict, FixedSchedule, Interval,
    Schedule,
};
pub use unionfind::UnionFind;
pub use window::{check_log_inequality, epsilon, ordered_distance_sum, tau, WindowParams};

/// Local edge label at a node, always in `1..=degree`.
pub type Port = usize;

/// Unique node label. Nodes of an `n`-node graph are `0..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Index into the edge list of a [`PortGraph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("graph must have at least one node")]
    Empty,
    #[error("node {0} out of range")]
    NodeOutOfRange(usize),
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("parallel edge between {0} and {1}")]
    ParallelEdge(usize, usize),
    #[error("port {port} at node {node} is not a bijection onto 1..={degree}")]
    BadPort {
        node: usize,
        port: usize,
        degree: usize,
    },
    #[error("underlying graph is not connected")]
    Disconnected,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("window [{from}..{to}] exceeds realized horizon {horizon}")]
    Range { from: u64, to: u64, horizon: u64 },
    #[error("invalid schedule: {0}")]
    Schedule(String),
}

/// An undirected edge together with its port label at each endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub port_u: Port,
    pub port_v: Port,
}

impl Edge {
    /// The endpoint opposite to `x`.
    pub fn other(&self, x: NodeId) -> NodeId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    /// Port label of this edge at endpoint `x`.
    pub fn port_at(&self, x: NodeId) -> Port {
        if self.u == x {
            self.port_u
        } else {
            self.port_v
        }
    }

    pub fn touches(&self, x: NodeId) -> bool {
        self.u == x || self.v == x
    }
}

/// Simple connected undirected graph with a port bijection at every node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PortGraph {
    n: usize,
    edges: Vec<Edge>,
    /// `by_port[v][p - 1]` is the edge behind port `p` at `v`.
    by_port: Vec<Vec<EdgeId>>,
    /// Incident edges sorted by neighbor id.
    sorted: Vec<Vec<(NodeId, EdgeId)>>,
    index: HashMap<(usize, usize), EdgeId>,
}

fn key(a: NodeId, b: NodeId) -> (usize, usize) {
    if a.0 < b.0 {
        (a.0, b.0)
    } else {
        (b.0, a.0)
    }
}

impl PortGraph {
    /// Builds a graph from unordered pairs, assigning ports in ascending
    /// neighbor order at every node.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            if a >= n {
                return Err(GraphError::NodeOutOfRange(a));
            }
            if b >= n {
                return Err(GraphError::NodeOutOfRange(b));
            }
            incident[a].push((b, i));
            incident[b].push((a, i));
        }
        let mut port_of = vec![(0, 0); pairs.len()];
        for (x, list) in incident.iter_mut().enumerate() {
            list.sort_unstable();
            for (p, &(_, e)) in list.iter().enumerate() {
                if pairs[e].0 == x {
                    port_of[e].0 = p + 1;
                } else {
                    port_of[e].1 = p + 1;
                }
            }
        }
        let edges = pairs
            .iter()
            .zip(port_of)
            .map(|(&(a, b), (pa, pb))| Edge {
                u: NodeId(a),
                v: NodeId(b),
                port_u: pa,
                port_v: pb,
            })
            .collect();
        Self::with_ports(n, edges)
    }

    /// Builds a graph from edges that carry explicit port labels.
    pub fn with_ports(n: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut index = HashMap::with_capacity(edges.len());
        let mut degree = vec![0usize; n];
        for (i, e) in edges.iter().enumerate() {
            for x in [e.u, e.v] {
                if x.0 >= n {
                    return Err(GraphError::NodeOutOfRange(x.0));
                }
            }
            if e.u == e.v {
                return Err(GraphError::SelfLoop(e.u.0));
            }
            if index.insert(key(e.u, e.v), EdgeId(i)).is_some() {
                return Err(GraphError::ParallelEdge(e.u.0, e.v.0));
            }
            degree[e.u.0] += 1;
            degree[e.v.0] += 1;
        }
        let mut by_port: Vec<Vec<Option<EdgeId>>> = degree.iter().map(|&d| vec![None; d]).collect();
        for (i, e) in edges.iter().enumerate() {
            for (x, p) in [(e.u, e.port_u), (e.v, e.port_v)] {
                let d = degree[x.0];
                if p == 0 || p > d || by_port[x.0][p - 1].is_some() {
                    return Err(GraphError::BadPort {
                        node: x.0,
                        port: p,
                        degree: d,
                    });
                }
                by_port[x.0][p - 1] = Some(EdgeId(i));
            }
        }
        let by_port: Vec<Vec<EdgeId>> = by_port
            .into_iter()
            .map(|ports| ports.into_iter().map(|e| e.expect("filled")).collect())
            .collect();
        let mut sorted: Vec<Vec<(NodeId, EdgeId)>> = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            sorted[e.u.0].push((e.v, EdgeId(i)));
            sorted[e.v.0].push((e.u, EdgeId(i)));
        }
        for list in &mut sorted {
            list.sort_unstable();
        }
        let g = PortGraph {
            n,
            edges,
            by_port,
            sorted,
            index,
        };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.n).map(NodeId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.by_port[v.0].len()
    }

    /// `N(v, p)`: the neighbor behind port `p` at `v`, with the edge used.
    pub fn neighbor(&self, v: NodeId, p: Port) -> Option<(NodeId, EdgeId)> {
        let e = *self.by_port.get(v.0)?.get(p.checked_sub(1)?)?;
        Some((self.edges[e.0].other(v), e))
    }

    /// `λ_v(u)`.
    pub fn port(&self, v: NodeId, u: NodeId) -> Option<Port> {
        self.edge_between(v, u).map(|e| self.edges[e.0].port_at(v))
    }

    pub fn edge_between(&self, a: NodeId, b: NodeId) -> Option<EdgeId> {
        self.index.get(&key(a, b)).copied()
    }

    /// Incident edges in ascending neighbor order.
    pub fn incident(&self, v: NodeId) -> &[(NodeId, EdgeId)] {
        &self.sorted[v.0]
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency::from_edges(self.n, self.edges.iter().map(|e| (e.u, e.v)))
    }

    pub fn is_connected(&self) -> bool {
        self.adjacency().is_connected()
    }
}

/// Plain adjacency lists with neighbors kept in ascending id order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Adjacency {
    lists: Vec<Vec<NodeId>>,
}

impl Adjacency {
    pub fn new(n: usize) -> Self {
        Adjacency {
            lists: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Self {
        let mut adj = Adjacency::new(n);
        for (a, b) in edges {
            adj.lists[a.0].push(b);
            adj.lists[b.0].push(a);
        }
        for list in &mut adj.lists {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.lists[v.0]
    }

    pub fn is_connected(&self) -> bool {
        bfs_distances(self, NodeId(0)).iter().all(Option::is_some)
    }
}

/// Hop distances from `src`; `None` marks unreachable nodes. Neighbors are
/// scanned in ascending id order.
pub fn bfs_distances(adj: &Adjacency, src: NodeId) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.n()];
    let mut queue = VecDeque::new();
    dist[src.0] = Some(0);
    queue.push_back(src);
    while let Some(x) = queue.pop_front() {
        let d = dist[x.0].expect("queued nodes have a distance");
        for &y in adj.neighbors(x) {
            if dist[y.0].is_none() {
                dist[y.0] = Some(d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k5_minus(u: usize, v: usize) -> Adjacency {
        let mut pairs = Vec::new();
        for a in 0..5 {
            for b in a + 1..5 {
                if (a, b) != (u.min(v), u.max(v)) {
                    pairs.push((NodeId(a), NodeId(b)));
                }
            }
        }
        Adjacency::from_edges(5, pairs)
    }

    #[test]
    fn bfs_on_path() {
        let adj = Adjacency::from_edges(3, [(NodeId(0), NodeId(1)), (NodeId(1), NodeId(2))]);
        assert_eq!(
            bfs_distances(&adj, NodeId(0)),
            vec![Some(0), Some(1), Some(2)]
        );
    }

    #[test]
    fn bfs_flags_unreachable() {
        let adj = Adjacency::from_edges(3, [(NodeId(0), NodeId(1))]);
        assert_eq!(bfs_distances(&adj, NodeId(0))[2], None);
        assert!(!adj.is_connected());
    }

    #[test]
    fn bfs_on_gadget() {
        let adj = k5_minus(0, 1);
        let d = bfs_distances(&adj, NodeId(0));
        assert_eq!(d, vec![Some(0), Some(2), Some(1), Some(1), Some(1)]);
    }

    #[test]
    fn ports_ascend_with_neighbor_id() {
        let g = PortGraph::from_pairs(4, &[(2, 0), (0, 1), (0, 3), (1, 2)]).unwrap();
        assert_eq!(g.port(NodeId(0), NodeId(1)), Some(1));
        assert_eq!(g.port(NodeId(0), NodeId(2)), Some(2));
        assert_eq!(g.port(NodeId(0), NodeId(3)), Some(3));
        assert_eq!(g.neighbor(NodeId(0), 2), Some((NodeId(2), EdgeId(0))));
        assert_eq!(g.neighbor(NodeId(0), 4), None);
        assert_eq!(g.neighbor(NodeId(0), 0), None);
    }

    #[test]
    fn rejects_malformed_graphs() {
        assert_eq!(
            PortGraph::from_pairs(2, &[(0, 0)]),
            Err(GraphError::SelfLoop(0))
        );
        assert_eq!(
            PortGraph::from_pairs(2, &[(0, 1), (1, 0)]),
            Err(GraphError::ParallelEdge(1, 0))
        );
        assert_eq!(
            PortGraph::from_pairs(3, &[(0, 1)]),
            Err(GraphError::Disconnected)
        );
        let bad = vec![Edge {
            u: NodeId(0),
            v: NodeId(1),
            port_u: 2,
            port_v: 1,
        }];
        assert!(matches!(
            PortGraph::with_ports(2, bad),
            Err(GraphError::BadPort { node: 0, .. })
        ));
    }
}
