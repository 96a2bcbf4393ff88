use super::{null_presence, pad_with_nulls, AdversaryError, AdversaryInstance, Confinement};
use crate::graph::{EdgeId, NodeId, PortGraph};
use crate::sim::{Environment, History};

struct Episode {
    conf: Confinement,
    entry: u64,
}

struct GadgetSlot {
    lo: usize,
    g: usize,
    edges: Vec<EdgeId>,
    episode: Option<Episode>,
    /// Last step at which one of the gadget's edges was absent.
    last_absent: Option<u64>,
}

impl GadgetSlot {
    fn u(&self) -> NodeId {
        NodeId(self.lo)
    }

    fn v(&self) -> NodeId {
        NodeId(self.lo + 1)
    }

    fn is_trap(&self, w: NodeId) -> bool {
        w.0 >= self.lo + 2 && w.0 < self.lo + self.g
    }

    fn clean(&self, t: u64, window: u64) -> bool {
        self.episode.is_none() && self.last_absent.is_none_or(|a| t >= a + window)
    }
}

/// Two gadgets `K^1`, `K^2` joined through `x`, `y`, `z` and `v1 - v2`, with
/// a path hanging off `x`. The node `y` is hidden: `{x, y}` is absent exactly
/// while the agent is at `x`, `{y, z}` exactly while it is at `z`. Entering a
/// trap of a gadget with no absent edge in the last `T` steps starts a
/// blocking episode there that lasts `T` steps; afterwards its edges come
/// back.
pub struct DenseWindowAdversary {
    graph: PortGraph,
    null_from: usize,
    window: u64,
    slots: [GadgetSlot; 2],
    next: usize,
    x: NodeId,
    z: NodeId,
    xy: EdgeId,
    yz: EdgeId,
    episodes: u64,
}

impl DenseWindowAdversary {
    /// Index (0 or 1) of the gadget that confines next.
    pub fn next(&self) -> usize {
        self.next
    }

    /// Number of blocking episodes started so far.
    pub fn episodes(&self) -> u64 {
        self.episodes
    }
}

impl Environment for DenseWindowAdversary {
    fn graph(&self) -> &PortGraph {
        &self.graph
    }

    fn commit(&mut self, t: u64, history: &History<'_>) -> Vec<bool> {
        let cur = history.current();
        let mut present = vec![true; self.graph.m()];
        for i in 0..2 {
            let slot = &mut self.slots[i];
            if slot
                .episode
                .as_ref()
                .is_some_and(|ep| t >= ep.entry + self.window)
            {
                slot.episode = None;
                self.next = 1 - i;
            }
            let enter = slot.is_trap(cur) && slot.clean(t, self.window);
            match slot.episode.as_mut() {
                Some(ep) => {
                    if t > ep.entry {
                        ep.conf.after_move(cur);
                    }
                    ep.conf.before_move(&self.graph, cur);
                }
                None if enter => {
                    let mut conf = Confinement::new(
                        (slot.lo..slot.lo + slot.g).map(NodeId),
                        slot.u(),
                        slot.v(),
                        cur,
                    );
                    conf.before_move(&self.graph, cur);
                    slot.episode = Some(Episode { conf, entry: t });
                    self.episodes += 1;
                }
                None => {}
            }
            if let Some(ep) = &slot.episode {
                let mut any = false;
                for &e in &slot.edges {
                    if ep.conf.is_deleted(e) {
                        present[e.0] = false;
                        any = true;
                    }
                }
                if any {
                    slot.last_absent = Some(t);
                }
            }
        }
        present[self.xy.0] = cur != self.x;
        present[self.yz.0] = cur != self.z;
        null_presence(&self.graph, self.null_from, cur, &mut present);
        present
    }
}

/// Layout of [`window_lower_dense`]: gadget size and base edge count.
pub fn dense_layout(n: usize, m: usize) -> (usize, usize) {
    let g = (m / 8).isqrt();
    let base = 2 * (g * (g.saturating_sub(1)) / 2 - 1) + n.saturating_sub(2 * g + 4) + 6;
    (g, base)
}

/// Nodes: `K^1` on `0..g` (gates 0, 1), `K^2` on `g..2g` (gates `g`, `g+1`),
/// `x = 2g`, `y = 2g+1`, `z = 2g+2`, path on `2g+3..n`. Window `⌊c'·m⌋`;
/// the agent starts at the far end of the path.
pub fn window_lower_dense(
    n: usize,
    m: usize,
    c_prime: f64,
) -> Result<AdversaryInstance, AdversaryError> {
    if m < 2 * n || m > n * (n - 1) / 2 {
        return Err(AdversaryError::Params(format!(
            "need 2n <= m <= n(n-1)/2, got n = {n}, m = {m}"
        )));
    }
    let (g, _) = dense_layout(n, m);
    if g < 6 || 2 * g + 4 > n {
        return Err(AdversaryError::Params(format!(
            "gadget size {g} needs 6 <= g and 2g + 4 <= n"
        )));
    }
    let window = (c_prime * m as f64).floor() as u64;
    if c_prime.is_nan() || c_prime <= 0.0 || window == 0 {
        return Err(AdversaryError::Params(format!(
            "c' = {c_prime} gives an empty window"
        )));
    }
    let (x, y, z) = (2 * g, 2 * g + 1, 2 * g + 2);
    let p1 = 2 * g + 3;
    let mut pairs = Vec::new();
    let mut gadget_edges = [Vec::new(), Vec::new()];
    for (k, lo) in [0, g].into_iter().enumerate() {
        for a in 0..g {
            for b in a + 1..g {
                if (a, b) != (0, 1) {
                    gadget_edges[k].push(EdgeId(pairs.len()));
                    pairs.push((lo + a, lo + b));
                }
            }
        }
    }
    pairs.extend((p1..n - 1).map(|i| (i, i + 1)));
    pairs.push((0, x));
    let xy = EdgeId(pairs.len());
    pairs.push((x, y));
    let yz = EdgeId(pairs.len());
    pairs.push((y, z));
    pairs.push((z, g));
    pairs.push((1, g + 1));
    pairs.push((x, p1));
    let null_from = pad_with_nulls(n, &mut pairs, m)?;
    let graph = PortGraph::from_pairs(n, &pairs)?;
    let [e1, e2] = gadget_edges;
    let slot = |lo, edges| GadgetSlot {
        lo,
        g,
        edges,
        episode: None,
        last_absent: None,
    };
    Ok(AdversaryInstance {
        name: "window-dense",
        env: Box::new(DenseWindowAdversary {
            graph,
            null_from,
            window,
            slots: [slot(0, e1), slot(g, e2)],
            next: 0,
            x: NodeId(x),
            z: NodeId(z),
            xy,
            yz,
            episodes: 0,
        }),
        start: NodeId(n - 1),
        forbidden: vec![NodeId(y)],
        guaranteed_steps: u64::MAX,
        claimed_t: Some(window),
    })
}

/// Cycle `0..n` padded with null edges. `{v0, v1}` is absent while the agent
/// is at `v0`, `{v1, v2}` while it is at `v2`.
pub struct SparseWindowAdversary {
    graph: PortGraph,
    null_from: usize,
}

impl Environment for SparseWindowAdversary {
    fn graph(&self) -> &PortGraph {
        &self.graph
    }

    fn commit(&mut self, _t: u64, history: &History<'_>) -> Vec<bool> {
        let cur = history.current();
        let mut present = vec![true; self.graph.m()];
        present[0] = cur != NodeId(0);
        present[1] = cur != NodeId(2);
        null_presence(&self.graph, self.null_from, cur, &mut present);
        present
    }
}

/// Window `n - 3`; the agent starts opposite `v1`, at `v_{⌊n/2⌋}`.
pub fn window_lower_sparse(n: usize, m: usize) -> Result<AdversaryInstance, AdversaryError> {
    if n < 5 || m < n || m >= 2 * n {
        return Err(AdversaryError::Params(format!(
            "need n >= 5 and n <= m < 2n, got n = {n}, m = {m}"
        )));
    }
    let mut pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    let null_from = pad_with_nulls(n, &mut pairs, m)?;
    let graph = PortGraph::from_pairs(n, &pairs)?;
    Ok(AdversaryInstance {
        name: "window-sparse",
        env: Box::new(SparseWindowAdversary { graph, null_from }),
        start: NodeId(n / 2),
        forbidden: vec![NodeId(1)],
        guaranteed_steps: u64::MAX,
        claimed_t: Some(n as u64 - 3),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_layout_matches_edge_count() {
        let (g, base) = dense_layout(60, 300);
        assert_eq!((g, base), (6, 78));
        let inst = window_lower_dense(60, 300, 1.0 / 32.0).unwrap();
        assert_eq!(inst.env.graph().m(), 300);
        assert_eq!(inst.claimed_t, Some(9));
        assert_eq!(inst.forbidden, vec![NodeId(13)]);
    }

    #[test]
    fn x_hides_y() {
        let mut inst = window_lower_dense(60, 300, 1.0 / 32.0).unwrap();
        let positions = [NodeId(12)];
        let present = inst.env.commit(
            0,
            &History {
                positions: &positions,
            },
        );
        let xy = inst
            .env
            .graph()
            .edge_between(NodeId(12), NodeId(13))
            .unwrap();
        assert!(!present[xy.0]);
        let yz = inst
            .env
            .graph()
            .edge_between(NodeId(13), NodeId(14))
            .unwrap();
        assert!(present[yz.0]);
    }

    #[test]
    fn sparse_parameters() {
        assert!(window_lower_sparse(20, 40).is_err());
        let inst = window_lower_sparse(20, 25).unwrap();
        assert_eq!(inst.env.graph().m(), 25);
        assert_eq!(inst.claimed_t, Some(17));
    }
}
