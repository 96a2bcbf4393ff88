use std::fmt;

use super::{EdgeId, GraphError, PortGraph, UnionFind};
use crate::sim::Environment;

/// Closed time interval `[from..to]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub from: u64,
    pub to: u64,
}

impl Interval {
    pub fn new(from: u64, to: u64) -> Self {
        debug_assert!(from <= to);
        Interval { from, to }
    }

    pub fn contains(&self, t: u64) -> bool {
        self.from <= t && t <= self.to
    }
}

/// Edge presence over time as sorted per-edge absence intervals. Every edge is
/// present at times not covered by an absence interval, including all times at
/// or after the horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedSchedule {
    graph: PortGraph,
    absences: Vec<Vec<Interval>>,
    horizon: u64,
    claimed_t: Option<u64>,
}

impl FixedSchedule {
    /// Intervals may arrive in any order; overlapping or touching intervals of
    /// the same edge are merged.
    pub fn new(
        graph: PortGraph,
        absences: impl IntoIterator<Item = (EdgeId, Interval)>,
        horizon: u64,
        claimed_t: Option<u64>,
    ) -> Result<Self, GraphError> {
        let mut per_edge = vec![Vec::new(); graph.m()];
        for (e, iv) in absences {
            if e.0 >= graph.m() {
                return Err(GraphError::Schedule(format!(
                    "edge index {} out of range",
                    e.0
                )));
            }
            if iv.from > iv.to {
                return Err(GraphError::Schedule(format!(
                    "interval [{}..{}] is reversed",
                    iv.from, iv.to
                )));
            }
            if iv.to >= horizon {
                return Err(GraphError::Schedule(format!(
                    "interval [{}..{}] reaches past horizon {horizon}",
                    iv.from, iv.to
                )));
            }
            per_edge[e.0].push(iv);
        }
        for list in &mut per_edge {
            list.sort_unstable();
            let mut merged: Vec<Interval> = Vec::with_capacity(list.len());
            for iv in list.drain(..) {
                match merged.last_mut() {
                    Some(last) if iv.from <= last.to.saturating_add(1) => {
                        last.to = last.to.max(iv.to);
                    }
                    _ => merged.push(iv),
                }
            }
            *list = merged;
        }
        Ok(FixedSchedule {
            graph,
            absences: per_edge,
            horizon,
            claimed_t,
        })
    }

    /// Every edge present at every step.
    pub fn static_graph(graph: PortGraph, horizon: u64) -> Self {
        let m = graph.m();
        FixedSchedule {
            graph,
            absences: vec![Vec::new(); m],
            horizon,
            claimed_t: None,
        }
    }

    /// Builds a schedule from one presence row per realized time step.
    pub fn from_presence(graph: PortGraph, rows: &[Vec<bool>]) -> Self {
        let m = graph.m();
        let mut absences = vec![Vec::new(); m];
        let mut open: Vec<Option<u64>> = vec![None; m];
        for (t, row) in rows.iter().enumerate() {
            let t = t as u64;
            for e in 0..m {
                match (row[e], open[e]) {
                    (false, None) => open[e] = Some(t),
                    (true, Some(start)) => {
                        absences[e].push(Interval::new(start, t - 1));
                        open[e] = None;
                    }
                    _ => {}
                }
            }
        }
        let end = rows.len() as u64;
        for e in 0..m {
            if let Some(start) = open[e] {
                absences[e].push(Interval::new(start, end - 1));
            }
        }
        FixedSchedule {
            graph,
            absences,
            horizon: end,
            claimed_t: None,
        }
    }

    pub fn graph(&self) -> &PortGraph {
        &self.graph
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn claimed_t(&self) -> Option<u64> {
        self.claimed_t
    }

    pub fn set_claimed_t(&mut self, t: Option<u64>) {
        self.claimed_t = t;
    }

    pub fn absences(&self, e: EdgeId) -> &[Interval] {
        &self.absences[e.0]
    }

    /// All `(edge, interval)` pairs, grouped by edge then ordered by start.
    pub fn all_absences(&self) -> impl Iterator<Item = (EdgeId, Interval)> + '_ {
        self.absences
            .iter()
            .enumerate()
            .flat_map(|(e, list)| list.iter().map(move |iv| (EdgeId(e), *iv)))
    }

    pub fn is_present(&self, e: EdgeId, t: u64) -> bool {
        self.present_throughout(e, t, t)
    }

    /// Whether `e` is present at every time in `[from..to]`.
    pub fn present_throughout(&self, e: EdgeId, from: u64, to: u64) -> bool {
        let list = &self.absences[e.0];
        // First interval that ends at or after `from`.
        let i = list.partition_point(|iv| iv.to < from);
        list.get(i).is_none_or(|iv| iv.from > to)
    }

    pub fn present_at(&self, t: u64) -> Vec<bool> {
        (0..self.graph.m())
            .map(|e| self.is_present(EdgeId(e), t))
            .collect()
    }
}

/// Either a fixed presence table or an adaptive adversary.
pub enum Schedule {
    Fixed(FixedSchedule),
    Adaptive(Box<dyn Environment>),
}

impl Schedule {
    pub fn graph(&self) -> &PortGraph {
        match self {
            Schedule::Fixed(s) => s.graph(),
            Schedule::Adaptive(env) => env.graph(),
        }
    }

    pub fn as_env(&mut self) -> &mut dyn Environment {
        match self {
            Schedule::Fixed(s) => s,
            Schedule::Adaptive(env) => env.as_mut(),
        }
    }
}

impl fmt::Debug for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::Fixed(s) => f.debug_tuple("Fixed").field(s).finish(),
            Schedule::Adaptive(_) => f.write_str("Adaptive(..)"),
        }
    }
}

fn check_window(s: &FixedSchedule, from: u64, to: u64) -> Result<(), GraphError> {
    if from > to || to >= s.horizon() {
        return Err(GraphError::Range {
            from,
            to,
            horizon: s.horizon(),
        });
    }
    Ok(())
}

/// Edges present at every time in `[from..to]`.
pub fn intersection_graph(
    s: &FixedSchedule,
    from: u64,
    to: u64,
) -> Result<Vec<EdgeId>, GraphError> {
    check_window(s, from, to)?;
    Ok((0..s.graph().m())
        .map(EdgeId)
        .filter(|&e| s.present_throughout(e, from, to))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConnectivityVerdict {
    Connected,
    /// The first window whose intersection graph is disconnected.
    Violated {
        from: u64,
        to: u64,
    },
}

impl ConnectivityVerdict {
    pub fn is_connected(&self) -> bool {
        matches!(self, ConnectivityVerdict::Connected)
    }
}

/// Checks every window `[t..t+T-1]` with `t + T <= horizon`.
pub fn verify_interval_connectivity(
    s: &FixedSchedule,
    window: u64,
) -> Result<ConnectivityVerdict, GraphError> {
    if window == 0 {
        return Err(GraphError::Domain("window size must be at least 1".into()));
    }
    if s.horizon() < window {
        return Err(GraphError::Range {
            from: 0,
            to: window - 1,
            horizon: s.horizon(),
        });
    }
    let n = s.graph().n();
    for start in 0..=s.horizon() - window {
        let end = start + window - 1;
        let mut uf = UnionFind::new(n);
        for (i, e) in s.graph().edges().iter().enumerate() {
            if s.present_throughout(EdgeId(i), start, end) {
                uf.union(e.u.0, e.v.0);
                if uf.components() == 1 {
                    break;
                }
            }
        }
        if uf.components() > 1 {
            return Ok(ConnectivityVerdict::Violated {
                from: start,
                to: end,
            });
        }
    }
    Ok(ConnectivityVerdict::Connected)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// C4 on 0-1-2-3-0; {0,1} absent at even t, {2,3} absent at odd t.
    fn alternating_c4(horizon: u64) -> FixedSchedule {
        let g = PortGraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let mut abs = Vec::new();
        for t in 0..horizon {
            let e = if t % 2 == 0 { 0 } else { 2 };
            abs.push((EdgeId(e), Interval::new(t, t)));
        }
        FixedSchedule::new(g, abs, horizon, None).unwrap()
    }

    #[test]
    fn intersection_examples() {
        let s = alternating_c4(10);
        assert_eq!(
            intersection_graph(&s, 0, 1).unwrap(),
            vec![EdgeId(1), EdgeId(3)]
        );
        assert_eq!(
            intersection_graph(&s, 4, 4).unwrap(),
            vec![EdgeId(1), EdgeId(2), EdgeId(3)]
        );
        assert!(intersection_graph(&s, 5, 10).is_err());
        let g = s.graph().clone();
        let st = FixedSchedule::static_graph(g, 5);
        assert_eq!(intersection_graph(&st, 0, 4).unwrap().len(), 4);
    }

    #[test]
    fn verify_examples() {
        let s = alternating_c4(10);
        assert_eq!(
            verify_interval_connectivity(&s, 2).unwrap(),
            ConnectivityVerdict::Violated { from: 0, to: 1 }
        );
        assert!(verify_interval_connectivity(&s, 1).unwrap().is_connected());
        assert!(verify_interval_connectivity(&s, 11).is_err());
        let st = FixedSchedule::static_graph(s.graph().clone(), 10);
        for t in 1..=10 {
            assert!(verify_interval_connectivity(&st, t).unwrap().is_connected());
        }
    }

    #[test]
    fn merges_touching_intervals() {
        let g = PortGraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let s = FixedSchedule::new(
            g,
            [
                (EdgeId(0), Interval::new(4, 6)),
                (EdgeId(0), Interval::new(0, 2)),
                (EdgeId(0), Interval::new(3, 3)),
            ],
            10,
            None,
        )
        .unwrap();
        assert_eq!(s.absences(EdgeId(0)), &[Interval::new(0, 6)]);
        assert!(!s.is_present(EdgeId(0), 5));
        assert!(s.is_present(EdgeId(0), 7));
        assert!(s.is_present(EdgeId(0), 100));
    }

    #[test]
    fn presence_rows_round_trip() {
        let s = alternating_c4(7);
        let rows: Vec<Vec<bool>> = (0..7).map(|t| s.present_at(t)).collect();
        let back = FixedSchedule::from_presence(s.graph().clone(), &rows);
        assert_eq!(back, s);
    }
}
