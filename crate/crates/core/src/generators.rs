//! Random interval-connected instances.
//!
//! The underlying graph is a uniform random spanning tree of `K_n` plus
//! `m - n + 1` further edges chosen uniformly without replacement. Time is cut
//! into blocks of `T` steps. In [`gen_instance`] the tree is present at every
//! step and each other edge, independently per block with probability
//! `churn`, is absent for one random sub-interval of the block. In
//! [`gen_hard_instance`] a fresh spanning tree of the underlying graph is drawn
//! for every block and only that tree is protected, so no single tree survives
//! the whole run.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{
    verify_interval_connectivity, EdgeId, FixedSchedule, GraphError, Interval, PortGraph,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenConfig {
    pub n: usize,
    pub m: usize,
    /// Declared window size.
    pub t: u64,
    pub seed: u64,
    /// Probability that an unprotected edge is knocked out in a given block.
    pub churn: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("invalid generator config: {0}")]
    Config(String),
    #[error("generated schedule is not {window}-interval connected (first violation [{from}..{to}]); retry with another seed")]
    Rotation { window: u64, from: u64, to: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), GenError> {
        let max_m = self.n * self.n.saturating_sub(1) / 2;
        if self.n < 3 {
            return Err(GenError::Config(format!("n = {} is below 3", self.n)));
        }
        if self.m < self.n || self.m > max_m {
            return Err(GenError::Config(format!(
                "m = {} outside [{}..{max_m}]",
                self.m, self.n
            )));
        }
        if self.t == 0 {
            return Err(GenError::Config("T must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.churn) {
            return Err(GenError::Config(format!(
                "churn {} outside [0, 1]",
                self.churn
            )));
        }
        Ok(())
    }
}

/// Aldous–Broder: the first-entrance edges of a random walk form a uniform
/// spanning tree. `adj` must describe a connected graph.
fn random_spanning_tree(adj: &[Vec<usize>], rng: &mut ChaCha8Rng) -> BTreeSet<(usize, usize)> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut cur = rng.gen_range(0..n);
    seen[cur] = true;
    let mut left = n - 1;
    let mut tree = BTreeSet::new();
    while left > 0 {
        let next = adj[cur][rng.gen_range(0..adj[cur].len())];
        if !seen[next] {
            seen[next] = true;
            left -= 1;
            tree.insert((cur.min(next), cur.max(next)));
        }
        cur = next;
    }
    tree
}

/// Underlying graph plus its witness tree, as sorted `(u, v)` pairs.
fn underlying(
    cfg: &GenConfig,
    rng: &mut ChaCha8Rng,
) -> (Vec<(usize, usize)>, BTreeSet<(usize, usize)>) {
    let n = cfg.n;
    let complete: Vec<Vec<usize>> = (0..n)
        .map(|v| (0..n).filter(|&u| u != v).collect())
        .collect();
    let tree = random_spanning_tree(&complete, rng);
    let others: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|e| !tree.contains(e))
        .collect();
    let extra = cfg.m - (n - 1);
    let mut picked: Vec<usize> = sample(rng, others.len(), extra).into_vec();
    picked.sort_unstable();
    let mut pairs: Vec<(usize, usize)> = tree
        .iter()
        .copied()
        .chain(picked.into_iter().map(|i| others[i]))
        .collect();
    pairs.sort_unstable();
    (pairs, tree)
}

fn check(schedule: &FixedSchedule, window: u64) -> Result<(), GenError> {
    let w = window.min(schedule.horizon());
    match verify_interval_connectivity(schedule, w)? {
        crate::graph::ConnectivityVerdict::Connected => Ok(()),
        crate::graph::ConnectivityVerdict::Violated { from, to } => Err(GenError::Rotation {
            window: w,
            from,
            to,
        }),
    }
}

/// Tree present throughout, other edges churned per block. Verified by the
/// oracle at `min(T, horizon)`.
pub fn gen_instance(cfg: &GenConfig, horizon: u64) -> Result<FixedSchedule, GenError> {
    cfg.validate()?;
    if horizon == 0 {
        return Err(GenError::Config("horizon must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (pairs, tree) = underlying(cfg, &mut rng);
    let graph = PortGraph::from_pairs(cfg.n, &pairs)?;
    let block = cfg.t.min(horizon);
    let mut absences = Vec::new();
    for (i, e) in pairs.iter().enumerate() {
        if tree.contains(e) {
            continue;
        }
        let mut start = 0;
        while start < horizon {
            let end = (start + block).min(horizon) - 1;
            if cfg.churn > 0.0 && rng.gen_bool(cfg.churn) {
                let from = rng.gen_range(start..=end);
                let len = rng.gen_range(1..=end - from + 1);
                absences.push((EdgeId(i), Interval::new(from, from + len - 1)));
            }
            start += block;
        }
    }
    let schedule = FixedSchedule::new(graph, absences, horizon, Some(cfg.t))?;
    check(&schedule, cfg.t)?;
    Ok(schedule)
}

/// A different spanning tree per block of `T` steps. The tree of block `b`
/// is protected from the start of block `b` to the end of the last window
/// starting in it; in each block, an unprotected edge is absent for all of its
/// unprotected steps with probability `churn`. Verified by the oracle at `T`.
pub fn gen_hard_instance(cfg: &GenConfig, horizon: u64) -> Result<FixedSchedule, GenError> {
    cfg.validate()?;
    if cfg.t >= horizon {
        return gen_instance(cfg, horizon);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (pairs, _) = underlying(cfg, &mut rng);
    let graph = PortGraph::from_pairs(cfg.n, &pairs)?;
    let adj: Vec<Vec<usize>> = graph
        .nodes()
        .map(|v| graph.incident(v).iter().map(|(u, _)| u.0).collect())
        .collect();

    let t = cfg.t;
    let blocks = horizon.div_ceil(t);
    let mut trees: Vec<BTreeSet<(usize, usize)>> = Vec::with_capacity(blocks as usize);
    for b in 0..blocks as usize {
        let mut tree = random_spanning_tree(&adj, &mut rng);
        if b > 0 && graph.m() >= cfg.n {
            for _ in 0..32 {
                if tree != trees[b - 1] {
                    break;
                }
                tree = random_spanning_tree(&adj, &mut rng);
            }
        }
        trees.push(tree);
    }

    let mut absences = Vec::new();
    for (i, e) in pairs.iter().enumerate() {
        for b in 0..blocks as usize {
            let start = b as u64 * t;
            let end = (start + t).min(horizon) - 1;
            let segment = if trees[b].contains(e) {
                None
            } else if b > 0 && trees[b - 1].contains(e) {
                // Still protected for windows that began in the previous block.
                (end == start + t - 1).then_some((end, end))
            } else {
                Some((start, end))
            };
            if let Some((from, to)) = segment {
                if cfg.churn > 0.0 && rng.gen_bool(cfg.churn) {
                    absences.push((EdgeId(i), Interval::new(from, to)));
                }
            }
        }
    }
    let schedule = FixedSchedule::new(graph, absences, horizon, Some(t))?;
    check(&schedule, t)?;
    Ok(schedule)
}
