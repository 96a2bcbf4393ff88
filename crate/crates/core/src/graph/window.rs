//! Closed-form window functions and the distance-sum bound used by the
//! potential analysis.

use super::{bfs_distances, Adjacency, GraphError, NodeId};

/// Parameters of the window function `tau`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowParams {
    pub n: usize,
    pub m: usize,
    pub c: u64,
}

impl WindowParams {
    pub fn new(n: usize, m: usize, c: u64) -> Result<Self, GraphError> {
        check_nm(n, m)?;
        if c == 0 {
            return Err(GraphError::Domain("c must be at least 1".into()));
        }
        Ok(WindowParams { n, m, c })
    }
}

fn check_nm(n: usize, m: usize) -> Result<(), GraphError> {
    if n < 3 {
        return Err(GraphError::Domain(format!("n = {n} < 3")));
    }
    if m < n {
        return Err(GraphError::Domain(format!("m = {m} < n = {n}")));
    }
    Ok(())
}

/// `ln n / (1 + ln m - ln n)`, the exponent for which `n^(1 + 1/eps) = e * m`.
pub fn epsilon(n: usize, m: usize) -> Result<f64, GraphError> {
    check_nm(n, m)?;
    let ln_n = (n as f64).ln();
    Ok(ln_n / (1.0 + (m as f64).ln() - ln_n))
}

/// `c * ceil(eps(n, m) * m + n * ln(n)^2)`.
pub fn tau(p: WindowParams) -> Result<u64, GraphError> {
    let eps = epsilon(p.n, p.m)?;
    if p.c == 0 {
        return Err(GraphError::Domain("c must be at least 1".into()));
    }
    let ln_n = (p.n as f64).ln();
    let inner = (eps * p.m as f64 + p.n as f64 * ln_n * ln_n).ceil() as u64;
    Ok(p.c * inner)
}

/// Whether `ln n < x * n^(1 / (2x))`. True on the whole domain; kept as a
/// property-test target.
pub fn check_log_inequality(x: f64, n: u64) -> Result<bool, GraphError> {
    if !x.is_finite() || x <= 0.0 {
        return Err(GraphError::Domain(format!("x = {x} must be positive")));
    }
    if n < 3 {
        return Err(GraphError::Domain(format!("n = {n} < 3")));
    }
    let n = n as f64;
    Ok(n.ln() < x * n.powf(1.0 / (2.0 * x)))
}

/// `sum_{i < n'} min_{j > i} d(v_i, v_j)` for the given visiting order.
///
/// Returns `None` if the graph is disconnected along the order.
pub fn ordered_distance_sum(adj: &Adjacency, order: &[NodeId]) -> Option<usize> {
    let mut total = 0;
    for (i, &v) in order.iter().enumerate().take(order.len().saturating_sub(1)) {
        let dist = bfs_distances(adj, v);
        let best = order[i + 1..].iter().map(|w| dist[w.0]).min()??;
        total += best;
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Solves `n^(1 + 1/eps) = e * m` for `eps` by bisection.
    fn epsilon_by_bisection(n: usize, m: usize) -> f64 {
        let target = 1.0 + (m as f64).ln();
        let ln_n = (n as f64).ln();
        // (1 + 1/eps) ln n is decreasing in eps.
        let (mut lo, mut hi) = (1e-9, 1e9);
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if (1.0 + 1.0 / mid) * ln_n > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn epsilon_examples() {
        let e = epsilon(3, 3).unwrap();
        assert!((e - 3f64.ln()).abs() < 1e-15);
        let e = epsilon(100, 4950).unwrap();
        assert!((e - 0.9395).abs() < 1e-4, "{e}");
        assert!((e - epsilon_by_bisection(100, 4950)).abs() < 1e-9);
    }

    #[test]
    fn epsilon_domain() {
        assert!(epsilon(2, 5).is_err());
        assert!(epsilon(5, 4).is_err());
    }

    #[test]
    fn tau_examples() {
        // 3 ln 3 + 3 ln^2 3 = 6.9168..., computed term by term.
        let ln3 = 1.0986122886681098_f64;
        let raw = 3.0 * ln3 + 3.0 * ln3 * ln3;
        assert!((raw - 6.9168).abs() < 1e-3);
        assert_eq!(tau(WindowParams::new(3, 3, 1).unwrap()).unwrap(), 7);
        assert_eq!(tau(WindowParams::new(3, 3, 16).unwrap()).unwrap(), 112);
        let a = tau(WindowParams::new(40, 300, 3).unwrap()).unwrap();
        let b = tau(WindowParams::new(40, 300, 6).unwrap()).unwrap();
        assert_eq!(b, 2 * a);
    }

    #[test]
    fn tau_is_monotone_on_grid() {
        for n in 3..40 {
            let max_m = n * (n - 1) / 2;
            let mut prev = 0;
            for m in n..=max_m.max(n) {
                let t = tau(WindowParams { n, m, c: 1 }).unwrap();
                assert!(t >= prev, "tau not monotone in m at n={n} m={m}");
                prev = t;
                if m < (n + 1) * n / 2 {
                    let up = tau(WindowParams {
                        n: n + 1,
                        m: m.max(n + 1),
                        c: 1,
                    })
                    .unwrap();
                    assert!(up >= t, "tau not monotone in n at n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn log_inequality_examples() {
        assert!(check_log_inequality(1.0, 3).unwrap());
        assert!(check_log_inequality(0.5, 1_000_000).unwrap());
        assert!(check_log_inequality(0.0, 3).is_err());
        assert!(check_log_inequality(1.0, 2).is_err());
    }

    #[test]
    fn distance_sum_on_path() {
        let adj = Adjacency::from_edges(
            4,
            [
                (NodeId(0), NodeId(1)),
                (NodeId(1), NodeId(2)),
                (NodeId(2), NodeId(3)),
            ],
        );
        let order = [NodeId(0), NodeId(3), NodeId(1), NodeId(2)];
        // f = [1 (0->1), 1 (3->2), 1 (1->2)]
        assert_eq!(ordered_distance_sum(&adj, &order), Some(3));
        assert_eq!(ordered_distance_sum(&adj, &[NodeId(2)]), Some(0));
    }
}
