use proptest::prelude::*;

use interval_explore::experiments::{explore_run, Algo, ExploreSpec};
use interval_explore::generators::{gen_hard_instance, gen_instance, GenConfig};
use interval_explore::graph::{
    bfs_distances, check_log_inequality, verify_interval_connectivity, Adjacency, EdgeId,
    FixedSchedule, Interval, NodeId, PortGraph, ScheduleDoc,
};

/// A connected graph: a random recursive tree plus extra pairs.
fn connected_pairs(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2..=max_n).prop_flat_map(|n| {
        let parents: Vec<_> = (1..n).map(|v| 0..v).collect();
        let extra = prop::collection::vec((0..n, 0..n), 0..2 * n);
        (Just(n), parents, extra).prop_map(|(n, parents, extra)| {
            let mut pairs: Vec<(usize, usize)> = parents
                .into_iter()
                .enumerate()
                .map(|(i, p)| (p, i + 1))
                .collect();
            for (a, b) in extra {
                let key = (a.min(b), a.max(b));
                if a != b && !pairs.contains(&key) {
                    pairs.push(key);
                }
            }
            (n, pairs)
        })
    })
}

fn gen_config() -> impl Strategy<Value = GenConfig> {
    (4usize..=16).prop_flat_map(|n| {
        (
            Just(n),
            n..=n * (n - 1) / 2,
            1u64..40,
            any::<u64>(),
            0.0..=1.0f64,
        )
            .prop_map(|(n, m, t, seed, churn)| GenConfig {
                n,
                m,
                t,
                seed,
                churn,
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ports_form_a_bijection((n, pairs) in connected_pairs(20)) {
        let g = PortGraph::from_pairs(n, &pairs).unwrap();
        for v in g.nodes() {
            let mut seen: Vec<usize> = g.incident(v).iter().map(|&(_, e)| g.edge(e).port_at(v)).collect();
            seen.sort_unstable();
            prop_assert_eq!(seen, (1..=g.degree(v)).collect::<Vec<_>>());
            for &(u, e) in g.incident(v) {
                let p = g.edge(e).port_at(v);
                prop_assert_eq!(g.neighbor(v, p), Some((u, e)));
            }
        }
    }

    #[test]
    fn bfs_matches_floyd_warshall((n, pairs) in connected_pairs(16)) {
        let adj = Adjacency::from_edges(n, pairs.iter().map(|&(a, b)| (NodeId(a), NodeId(b))));
        let inf = usize::MAX / 4;
        let mut d = vec![vec![inf; n]; n];
        for (v, row) in d.iter_mut().enumerate() {
            row[v] = 0;
        }
        for &(a, b) in &pairs {
            d[a][b] = 1;
            d[b][a] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
                }
            }
        }
        for (s, row) in d.iter().enumerate() {
            let bfs = bfs_distances(&adj, NodeId(s));
            let fw: Vec<Option<usize>> = row.iter().map(|&x| (x < inf).then_some(x)).collect();
            prop_assert_eq!(bfs, fw);
        }
    }

    #[test]
    fn generated_schedules_keep_their_window(cfg in gen_config(), horizon in 1u64..120) {
        for s in [gen_instance(&cfg, horizon).unwrap(), gen_hard_instance(&cfg, horizon).unwrap()] {
            let w = cfg.t.min(horizon);
            prop_assert!(verify_interval_connectivity(&s, w).unwrap().is_connected());
            prop_assert_eq!(s.graph().m(), cfg.m);
        }
    }

    #[test]
    fn json_round_trip(cfg in gen_config(), horizon in 1u64..80) {
        let s = gen_hard_instance(&cfg, horizon).unwrap();
        let doc = ScheduleDoc::from_schedule(&s);
        let back = ScheduleDoc::from_json(&doc.to_json()).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.to_schedule().unwrap(), s);
    }

    #[test]
    fn generation_is_deterministic(cfg in gen_config()) {
        prop_assert_eq!(gen_instance(&cfg, 60).unwrap(), gen_instance(&cfg, 60).unwrap());
        prop_assert_eq!(gen_hard_instance(&cfg, 60).unwrap(), gen_hard_instance(&cfg, 60).unwrap());
    }

    #[test]
    fn connectivity_is_monotone_in_the_window(
        (n, pairs) in connected_pairs(8),
        horizon in 2usize..30,
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<bool>> = (0..horizon).map(|_| pairs.iter().map(|_| rng.gen_bool(0.85)).collect()).collect();
        let s = FixedSchedule::from_presence(PortGraph::from_pairs(n, &pairs).unwrap(), &rows);
        let verdicts: Vec<bool> = (1..=horizon as u64)
            .map(|t| verify_interval_connectivity(&s, t).unwrap().is_connected())
            .collect();
        for pair in verdicts.windows(2) {
            prop_assert!(pair[0] || !pair[1]);
        }
    }

    #[test]
    fn a_persistent_tree_connects_every_window(
        (n, pairs) in connected_pairs(10),
        gaps in prop::collection::vec((0usize..64, 0u64..40, 0u64..5), 0..30),
    ) {
        // The first n - 1 pairs form the tree; only the others drop out.
        let extra = pairs.len() - (n - 1);
        let absences: Vec<(EdgeId, Interval)> = if extra == 0 {
            Vec::new()
        } else {
            gaps.iter().map(|&(e, from, len)| (EdgeId(n - 1 + e % extra), Interval::new(from, from + len))).collect()
        };
        let g = PortGraph::from_pairs(n, &pairs).unwrap();
        let s = FixedSchedule::new(g, absences, 50, None).unwrap();
        prop_assert!(verify_interval_connectivity(&s, 50).unwrap().is_connected());
    }

    #[test]
    fn log_inequality_holds(x in 1e-6..=10.0f64, n in 3u64..=1_000_000) {
        prop_assert!(check_log_inequality(x, n).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn runs_are_reproducible(n in 5usize..20, seed in any::<u64>(), ge1 in any::<bool>()) {
        let algo = if ge1 { Algo::Ge1 } else { Algo::Ge0 };
        let mut spec = ExploreSpec::new(n, 2 * n, algo);
        spec.seed = seed;
        let a = explore_run(&spec, 0).unwrap();
        let b = explore_run(&spec, 0).unwrap();
        prop_assert_eq!(a.trace.to_jsonl(), b.trace.to_jsonl());
        prop_assert_eq!(a.row, b.row);
    }
}
