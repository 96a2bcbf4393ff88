//! Both greedy explorers on the same generated instance.

use interval_explore::experiments::{explore_run, Algo, ExploreSpec};

fn main() -> anyhow::Result<()> {
    for algo in [Algo::Ge1, Algo::Ge0] {
        let mut spec = ExploreSpec::new(30, 120, algo);
        spec.seed = 3;
        spec.churn = 0.7;
        let r = explore_run(&spec, 0)?;
        let row = &r.row;
        println!(
            "{algo} ({}): {} steps, visited {}/{}, redundant moves {}, steps/tau = {:.4}",
            row.model, row.steps, row.visited, row.n, row.redundant_moves, row.bound_ratio
        );
    }
    Ok(())
}
