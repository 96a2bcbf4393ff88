//! Runs a small grid in parallel, saves it and re-runs it from disk.

use interval_explore::experiments::{explore_grid, replay_dir, save_grid, Algo, ExploreSpec};

fn main() -> anyhow::Result<()> {
    let dir = std::env::temp_dir().join("interval-explore-grid");
    let mut spec = ExploreSpec::new(15, 40, Algo::Ge0);
    spec.reps = 8;
    let runs = explore_grid(&spec, 4)?;
    save_grid(&dir, &spec, &runs)?;
    for r in &runs {
        println!(
            "run {}: {} steps, explored {}",
            r.row.run,
            r.row.steps,
            r.row.visited == r.row.n
        );
    }
    let mismatches = replay_dir(&dir)?;
    println!(
        "replay of {}: {} mismatches",
        dir.display(),
        mismatches.len()
    );
    Ok(())
}
