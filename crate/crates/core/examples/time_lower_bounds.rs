//! Time lower bounds with and without a one-hop view.

use interval_explore::experiments::{run_attack, Algo, Attack, AttackSpec};
use interval_explore::sim::Model;

fn main() -> anyhow::Result<()> {
    let mut kt1 = AttackSpec::new(Attack::Kt1Time, 40, 400, Algo::Ge1);
    kt1.max_steps = 10_000;
    let mut kt0 = AttackSpec::new(Attack::Kt0Time, 30, 100, Algo::Ge0);
    kt0.model = Model::Kt0;
    kt0.max_steps = 10_000;
    for spec in [kt1, kt0] {
        let out = run_attack(&spec)?;
        let v = &out.verdict;
        println!(
            "{:?} vs {}: forbidden first reached at {:?}, guaranteed {}, holds {}",
            spec.attack,
            spec.algo,
            v.steps_until_forbidden,
            v.guaranteed,
            v.holds()
        );
    }
    Ok(())
}
