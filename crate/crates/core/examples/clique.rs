//! Gadget confinement: how long each agent stays away from the gates.

use interval_explore::adversaries::confinement_bound;
use interval_explore::experiments::{run_attack, Algo, Attack, AttackSpec};

fn main() -> anyhow::Result<()> {
    for g in [10, 20, 30] {
        for algo in [Algo::Ge1, Algo::Ge0, Algo::LeftHand] {
            let mut spec = AttackSpec::new(Attack::Clique, g, 0, algo);
            spec.max_steps = 5_000;
            let out = run_attack(&spec)?;
            println!(
                "g = {g:2} {algo:9}: first gate visit {:?}, bound {}, oracle ok {}",
                out.verdict.steps_until_forbidden,
                confinement_bound(g),
                out.verdict.oracle_t_ok
            );
        }
    }
    Ok(())
}
