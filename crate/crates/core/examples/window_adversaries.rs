//! Dense and sparse window-size adversaries: the hidden node is never reached
//! although the realized schedule keeps the declared window.

use interval_explore::experiments::{run_attack, Algo, Attack, AttackSpec};

fn main() -> anyhow::Result<()> {
    for (attack, n, m) in [
        (Attack::WindowDense, 60, 300),
        (Attack::WindowSparse, 20, 25),
    ] {
        for algo in [Algo::Ge1, Algo::Ge0] {
            let out = run_attack(&AttackSpec::new(attack, n, m, algo))?;
            println!(
                "{attack:?} vs {algo}: {} steps, terminated {}, hidden node reached {}, window {:?} ok {}",
                out.trace.moves(),
                out.trace.terminated(),
                out.verdict.forbidden_reached,
                out.instance.claimed_t,
                out.verdict.oracle_t_ok
            );
        }
    }
    Ok(())
}
