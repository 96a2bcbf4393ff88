//! Replays a one-hop greedy run and prints its potential charges.

use interval_explore::experiments::{explore_run, Algo, ExploreSpec};

fn main() -> anyhow::Result<()> {
    let spec = ExploreSpec::new(25, 80, Algo::Ge1);
    let r = explore_run(&spec, 0)?;
    let ins = r
        .trace
        .instrumentation
        .as_ref()
        .expect("ge1 runs are instrumented");
    let n = spec.n;
    println!("termination time     {}", r.trace.moves());
    println!("n + sum of charges   {}", ins.time_bound(n));
    println!(
        "node charges         {} (cap 2 n log2 n = {:.1})",
        ins.sum_iota_v(),
        2.0 * n as f64 * (n as f64).log2()
    );
    println!("edge charges         {}", ins.sum_iota_e());
    println!("revisit drops        {}", ins.extra_drops);
    println!(
        "distance per step    {:?}",
        &ins.d_cur[..ins.d_cur.len().min(20)]
    );
    Ok(())
}
