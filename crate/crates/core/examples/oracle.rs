//! Interval-connectivity oracle on a 4-cycle whose edges take turns dropping
//! out.

use interval_explore::graph::{
    verify_interval_connectivity, EdgeId, FixedSchedule, Interval, PortGraph,
};

fn main() -> anyhow::Result<()> {
    let g = PortGraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])?;
    // Edge 0 is absent at even steps, edge 2 at odd steps.
    let absences =
        (0..10u64).map(|t| (EdgeId(if t % 2 == 0 { 0 } else { 2 }), Interval::new(t, t)));
    let schedule = FixedSchedule::new(g, absences, 10, None)?;
    for t in 1..=3 {
        println!("T = {t}: {:?}", verify_interval_connectivity(&schedule, t)?);
    }
    Ok(())
}
