//! Generates a churned instance and a tree-rotating one, checks both with the
//! oracle and prints the start of the JSON dump.

use interval_explore::generators::{gen_hard_instance, gen_instance, GenConfig};
use interval_explore::graph::{verify_interval_connectivity, ScheduleDoc};

fn main() -> anyhow::Result<()> {
    let cfg = GenConfig {
        n: 20,
        m: 60,
        t: 25,
        seed: 7,
        churn: 0.5,
    };
    for (name, s) in [
        ("churned", gen_instance(&cfg, 200)?),
        ("rotating", gen_hard_instance(&cfg, 200)?),
    ] {
        let absences = s.all_absences().count();
        let at_t = verify_interval_connectivity(&s, cfg.t)?;
        let whole = verify_interval_connectivity(&s, s.horizon())?;
        println!(
            "{name}: {absences} absence intervals, T = {}: {at_t:?}, whole horizon: {whole:?}",
            cfg.t
        );
    }
    let json = ScheduleDoc::from_schedule(&gen_instance(&cfg, 200)?).to_json();
    println!("{}...", &json[..json.len().min(160)]);
    Ok(())
}
