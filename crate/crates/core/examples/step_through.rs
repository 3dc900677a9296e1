//! Steps a simulation day by day and prints what each phase produced.
//!
//!     cargo run --example step_through

use hss::{ScenarioConfig, Simulation};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/toy.json");
    let scenario = ScenarioConfig::load(path)?.validate()?;
    let mut sim = Simulation::new(&scenario, 42);

    println!("date        alive onsets deaths seek  due deliv cured defer expire");
    for _ in 0..21 {
        let r = sim.step()?;
        println!(
            "{} {:>6} {:>6} {:>6} {:>4} {:>4} {:>5} {:>5} {:>5} {:>6}",
            r.date.unwrap(),
            sim.population().living_count(),
            r.onsets.len(),
            r.background_deaths.len() + r.disease_deaths.len(),
            r.hsis_generated,
            r.hsis_due,
            r.delivered.len(),
            r.cured.len(),
            r.deferred,
            r.expired
        );
    }
    let ledger = &sim.ledgers()[0];
    println!(
        "\nlast ledger {}: consumed {} of {} clinician minutes",
        ledger.date, ledger.consumed[0], ledger.initial[0]
    );
    Ok(())
}
