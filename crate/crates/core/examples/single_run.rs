//! Loads a scenario file, runs it once and prints the burden and delivery
//! summary. Pass a path to run another scenario.
//!
//!     cargo run --release --example single_run -- crates/core/scenarios/desk.json 4

use hss::{run, ScenarioConfig};
use std::path::PathBuf;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/toy.json"));
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);

    let scenario = ScenarioConfig::load(&path)?.validate()?;
    let result = run(&scenario, seed)?;
    let s = &result.summary;

    println!(
        "{} seed {} mode {} ({} days)",
        s.scenario, s.master_seed, s.mode, s.days
    );
    println!(
        "population: {} at start, {} births, {} background deaths, {} disease deaths, {} alive",
        s.population.initial_size,
        s.population.births,
        s.population.background_deaths,
        s.population.disease_deaths,
        s.population.final_alive
    );
    println!("total DALYs {:.1}", s.total_dalys);
    for (cause, dalys) in hss::burden::dalys_by_cause(&s.dalys) {
        println!("  {cause:<16} {dalys:>10.1}");
    }
    println!("HSIs generated {}", s.hsis_generated);
    for row in &s.delivery_by_facility_disease {
        let c = row.counts;
        println!(
            "  {:<12} {:<14} delivered {:>6}  expired {:>5}  cancelled {:>5}",
            row.facility, row.disease, c.delivered, c.expired, c.cancelled
        );
    }
    for u in &s.mean_utilization {
        println!("  mean utilisation {} {}: {:.2}", u.facility, u.cadre, u.utilization);
    }
    Ok(())
}
