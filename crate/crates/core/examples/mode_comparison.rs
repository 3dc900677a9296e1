//! Runs the desk scenario under modes 0, 1 and 2 with shared seeds and
//! reports DALYs averted by relaxing each constraint.
//!
//!     cargo run --release --example mode_comparison -- 5

use hss::burden::dalys_averted;
use hss::engine::Simulation;
use hss::{Mode, ScenarioConfig};

fn run_mode(scenario: &hss::Scenario, seed: u64, mode: Mode) -> hss::RunSummary {
    let mut sim = Simulation::with_mode(scenario, seed, mode);
    while !sim.is_finished() {
        sim.step().expect("run completes");
    }
    sim.finish().summary
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seeds: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(3);
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/desk.json");
    let scenario = ScenarioConfig::load(path)?.validate()?;

    println!("seed   mode0 DALYs  mode1 DALYs  mode2 DALYs  averted 2->1  averted 1->0");
    for seed in 1..=seeds {
        let runs: Vec<_> = [Mode::Unconstrained, Mode::Presence, Mode::TimeLedger]
            .iter()
            .map(|m| run_mode(&scenario, seed, *m))
            .collect();
        let relax_time = dalys_averted(&runs[2], &runs[1])?;
        let relax_presence = dalys_averted(&runs[1], &runs[0])?;
        println!(
            "{seed:>4} {:>12.1} {:>12.1} {:>12.1} {:>13.1} {:>13.1}",
            runs[0].total_dalys, runs[1].total_dalys, runs[2].total_dalys, relax_time.total, relax_presence.total
        );
    }
    Ok(())
}
