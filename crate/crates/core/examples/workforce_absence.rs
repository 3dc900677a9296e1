//! Effect of worker absence on capacity and on services delivered, using the
//! sweep machinery over the absence lever.
//!
//!     cargo run --release --example workforce_absence

use hss::commands::{sweep, SweepSpec};
use hss::config::Lever;
use hss::production::{effective_minutes, CapacityShifters};
use hss::ScenarioConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let absent = CapacityShifters {
        absence_rate: 0.347,
        ..CapacityShifters::default()
    };
    println!(
        "10 staff x 240 min with 34.7% absence: {} min/day",
        effective_minutes(10, 240.0, &absent)
    );

    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/toy.json");
    // four workers per facility so that absence removes capacity gradually
    let config = ScenarioConfig::load(path)?.with_lever(Lever::StaffScale, 4.0);
    let spec = SweepSpec {
        lever: Lever::AbsenceRate,
        values: vec![0.0, 0.347, 0.6, 0.8],
        seeds: (1..=8).collect(),
        jobs: 4,
    };
    let result = sweep(&config, &spec)?;
    println!("\nabsence  delivered  mean DALYs  averted vs none (sd)");
    for a in &result.aggregates {
        println!(
            "{:>7.3} {:>10.1} {:>11.1} {:>12.1} ({:.1})",
            a.value, a.mean_delivered, a.mean_dalys, a.mean_averted, a.sd_averted
        );
    }
    Ok(())
}
