//! Prints the delivery decision for one appointment under every combination
//! of worker presence, remaining time, consumables and mode.
//!
//!     cargo run --example feasibility_modes

use hss::ids::CadreId;
use hss::minutes::Tenths;
use hss::production::{feasible, AppointmentFootprint, ConsumableStatus, Mode};

fn main() {
    let footprint = AppointmentFootprint::from_minutes(&[(CadreId(0), 10.0), (CadreId(1), 5.0)]).unwrap();
    let cases: [(&str, [u32; 2], [f64; 2]); 4] = [
        ("both cadres, plenty of time", [1, 2], [60.0, 60.0]),
        ("nurse absent", [1, 0], [60.0, 0.0]),
        ("clinician has 9.9 min left", [1, 2], [9.9, 60.0]),
        ("nobody on shift", [0, 0], [0.0, 0.0]),
    ];
    let statuses = [
        ConsumableStatus::Available,
        ConsumableStatus::OptionalMissing,
        ConsumableStatus::EssentialMissing,
    ];
    println!("footprint: clinician 10 min, nurse 5 min\n");
    for (label, staff, minutes) in cases {
        let remaining: Vec<Tenths> = minutes.iter().map(|m| Tenths::from_minutes_floor(*m)).collect();
        println!("{label}");
        for status in statuses {
            let row: Vec<String> = [Mode::Unconstrained, Mode::Presence, Mode::TimeLedger]
                .iter()
                .map(|m| format!("{:?}", feasible(&footprint, &remaining, &staff, status, *m)))
                .collect();
            println!("  {:<17} {}", format!("{status:?}"), row.join(" | "));
        }
    }
}
