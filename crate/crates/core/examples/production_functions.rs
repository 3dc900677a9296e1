//! Evaluates the three production-function families on the same inputs and
//! shows how CES approaches its two limits.
//!
//!     cargo run --example production_functions

use hss::ids::CadreId;
use hss::minutes::Tenths;
use hss::production::{AppointmentFootprint, ProductionFunction};

fn main() {
    // inputs are clinician and nurse minutes available in one day
    let inputs = [120.0, 300.0];
    let families = [
        (
            "leontief (15, 10)",
            ProductionFunction::Leontief {
                coefficients: vec![15.0, 10.0],
            },
        ),
        (
            "cobb-douglas",
            ProductionFunction::CobbDouglas {
                scale: 0.08,
                exponents: vec![0.6, 0.4],
            },
        ),
        (
            "ces rho=-2",
            ProductionFunction::Ces {
                scale: 0.08,
                shares: vec![0.6, 0.4],
                rho: -2.0,
            },
        ),
        (
            "ces rho=0.5",
            ProductionFunction::Ces {
                scale: 0.08,
                shares: vec![0.6, 0.4],
                rho: 0.5,
            },
        ),
    ];
    println!("inputs {inputs:?}");
    for (name, f) in &families {
        f.validate().expect("valid parameters");
        println!("  {name:<18} {:>8.3}", f.output(&inputs).unwrap());
    }

    println!("\nCES against its limits on a few input pairs:");
    let leontief = ProductionFunction::Leontief {
        coefficients: vec![1.0, 1.0],
    };
    let cobb = ProductionFunction::CobbDouglas {
        scale: 1.0,
        exponents: vec![0.5, 0.5],
    };
    for x in [[1.0, 1.0], [1.0, 1.1], [1.0, 2.0], [1.0, 8.0]] {
        let ces = |rho| {
            ProductionFunction::Ces {
                scale: 1.0,
                shares: vec![0.5, 0.5],
                rho,
            }
            .output(&x)
            .unwrap()
        };
        println!(
            "  x={x:?}  rho=-50 {:.4} vs min {:.4}   rho=1e-4 {:.6} vs cobb-douglas {:.6}",
            ces(-50.0),
            leontief.output(&x).unwrap(),
            ces(1e-4),
            cobb.output(&x).unwrap()
        );
    }

    // a footprint is a Leontief technology over cadres
    let visit = AppointmentFootprint::from_minutes(&[(CadreId(0), 15.0), (CadreId(1), 10.0)]).unwrap();
    let remaining = [Tenths::from_minutes_floor(120.0), Tenths::from_minutes_floor(300.0)];
    println!(
        "\nwith {} and {} minutes left, a 15+10 minute visit fits {} more times",
        remaining[0],
        remaining[1],
        visit.appointments_supported(&remaining)
    );
}
