//! Staff-scale sweep written to disk exactly as `hss sweep` would.
//!
//!     cargo run --release --example seed_sweep -- /tmp/staff-sweep

use hss::commands::{cmd_sweep, sweep_summary_csv, SweepSpec};
use hss::config::Lever;
use std::path::PathBuf;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("hss-staff-sweep"));
    let spec = SweepSpec {
        lever: Lever::StaffScale,
        values: vec![1.0, 2.0, 3.0],
        seeds: (1..=10).collect(),
        jobs: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    };
    let config = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/toy.json");
    let (dir, result) = cmd_sweep(config, &spec, Some(out))?;
    print!("{}", sweep_summary_csv(&result));
    println!("files in {}", dir.display());
    Ok(())
}
