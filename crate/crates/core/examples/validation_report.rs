//! Breaks a shipped scenario in several places and prints the full
//! validation report; every problem is listed in one pass.
//!
//!     cargo run --example validation_report

use hss::ScenarioConfig;

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/desk.json");
    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    doc["health_system"]["facilities"][0]["shifters"] = serde_json::json!({ "absence_rate": 1.2 });
    doc["diseases"][0]["treatment"]["footprint"]["pharmacist"] = 5.into();
    doc["diseases"][1]["states"][0]["symptoms"] = serde_json::json!(["rash"]);
    doc["analysis"]["production_functions"][2]["function"]["rho"] = 0.0.into();
    let config: ScenarioConfig = serde_json::from_value(doc).unwrap();
    match config.validate() {
        Ok(_) => println!("unexpectedly valid"),
        Err(report) => print!("{report}"),
    }
}
