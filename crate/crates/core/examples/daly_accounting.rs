//! DALY arithmetic for a single person: combined disability weights, the
//! proportional split across causes, and years of life lost.
//!
//!     cargo run --example daly_accounting

use hss::burden::combined_disability_weight;
use hss::population::{LifeTable, Sex, DAYS_PER_YEAR};

fn main() {
    let weights = [0.2, 0.3];
    let combined = combined_disability_weight(weights);
    let total: f64 = weights.iter().sum();
    println!("weights {weights:?} combine to {combined:.2}");
    for w in weights {
        println!("  share of a year lived with both: {:.4} YLD", combined * w / total);
    }
    println!("one day at dw 0.2 is {:.6} YLD", 0.2 / DAYS_PER_YEAR);

    let table: LifeTable = serde_json::from_str(
        r#"[{"min_age": 0, "female": 64, "male": 61},
            {"min_age": 40, "female": 33.5, "male": 30},
            {"min_age": 80, "female": 7, "male": 6}]"#,
    )
    .unwrap();
    for (age, sex) in [
        (5.0, Sex::Female),
        (40.0, Sex::Female),
        (55.0, Sex::Male),
        (97.0, Sex::Male),
    ] {
        println!("death at {age} ({sex:?}) loses {} years", table.expectancy(age, sex));
    }
}
