//! Monthly stock-out draws: availability is fixed within a month and varies
//! between months with the configured probability.
//!
//!     cargo run --example consumable_stockouts

use chrono::{Datelike, NaiveDate};
use hss::health_system::{draw_consumable, CadreStaffing, FacilityGroup, FacilityLevel, Ownership};
use hss::ids::{DistrictId, FacilityId, ItemId};
use hss::production::CapacityShifters;
use hss::rng::Streams;

fn main() {
    let streams = Streams::new(2024);
    let item = ItemId(0);
    let facilities: Vec<FacilityGroup> = [0.95, 0.7, 0.4]
        .iter()
        .enumerate()
        .map(|(i, p)| FacilityGroup {
            id: FacilityId(i),
            district: DistrictId(0),
            level: FacilityLevel::L1a,
            ownership: Ownership::Public,
            staffing: vec![CadreStaffing::NONE],
            shifters: CapacityShifters::default(),
            consumable_availability: [(item, *p)].into_iter().collect(),
            bed_count: 0,
        })
        .collect();

    println!("item availability by month (# in stock, . stocked out)\n");
    for f in &facilities {
        let mut line = String::new();
        let mut hits = 0;
        let mut day = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
        for _ in 0..48 {
            let ok = draw_consumable(f, item, day, &streams);
            // every other day of the month agrees with the first
            let last = NaiveDate::from_ymd_opt(day.year(), day.month(), 28).unwrap();
            assert_eq!(ok, draw_consumable(f, item, last, &streams));
            line.push(if ok { '#' } else { '.' });
            hits += ok as u32;
            day = last + chrono::Duration::days(7);
            day = day.with_day(1).unwrap();
        }
        println!(
            "p={:.2}  {line}  {:.2}",
            f.consumable_availability[&item],
            hits as f64 / 48.0
        );
    }
}
