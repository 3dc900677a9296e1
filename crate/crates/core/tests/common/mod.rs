//! Builders shared by the integration tests.
#![allow(dead_code)]

use chrono::NaiveDate;
use hss::health_system::{CadreStaffing, FacilityGroup, FacilityLevel, HsiEvent, Ownership};
use hss::ids::{CadreId, DiseaseId, DistrictId, FacilityId, ItemId, PersonId};
use hss::production::{AppointmentFootprint, CapacityShifters};
use hss::ScenarioConfig;
use std::path::PathBuf;

pub fn date(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

pub fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

pub fn load(name: &str) -> ScenarioConfig {
    ScenarioConfig::load(scenario_path(name)).expect("shipped scenario parses")
}

/// A facility group with `(count, minutes_per_day)` per cadre and
/// `(item, probability)` stock.
pub fn facility(id: usize, staffing: &[(u32, f64)], items: &[(usize, f64)]) -> FacilityGroup {
    FacilityGroup {
        id: FacilityId(id),
        district: DistrictId(0),
        level: FacilityLevel::L1a,
        ownership: Ownership::Public,
        staffing: staffing
            .iter()
            .map(|&(count, minutes_per_day)| CadreStaffing { count, minutes_per_day })
            .collect(),
        shifters: CapacityShifters::default(),
        consumable_availability: items.iter().map(|&(i, p)| (ItemId(i), p)).collect(),
        bed_count: 0,
    }
}

pub fn footprint(minutes: &[(usize, f64)]) -> AppointmentFootprint {
    let entries: Vec<(CadreId, f64)> = minutes.iter().map(|&(c, m)| (CadreId(c), m)).collect();
    AppointmentFootprint::from_minutes(&entries).unwrap()
}

pub struct HsiSpec<'a> {
    pub seq: u64,
    pub facility: usize,
    pub minutes: &'a [(usize, f64)],
    pub priority: u32,
    pub essential: &'a [usize],
    pub optional: &'a [usize],
    pub earliest: NaiveDate,
}

pub fn hsi(s: HsiSpec) -> HsiEvent {
    HsiEvent {
        person: PersonId(s.seq),
        disease: DiseaseId(0),
        facility: FacilityId(s.facility),
        footprint: footprint(s.minutes),
        essential_consumables: s.essential.iter().map(|&i| ItemId(i)).collect(),
        optional_consumables: s.optional.iter().map(|&i| ItemId(i)).collect(),
        priority: s.priority,
        facility_level: FacilityLevel::L1a,
        earliest_date: s.earliest,
        expiry_date: s.earliest + chrono::Duration::days(14),
        attempts: 0,
        sequence_number: s.seq,
    }
}

/// Same footprint, priority and date for every HSI; only the sequence differs.
pub fn identical_hsis(n: u64, minutes: &[(usize, f64)], day: NaiveDate) -> Vec<HsiEvent> {
    (0..n)
        .map(|seq| {
            hsi(HsiSpec {
                seq,
                facility: 0,
                minutes,
                priority: 0,
                essential: &[],
                optional: &[],
                earliest: day,
            })
        })
        .collect()
}

/// A one-district, one-facility scenario. `diseases` and `seeking` are
/// inserted verbatim; the facility stocks `item` at probability 1 and staffs
/// one nurse with `nurse_minutes` per day.
pub fn small_config(
    size: u64,
    days: i64,
    diseases: serde_json::Value,
    seeking: serde_json::Value,
    nurse_minutes: f64,
) -> ScenarioConfig {
    let start = date(2020, 1, 1);
    let end = start + chrono::Duration::days(days);
    let doc = serde_json::json!({
        "name": "small",
        "horizon": { "start": start, "end": end },
        "mode": 2,
        "population": {
            "size": size,
            "age_bands": [{ "min_age": 0, "max_age": 60, "share": 1.0 }],
            "female_share": 0.5,
            "districts": [{ "name": "d", "share": 1.0 }],
            "rural_share": 0.5,
            "wealth_quintile_shares": [0.2, 0.2, 0.2, 0.2, 0.2],
            "education_shares": { "none": 0.3, "primary": 0.5, "secondary_plus": 0.2 }
        },
        "life_table": [{ "min_age": 0, "female": 50, "male": 50 }],
        "diseases": diseases,
        "seeking": seeking,
        "health_system": {
            "facilities": [{
                "district": "d",
                "level": "1a",
                "staff": { "nurse": { "count": 1, "minutes_per_day": nurse_minutes } },
                "consumables": { "item": 1.0 }
            }]
        }
    });
    serde_json::from_value(doc).expect("small config deserialises")
}
