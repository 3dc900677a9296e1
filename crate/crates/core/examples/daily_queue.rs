//! One facility-day of queue processing: a single worker with 120 minutes
//! and 6-minute consultations, plus a few urgent cases that jump the queue.
//!
//!     cargo run --example daily_queue

use chrono::NaiveDate;
use hss::health_system::{open_day, process_day, CadreStaffing, FacilityGroup, FacilityLevel, HsiEvent, Ownership};
use hss::ids::{CadreId, DiseaseId, DistrictId, FacilityId, PersonId};
use hss::production::{AppointmentFootprint, CapacityShifters, Mode};
use hss::rng::Streams;
use std::collections::BTreeMap;

fn main() {
    let day = NaiveDate::from_ymd_opt(2024, 3, 1).unwrap();
    let facility = FacilityGroup {
        id: FacilityId(0),
        district: DistrictId(0),
        level: FacilityLevel::L1a,
        ownership: Ownership::Public,
        staffing: vec![CadreStaffing {
            count: 1,
            minutes_per_day: 120.0,
        }],
        shifters: CapacityShifters::default(),
        consumable_availability: BTreeMap::new(),
        bed_count: 0,
    };
    let footprint = AppointmentFootprint::from_minutes(&[(CadreId(0), 6.0)]).unwrap();
    let queue: Vec<HsiEvent> = (0..25u64)
        .map(|seq| HsiEvent {
            person: PersonId(seq),
            disease: DiseaseId(0),
            facility: FacilityId(0),
            footprint: footprint.clone(),
            essential_consumables: vec![],
            optional_consumables: vec![],
            // every fifth patient is urgent
            priority: if seq % 5 == 4 { 0 } else { 1 },
            facility_level: FacilityLevel::L1a,
            earliest_date: day,
            expiry_date: day + chrono::Duration::days(7),
            attempts: 0,
            sequence_number: seq,
        })
        .collect();

    for mode in [Mode::Unconstrained, Mode::TimeLedger] {
        let mut ledgers = vec![open_day(&facility, day)];
        let out = process_day(
            queue.clone(),
            &mut ledgers,
            std::slice::from_ref(&facility),
            mode,
            day,
            &Streams::new(1),
        );
        let served: Vec<u64> = out.delivered.iter().map(|d| d.hsi.sequence_number).collect();
        let waiting: Vec<u64> = out.deferred.iter().map(|h| h.sequence_number).collect();
        println!("mode {mode}: {} delivered, {} deferred", served.len(), waiting.len());
        println!("  served order {served:?}");
        println!("  deferred     {waiting:?}");
        let l = &ledgers[0];
        println!(
            "  minutes: initial {} consumed {} remaining {} overdraw {}",
            l.initial[0], l.consumed[0], l.remaining[0], l.overdraw[0]
        );
    }
}
