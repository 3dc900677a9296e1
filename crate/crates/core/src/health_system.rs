//! Supply side: facility groups, daily capacity ledgers, consumable
//! stock-outs and mode-governed processing of the appointment queue.

use crate::disease::ConsumablesOk;
use crate::ids::{CadreId, DiseaseId, DistrictId, FacilityId, ItemId, PersonId};
use crate::minutes::Tenths;
use crate::production::{
    effective_minutes, feasible, AppointmentFootprint, CapacityShifters, ConsumableStatus, Feasibility, Mode,
};
use crate::rng::{Purpose, Streams};
use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FacilityLevel {
    #[serde(rename = "0")]
    L0,
    #[serde(rename = "1a")]
    L1a,
    #[serde(rename = "1b")]
    L1b,
    #[serde(rename = "2")]
    L2,
    #[serde(rename = "3")]
    L3,
}

impl fmt::Display for FacilityLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FacilityLevel::L0 => "0",
            FacilityLevel::L1a => "1a",
            FacilityLevel::L1b => "1b",
            FacilityLevel::L2 => "2",
            FacilityLevel::L3 => "3",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ownership {
    Public,
    PrivateNonprofit,
    PrivateForprofit,
    Informal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CadreStaffing {
    pub count: u32,
    pub minutes_per_day: f64,
}

impl CadreStaffing {
    pub const NONE: CadreStaffing = CadreStaffing {
        count: 0,
        minutes_per_day: 0.0,
    };
}

/// All facilities of one level in one district, treated as a single unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacilityGroup {
    pub id: FacilityId,
    pub district: DistrictId,
    pub level: FacilityLevel,
    pub ownership: Ownership,
    /// Indexed by cadre; unstaffed cadres hold [`CadreStaffing::NONE`].
    pub staffing: Vec<CadreStaffing>,
    pub shifters: CapacityShifters,
    /// Monthly probability that each stocked item is available.
    pub consumable_availability: BTreeMap<ItemId, f64>,
    /// Carried for reporting; never gates delivery.
    pub bed_count: u32,
}

impl FacilityGroup {
    pub fn staff_count(&self, cadre: CadreId) -> u32 {
        self.staffing.get(cadre.index()).map_or(0, |s| s.count)
    }
}

/// Maps (district, level) to the facility group that serves it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FacilityRouting {
    table: BTreeMap<(DistrictId, FacilityLevel), FacilityId>,
}

impl FacilityRouting {
    pub fn from_facilities(facilities: &[FacilityGroup]) -> Self {
        Self {
            table: facilities.iter().map(|f| ((f.district, f.level), f.id)).collect(),
        }
    }

    pub fn route(&self, district: DistrictId, level: FacilityLevel) -> Option<FacilityId> {
        self.table.get(&(district, level)).copied()
    }
}

/// Appointment shape shared by every HSI a disease generates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HsiTemplate {
    pub footprint: AppointmentFootprint,
    pub essential_consumables: Vec<ItemId>,
    pub optional_consumables: Vec<ItemId>,
    /// 0 is the most urgent.
    pub priority: u32,
    pub facility_level: FacilityLevel,
}

/// One health system interaction waiting for, or receiving, care.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HsiEvent {
    pub person: PersonId,
    pub disease: DiseaseId,
    pub facility: FacilityId,
    pub footprint: AppointmentFootprint,
    pub essential_consumables: Vec<ItemId>,
    pub optional_consumables: Vec<ItemId>,
    pub priority: u32,
    pub facility_level: FacilityLevel,
    pub earliest_date: NaiveDate,
    pub expiry_date: NaiveDate,
    pub attempts: u32,
    /// Unique per run; breaks every tie in the queue order.
    pub sequence_number: u64,
}

impl HsiEvent {
    /// Queue order within a facility: priority, then earliest date, then
    /// sequence number. Strict because sequence numbers are unique.
    pub fn queue_key(&self) -> (u32, NaiveDate, u64) {
        (self.priority, self.earliest_date, self.sequence_number)
    }
}

fn month_of(date: NaiveDate) -> (i32, u32) {
    (date.year(), date.month())
}

/// Entity key for a (facility, item) consumable stream.
pub fn consumable_entity(facility: FacilityId, item: ItemId) -> u64 {
    ((facility.0 as u64) << 32) | item.0 as u64
}

/// Uncached availability draw. Keyed by the first day of `date`'s month, so
/// every call within one month agrees.
pub fn draw_consumable(facility: &FacilityGroup, item: ItemId, date: NaiveDate, streams: &Streams) -> bool {
    let p = facility.consumable_availability.get(&item).copied().unwrap_or(0.0);
    let month_start = date.with_day(1).expect("day 1 exists in every month");
    streams.uniform(
        Purpose::Consumables,
        consumable_entity(facility.id, item),
        month_start,
        0,
    ) < p
}

/// Per facility-day worker minutes, plus the month's consumable draws.
///
/// `consumed + remaining = initial + overdraw` holds per cadre after every
/// charge. Under mode 2 `overdraw` stays zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DailyCapacityLedger {
    pub facility: FacilityId,
    pub date: NaiveDate,
    pub initial: Vec<Tenths>,
    pub remaining: Vec<Tenths>,
    pub consumed: Vec<Tenths>,
    pub overdraw: Vec<Tenths>,
    pub staff_present: Vec<u32>,
    cache_month: (i32, u32),
    consumable_cache: BTreeMap<ItemId, bool>,
}

/// Opens a fresh ledger for `date` with an empty consumable cache.
pub fn open_day(facility: &FacilityGroup, date: NaiveDate) -> DailyCapacityLedger {
    let initial: Vec<Tenths> = facility
        .staffing
        .iter()
        .map(|s| Tenths::from_minutes_floor(effective_minutes(s.count, s.minutes_per_day, &facility.shifters)))
        .collect();
    let n = initial.len();
    DailyCapacityLedger {
        facility: facility.id,
        date,
        remaining: initial.clone(),
        initial,
        consumed: vec![Tenths::ZERO; n],
        overdraw: vec![Tenths::ZERO; n],
        staff_present: facility.staffing.iter().map(|s| s.count).collect(),
        cache_month: month_of(date),
        consumable_cache: BTreeMap::new(),
    }
}

impl DailyCapacityLedger {
    /// Next day's ledger; keeps the consumable cache while the month is unchanged.
    pub fn roll_over(self, facility: &FacilityGroup, date: NaiveDate) -> DailyCapacityLedger {
        let mut next = open_day(facility, date);
        if self.cache_month == next.cache_month {
            next.consumable_cache = self.consumable_cache;
        }
        next
    }

    pub fn consumable_available(&mut self, facility: &FacilityGroup, item: ItemId, streams: &Streams) -> bool {
        let date = self.date;
        *self
            .consumable_cache
            .entry(item)
            .or_insert_with(|| draw_consumable(facility, item, date, streams))
    }

    pub fn cached_draws(&self) -> usize {
        self.consumable_cache.len()
    }

    pub fn consumable_status(
        &mut self,
        facility: &FacilityGroup,
        essential: &[ItemId],
        optional: &[ItemId],
        streams: &Streams,
    ) -> ConsumableStatus {
        // every listed item is drawn so the cache reflects the whole request
        #[allow(clippy::unnecessary_fold)]
        let essential_ok = essential.iter().fold(true, |ok, item| {
            self.consumable_available(facility, *item, streams) && ok
        });
        #[allow(clippy::unnecessary_fold)]
        let optional_ok = optional.iter().fold(true, |ok, item| {
            self.consumable_available(facility, *item, streams) && ok
        });
        match (essential_ok, optional_ok) {
            (false, _) => ConsumableStatus::EssentialMissing,
            (true, false) => ConsumableStatus::OptionalMissing,
            (true, true) => ConsumableStatus::Available,
        }
    }

    /// Books one delivered appointment. Time beyond what remains is recorded
    /// as overdraw and `remaining` floors at zero.
    pub fn charge(&mut self, footprint: &AppointmentFootprint) {
        for (c, need) in footprint.required() {
            let i = c.index();
            if i >= self.initial.len() {
                self.initial.resize(i + 1, Tenths::ZERO);
                self.remaining.resize(i + 1, Tenths::ZERO);
                self.consumed.resize(i + 1, Tenths::ZERO);
                self.overdraw.resize(i + 1, Tenths::ZERO);
            }
            self.consumed[i] += need;
            if self.remaining[i] >= need {
                self.remaining[i] -= need;
            } else {
                self.overdraw[i] += need - self.remaining[i];
                self.remaining[i] = Tenths::ZERO;
            }
        }
    }

    pub fn is_conserved(&self) -> bool {
        (0..self.initial.len()).all(|i| self.consumed[i] + self.remaining[i] == self.initial[i] + self.overdraw[i])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Delivered {
    pub hsi: HsiEvent,
    pub consumables: ConsumablesOk,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DayOutcome {
    /// In processing order.
    pub delivered: Vec<Delivered>,
    pub deferred: Vec<HsiEvent>,
    pub expired: Vec<HsiEvent>,
}

/// Works through one day's queue.
///
/// Facilities are visited in id order and each facility's HSIs in
/// [`HsiEvent::queue_key`] order. `ledgers` is indexed by facility id.
/// Treatment is not applied here; the caller applies it to `delivered` in
/// order.
pub fn process_day(
    mut queue: Vec<HsiEvent>,
    ledgers: &mut [DailyCapacityLedger],
    facilities: &[FacilityGroup],
    mode: Mode,
    date: NaiveDate,
    streams: &Streams,
) -> DayOutcome {
    queue.sort_by_key(|h| (h.facility, h.queue_key()));
    let mut out = DayOutcome::default();
    for mut hsi in queue {
        debug_assert!(hsi.earliest_date <= date, "queue holds HSIs that are not yet due");
        let facility = &facilities[hsi.facility.index()];
        let ledger = &mut ledgers[hsi.facility.index()];
        let status = ledger.consumable_status(facility, &hsi.essential_consumables, &hsi.optional_consumables, streams);
        match feasible(&hsi.footprint, &ledger.remaining, &ledger.staff_present, status, mode) {
            Feasibility::DeliverFull | Feasibility::DeliverPartial => {
                ledger.charge(&hsi.footprint);
                let consumables = if status == ConsumableStatus::OptionalMissing {
                    ConsumablesOk::Partial
                } else {
                    ConsumablesOk::Full
                };
                out.delivered.push(Delivered { hsi, consumables });
            }
            Feasibility::Infeasible(_) => {
                hsi.attempts += 1;
                if date >= hsi.expiry_date {
                    out.expired.push(hsi);
                } else {
                    out.deferred.push(hsi);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeliveryCounts {
    pub delivered: u64,
    pub deferred: u64,
    pub expired: u64,
    pub cancelled: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DailyDelivery {
    pub date: NaiveDate,
    pub facility: FacilityId,
    pub counts: DeliveryCounts,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UtilizationRecord {
    pub date: NaiveDate,
    pub facility: FacilityId,
    pub cadre: CadreId,
    pub initial: Tenths,
    pub consumed: Tenths,
    pub remaining: Tenths,
    pub overdraw: Tenths,
}

impl UtilizationRecord {
    /// consumed / initial. Zero when nothing was available and nothing used;
    /// `None` when minutes were used without any being available.
    pub fn utilization(&self) -> Option<f64> {
        match (self.initial.0, self.consumed.0) {
            (_, 0) => Some(0.0),
            (0, _) => None,
            (i, c) => Some(c as f64 / i as f64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacilityDiseaseCounts {
    pub facility: FacilityId,
    pub disease: DiseaseId,
    pub counts: DeliveryCounts,
}

/// Accumulates per-day delivery outcomes and ledger snapshots over a run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DeliveryStats {
    pub daily: Vec<DailyDelivery>,
    pub utilization: Vec<UtilizationRecord>,
    by_facility_disease: BTreeMap<(FacilityId, DiseaseId), DeliveryCounts>,
}

impl DeliveryStats {
    pub fn record_day(
        &mut self,
        date: NaiveDate,
        outcome: &DayOutcome,
        cancelled: &[HsiEvent],
        ledgers: &[DailyCapacityLedger],
    ) {
        let mut per_facility: BTreeMap<FacilityId, DeliveryCounts> = ledgers
            .iter()
            .map(|l| (l.facility, DeliveryCounts::default()))
            .collect();
        let mut bump = |h: &HsiEvent, f: fn(&mut DeliveryCounts)| {
            f(per_facility.entry(h.facility).or_default());
            f(self.by_facility_disease.entry((h.facility, h.disease)).or_default());
        };
        for d in &outcome.delivered {
            bump(&d.hsi, |c| c.delivered += 1);
        }
        for h in &outcome.deferred {
            bump(h, |c| c.deferred += 1);
        }
        for h in &outcome.expired {
            bump(h, |c| c.expired += 1);
        }
        for h in cancelled {
            bump(h, |c| c.cancelled += 1);
        }
        self.daily.extend(
            per_facility
                .into_iter()
                .map(|(facility, counts)| DailyDelivery { date, facility, counts }),
        );
        for l in ledgers {
            for c in 0..l.initial.len() {
                self.utilization.push(UtilizationRecord {
                    date,
                    facility: l.facility,
                    cadre: CadreId(c),
                    initial: l.initial[c],
                    consumed: l.consumed[c],
                    remaining: l.remaining[c],
                    overdraw: l.overdraw[c],
                });
            }
        }
    }

    pub fn by_facility_disease(&self) -> Vec<FacilityDiseaseCounts> {
        self.by_facility_disease
            .iter()
            .map(|(&(facility, disease), &counts)| FacilityDiseaseCounts {
                facility,
                disease,
                counts,
            })
            .collect()
    }

    pub fn totals(&self) -> DeliveryCounts {
        self.daily.iter().fold(DeliveryCounts::default(), |mut acc, d| {
            acc.delivered += d.counts.delivered;
            acc.deferred += d.counts.deferred;
            acc.expired += d.counts.expired;
            acc.cancelled += d.counts.cancelled;
            acc
        })
    }

    /// Run-level consumed/initial per (facility, cadre), over cadres with
    /// any available minutes.
    pub fn mean_utilization(&self) -> Vec<(FacilityId, CadreId, f64)> {
        let mut acc: BTreeMap<(FacilityId, CadreId), (i64, i64)> = BTreeMap::new();
        for r in &self.utilization {
            let e = acc.entry((r.facility, r.cadre)).or_default();
            e.0 += r.consumed.0;
            e.1 += r.initial.0;
        }
        acc.into_iter()
            .filter(|(_, (_, initial))| *initial > 0)
            .map(|((f, c), (consumed, initial))| (f, c, consumed as f64 / initial as f64))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(y: i32, m: u32, day: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, day).unwrap()
    }

    fn facility(staff: &[(u32, f64)], items: &[(usize, f64)]) -> FacilityGroup {
        FacilityGroup {
            id: FacilityId(0),
            district: DistrictId(0),
            level: FacilityLevel::L1a,
            ownership: Ownership::Public,
            staffing: staff
                .iter()
                .map(|(count, minutes_per_day)| CadreStaffing {
                    count: *count,
                    minutes_per_day: *minutes_per_day,
                })
                .collect(),
            shifters: CapacityShifters::default(),
            consumable_availability: items.iter().map(|(i, p)| (ItemId(*i), *p)).collect(),
            bed_count: 0,
        }
    }

    fn hsi(seq: u64, minutes: f64, date: NaiveDate) -> HsiEvent {
        HsiEvent {
            person: PersonId(seq),
            disease: DiseaseId(0),
            facility: FacilityId(0),
            footprint: AppointmentFootprint::from_minutes(&[(CadreId(0), minutes)]).unwrap(),
            essential_consumables: vec![],
            optional_consumables: vec![],
            priority: 0,
            facility_level: FacilityLevel::L1a,
            earliest_date: date,
            expiry_date: date + chrono::Duration::days(14),
            attempts: 0,
            sequence_number: seq,
        }
    }

    #[test]
    fn open_day_identity_shifters() {
        let l = open_day(&facility(&[(2, 300.0)], &[]), d(2020, 1, 1));
        assert_eq!(l.remaining[0], Tenths(6000));
    }

    #[test]
    fn open_day_with_absence() {
        let mut f = facility(&[(4, 200.0)], &[]);
        f.shifters.absence_rate = 0.5;
        assert_eq!(open_day(&f, d(2020, 1, 1)).remaining[0], Tenths(4000));
    }

    #[test]
    fn consult_throughput_midpoints() {
        // 120 patient-facing minutes a day at 6 minutes a consult
        let f = facility(&[(1, 120.0)], &[]);
        let date = d(2020, 1, 1);
        let mut ledgers = vec![open_day(&f, date)];
        let queue: Vec<_> = (0..21).map(|k| hsi(k, 6.0, date)).collect();
        let out = process_day(queue, &mut ledgers, &[f], Mode::TimeLedger, date, &Streams::new(1));
        assert_eq!(out.delivered.len(), 20);
        assert_eq!(out.deferred.len(), 1);
        assert_eq!(out.deferred[0].sequence_number, 20);
    }

    #[test]
    fn mode_two_defers_fourth() {
        let f = facility(&[(1, 30.0)], &[]);
        let date = d(2020, 1, 1);
        let mut ledgers = vec![open_day(&f, date)];
        let queue: Vec<_> = (0..4).map(|k| hsi(k, 10.0, date)).collect();
        let out = process_day(queue, &mut ledgers, &[f], Mode::TimeLedger, date, &Streams::new(1));
        assert_eq!(out.delivered.len(), 3);
        assert_eq!(out.deferred.len(), 1);
        assert_eq!(out.deferred[0].attempts, 1);
        assert_eq!(ledgers[0].remaining[0], Tenths::ZERO);
        assert!(ledgers[0].is_conserved());
    }

    #[test]
    fn mode_zero_zero_staff_delivers_all() {
        let f = facility(&[(0, 0.0)], &[]);
        let date = d(2020, 1, 1);
        let mut ledgers = vec![open_day(&f, date)];
        let queue: Vec<_> = (0..4).map(|k| hsi(k, 10.0, date)).collect();
        let out = process_day(queue, &mut ledgers, &[f], Mode::Unconstrained, date, &Streams::new(1));
        assert_eq!(out.delivered.len(), 4);
        assert_eq!(ledgers[0].overdraw[0], Tenths(400));
        assert!(ledgers[0].is_conserved());
    }

    #[test]
    fn empty_queue() {
        let f = facility(&[(1, 10.0)], &[]);
        let date = d(2020, 1, 1);
        let mut ledgers = vec![open_day(&f, date)];
        let out = process_day(vec![], &mut ledgers, &[f], Mode::TimeLedger, date, &Streams::new(1));
        assert_eq!(out, DayOutcome::default());
    }

    #[test]
    fn expiry_on_last_day() {
        let f = facility(&[(0, 0.0)], &[]);
        let date = d(2020, 1, 15);
        let mut h = hsi(0, 5.0, d(2020, 1, 1));
        h.expiry_date = date;
        let mut ledgers = vec![open_day(&f, date)];
        let out = process_day(vec![h], &mut ledgers, &[f], Mode::TimeLedger, date, &Streams::new(1));
        assert_eq!(out.expired.len(), 1);
        assert_eq!(ledgers[0].consumed[0], Tenths::ZERO);
    }

    #[test]
    fn priority_then_date_then_sequence() {
        let f = facility(&[(1, 10.0)], &[]);
        let date = d(2020, 1, 5);
        let mut a = hsi(5, 10.0, d(2020, 1, 5));
        a.priority = 1;
        let b = hsi(9, 10.0, d(2020, 1, 5));
        let c = hsi(7, 10.0, d(2020, 1, 3));
        let mut ledgers = vec![open_day(&f, date)];
        let out = process_day(
            vec![a, b, c],
            &mut ledgers,
            &[f],
            Mode::TimeLedger,
            date,
            &Streams::new(1),
        );
        assert_eq!(out.delivered[0].hsi.sequence_number, 7);
    }

    #[test]
    fn consumable_certain_probabilities() {
        let f = facility(&[(1, 10.0)], &[(0, 1.0), (1, 0.0)]);
        let s = Streams::new(4);
        for m in 1..=12 {
            assert!(draw_consumable(&f, ItemId(0), d(2021, m, 10), &s));
            assert!(!draw_consumable(&f, ItemId(1), d(2021, m, 10), &s));
        }
    }

    #[test]
    fn consumable_month_persistence() {
        let f = facility(&[(1, 10.0)], &[(0, 0.5)]);
        let s = Streams::new(4);
        for m in 1..=12 {
            let first = draw_consumable(&f, ItemId(0), d(2021, m, 1), &s);
            for day in 2..=28 {
                assert_eq!(first, draw_consumable(&f, ItemId(0), d(2021, m, day), &s));
            }
        }
    }

    #[test]
    fn cache_carries_within_month_only() {
        let f = facility(&[(1, 10.0)], &[(0, 0.5)]);
        let s = Streams::new(4);
        let mut l = open_day(&f, d(2021, 1, 30));
        l.consumable_available(&f, ItemId(0), &s);
        let l = l.roll_over(&f, d(2021, 1, 31));
        assert_eq!(l.cached_draws(), 1);
        let l = l.roll_over(&f, d(2021, 2, 1));
        assert_eq!(l.cached_draws(), 0);
    }

    #[test]
    fn missing_optional_gives_partial() {
        let f = facility(&[(1, 100.0)], &[(0, 1.0), (1, 0.0)]);
        let date = d(2020, 1, 1);
        let mut h = hsi(0, 5.0, date);
        h.essential_consumables = vec![ItemId(0)];
        h.optional_consumables = vec![ItemId(1)];
        let mut e = hsi(1, 5.0, date);
        e.essential_consumables = vec![ItemId(1)];
        let mut ledgers = vec![open_day(&f, date)];
        let out = process_day(vec![h, e], &mut ledgers, &[f], Mode::TimeLedger, date, &Streams::new(1));
        assert_eq!(out.delivered.len(), 1);
        assert_eq!(out.delivered[0].consumables, ConsumablesOk::Partial);
        assert_eq!(out.deferred.len(), 1);
    }

    #[test]
    fn stats_utilization() {
        let f = facility(&[(1, 30.0)], &[]);
        let date = d(2020, 1, 1);
        let mut stats = DeliveryStats::default();
        let mut ledgers = vec![open_day(&f, date)];
        let out = process_day(
            vec![],
            &mut ledgers,
            std::slice::from_ref(&f),
            Mode::TimeLedger,
            date,
            &Streams::new(1),
        );
        stats.record_day(date, &out, &[], &ledgers);
        assert_eq!(stats.utilization[0].utilization(), Some(0.0));

        let mut ledgers = vec![open_day(&f, date)];
        let queue: Vec<_> = (0..5).map(|k| hsi(k, 10.0, date)).collect();
        let out = process_day(queue, &mut ledgers, &[f], Mode::TimeLedger, date, &Streams::new(1));
        stats.record_day(date, &out, &[], &ledgers);
        assert_eq!(stats.utilization[1].utilization(), Some(1.0));
        let t = stats.totals();
        assert_eq!((t.delivered, t.deferred), (3, 2));
        assert_eq!(stats.mean_utilization(), vec![(FacilityId(0), CadreId(0), 0.5)]);
    }
}
