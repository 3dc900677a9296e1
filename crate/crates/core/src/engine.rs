//! Daily simulation loop.
//!
//! Each simulated day runs six phases in a fixed order:
//!
//! 1. demography (births, background deaths)
//! 2. disease incidence
//! 3. disease progression and disease deaths
//! 4. care seeking, which turns symptoms into HSIs
//! 5. health-system processing of the HSI queue under the configured mode
//! 6. burden accrual
//!
//! Persons who die in phase 1 or 3 take no part in later phases that day.
//! HSIs opened in phase 4 are first seen by phase 5 of the same day.

use crate::burden::{accrue_yld, total_dalys, yll_on_death, BurdenLedger, Cause, DalyRecord};
use crate::config::{Scenario, ScenarioConfig, ValidationReport};
use crate::disease::{
    apply_onset, apply_treatment, incidence_step, progression_step, refresh_symptoms, Progression, TreatmentOutcome,
};
use crate::health_system::{open_day, process_day, DailyCapacityLedger, DeliveryCounts, DeliveryStats, HsiEvent};
use crate::ids::{DiseaseId, PersonId};
use crate::population::{demography_step, initialize_population, Population};
use crate::production::{effective_minutes, Mode};
use crate::rng::Streams;
use crate::seeking::{generate_hsi, HsiIssuer, SeekingError};
use chrono::{Duration, NaiveDate};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid scenario:\n{0}")]
    InvalidConfig(ValidationReport),
    #[error("counter overflow: {0}")]
    Overflow(&'static str),
    #[error(transparent)]
    Seeking(#[from] SeekingError),
}

/// Simulation calendar with a fixed one-day tick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimClock {
    pub start_date: NaiveDate,
    pub current_date: NaiveDate,
    pub end_date: NaiveDate,
}

impl SimClock {
    pub fn new(start_date: NaiveDate, end_date: NaiveDate) -> Self {
        assert!(start_date <= end_date, "clock start after end");
        Self {
            start_date,
            current_date: start_date,
            end_date,
        }
    }

    pub fn is_finished(&self) -> bool {
        self.current_date >= self.end_date
    }

    pub fn advance(&mut self) {
        if !self.is_finished() {
            self.current_date += Duration::days(1);
        }
    }
}

/// Everything that happened on one simulated day.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DayReport {
    pub date: Option<NaiveDate>,
    pub births: Vec<PersonId>,
    pub background_deaths: Vec<PersonId>,
    pub onsets: Vec<(PersonId, DiseaseId)>,
    pub recoveries: Vec<(PersonId, DiseaseId)>,
    pub disease_deaths: Vec<(PersonId, DiseaseId)>,
    pub hsis_generated: usize,
    pub hsis_due: usize,
    pub delivered: Vec<(PersonId, DiseaseId)>,
    pub deferred: usize,
    pub expired: usize,
    pub cancelled: usize,
    pub cured: Vec<(PersonId, DiseaseId)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationSummary {
    pub initial_size: u64,
    pub births: u64,
    pub background_deaths: u64,
    pub disease_deaths: u64,
    pub final_alive: u64,
    /// (disease name, carriers alive at the end)
    pub final_prevalence: Vec<(String, u64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledCounts {
    pub facility: String,
    pub disease: String,
    #[serde(flatten)]
    pub counts: DeliveryCounts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CadreUtilization {
    pub facility: String,
    pub cadre: String,
    pub utilization: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductionAnalysisRow {
    pub function: String,
    pub facility: String,
    pub daily_output: f64,
}

/// The JSON-serialisable part of a run: provenance, DALYs and totals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub scenario: String,
    pub config_fingerprint: String,
    pub population_fingerprint: String,
    pub master_seed: u64,
    pub mode: Mode,
    pub start_date: NaiveDate,
    pub end_date: NaiveDate,
    pub days: i64,
    pub total_dalys: f64,
    pub dalys: Vec<DalyRecord>,
    pub hsis_generated: u64,
    pub delivery_totals: DeliveryCounts,
    pub delivery_by_facility_disease: Vec<LabeledCounts>,
    pub mean_utilization: Vec<CadreUtilization>,
    pub population: PopulationSummary,
    pub production_analysis: Vec<ProductionAnalysisRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub summary: RunSummary,
    pub stats: DeliveryStats,
    pub facility_labels: Vec<String>,
    pub cadre_names: Vec<String>,
    pub final_population: Population,
}

impl AsRef<RunSummary> for RunResult {
    fn as_ref(&self) -> &RunSummary {
        &self.summary
    }
}

fn bump(counter: &mut u64, by: u64, what: &'static str) -> Result<(), EngineError> {
    *counter = counter.checked_add(by).ok_or(EngineError::Overflow(what))?;
    Ok(())
}

/// Stepwise simulation. [`run`] drives this to completion; tests can step it
/// day by day and inspect state in between.
pub struct Simulation<'a> {
    scenario: &'a Scenario,
    streams: Streams,
    clock: SimClock,
    mode: Mode,
    population: Population,
    queue: Vec<HsiEvent>,
    open: BTreeSet<(PersonId, DiseaseId)>,
    issuer: HsiIssuer,
    ledgers: Vec<DailyCapacityLedger>,
    burden: BurdenLedger,
    stats: DeliveryStats,
    initial_size: u64,
    births: u64,
    background_deaths: u64,
    disease_deaths: u64,
}

impl<'a> Simulation<'a> {
    pub fn new(scenario: &'a Scenario, seed: u64) -> Self {
        Self::with_mode(scenario, seed, scenario.mode)
    }

    /// Same as [`Simulation::new`] but overriding the scenario's mode.
    pub fn with_mode(scenario: &'a Scenario, seed: u64, mode: Mode) -> Self {
        let streams = Streams::new(seed);
        let persons = initialize_population(&scenario.population, scenario.start, &streams);
        let initial_size = persons.len() as u64;
        let ledgers = scenario
            .facilities
            .iter()
            .map(|f| open_day(f, scenario.start))
            .collect();
        Self {
            scenario,
            streams,
            clock: SimClock::new(scenario.start, scenario.end),
            mode,
            population: Population::new(persons),
            queue: Vec::new(),
            open: BTreeSet::new(),
            issuer: HsiIssuer::new(scenario.patience_days, scenario.routing.clone()),
            ledgers,
            burden: BurdenLedger::default(),
            stats: DeliveryStats::default(),
            initial_size,
            births: 0,
            background_deaths: 0,
            disease_deaths: 0,
        }
    }

    pub fn clock(&self) -> &SimClock {
        &self.clock
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn queue(&self) -> &[HsiEvent] {
        &self.queue
    }

    pub fn ledgers(&self) -> &[DailyCapacityLedger] {
        &self.ledgers
    }

    pub fn is_finished(&self) -> bool {
        self.clock.is_finished()
    }

    /// Runs the current day and advances the clock.
    pub fn step(&mut self) -> Result<DayReport, EngineError> {
        let date = self.clock.current_date;
        let mut report = DayReport {
            date: Some(date),
            ..Default::default()
        };
        self.phase_demography(date, &mut report)?;
        self.phase_incidence(date, &mut report);
        self.phase_progression(date, &mut report)?;
        let cancelled = self.phase_seeking(date, &mut report)?;
        self.phase_health_system(date, &cancelled, &mut report);
        self.phase_burden(date);
        self.clock.advance();
        Ok(report)
    }

    fn phase_demography(&mut self, date: NaiveDate, report: &mut DayReport) -> Result<(), EngineError> {
        let out = demography_step(&self.population, &self.scenario.population, date, &self.streams);
        bump(&mut self.births, out.births.len() as u64, "births")?;
        report.births = out.births.iter().map(|p| p.id).collect();
        self.population.add_births(out.births);
        for id in out.background_deaths {
            let person = self.population.get(id).expect("death of known person");
            let yll = yll_on_death(person, date, &self.scenario.life_table);
            self.burden.add_yll(date, Cause::Background, yll);
            self.population.kill(id);
            report.background_deaths.push(id);
        }
        bump(
            &mut self.background_deaths,
            report.background_deaths.len() as u64,
            "background deaths",
        )
    }

    fn phase_incidence(&mut self, date: NaiveDate, report: &mut DayReport) {
        let diseases = &self.scenario.diseases;
        for def in diseases {
            for id in incidence_step(&self.population, def, date, &self.streams) {
                let person = self.population.get_mut(id).expect("onset for known person");
                apply_onset(person, def, date, diseases);
                report.onsets.push((id, def.id));
            }
        }
    }

    fn phase_progression(&mut self, date: NaiveDate, report: &mut DayReport) -> Result<(), EngineError> {
        let diseases = &self.scenario.diseases;
        for idx in 0..self.population.len() {
            let id = PersonId(idx as u64);
            let person = self.population.get(id).expect("index in range");
            if !person.alive || person.conditions.is_empty() {
                continue;
            }
            let carried: Vec<DiseaseId> = person
                .conditions
                .iter()
                .filter(|c| c.onset < date)
                .map(|c| c.disease)
                .collect();
            for disease in carried {
                let def = &diseases[disease.index()];
                let person = self.population.get(id).expect("index in range");
                let Some(outcome) = progression_step(person, def, date, &self.streams) else {
                    continue;
                };
                match outcome {
                    Progression::Stay => {}
                    Progression::Progress(next) => {
                        let person = self.population.get_mut(id).expect("index in range");
                        let mut c = *person.condition(disease).expect("carried");
                        c.state = next;
                        person.set_condition(c);
                        refresh_symptoms(person, diseases);
                    }
                    Progression::Recover => {
                        let person = self.population.get_mut(id).expect("index in range");
                        person.clear_condition(disease);
                        refresh_symptoms(person, diseases);
                        report.recoveries.push((id, disease));
                    }
                    Progression::Die => {
                        let yll = yll_on_death(person, date, &self.scenario.life_table);
                        self.burden.add_yll(date, Cause::Disease(disease), yll);
                        self.population.kill(id);
                        report.disease_deaths.push((id, disease));
                        bump(&mut self.disease_deaths, 1, "disease deaths")?;
                        break;
                    }
                }
            }
        }
        Ok(())
    }

    /// Cancels HSIs of persons who died or no longer carry the disease, then
    /// lets every symptomatic person seek care.
    fn phase_seeking(&mut self, date: NaiveDate, report: &mut DayReport) -> Result<Vec<HsiEvent>, EngineError> {
        let population = &self.population;
        let (keep, cancelled): (Vec<HsiEvent>, Vec<HsiEvent>) =
            std::mem::take(&mut self.queue).into_iter().partition(|h| {
                population
                    .get(h.person)
                    .is_some_and(|p| p.alive && p.carries(h.disease))
            });
        for h in &cancelled {
            self.open.remove(&(h.person, h.disease));
        }
        self.queue = keep;
        report.cancelled = cancelled.len();

        for person in self.population.living() {
            if person.symptoms.is_empty() {
                continue;
            }
            let new = generate_hsi(
                person,
                date,
                &self.scenario.seeking,
                &self.scenario.diseases,
                &self.open,
                &mut self.issuer,
                &self.streams,
            )?;
            for h in new {
                self.open.insert((h.person, h.disease));
                self.queue.push(h);
                report.hsis_generated += 1;
            }
        }
        Ok(cancelled)
    }

    fn phase_health_system(&mut self, date: NaiveDate, cancelled: &[HsiEvent], report: &mut DayReport) {
        let facilities = &self.scenario.facilities;
        let ledgers = std::mem::take(&mut self.ledgers);
        self.ledgers = ledgers
            .into_iter()
            .zip(facilities)
            .map(|(l, f)| l.roll_over(f, date))
            .collect();

        let queue = std::mem::take(&mut self.queue);
        report.hsis_due = queue.len();
        let outcome = process_day(queue, &mut self.ledgers, facilities, self.mode, date, &self.streams);
        debug_assert_eq!(
            outcome.delivered.len() + outcome.deferred.len() + outcome.expired.len(),
            report.hsis_due
        );

        let diseases = &self.scenario.diseases;
        for d in &outcome.delivered {
            let key = (d.hsi.person, d.hsi.disease);
            self.open.remove(&key);
            report.delivered.push(key);
            let spec = diseases[d.hsi.disease.index()]
                .treatment
                .as_ref()
                .expect("HSIs are only opened for treatable diseases");
            let result = apply_treatment(d.hsi.person, d.hsi.disease, spec, d.consumables, date, &self.streams);
            if result == TreatmentOutcome::Cured {
                let person = self.population.get_mut(d.hsi.person).expect("known person");
                person.clear_condition(d.hsi.disease);
                refresh_symptoms(person, diseases);
                report.cured.push(key);
            }
        }
        for h in &outcome.expired {
            self.open.remove(&(h.person, h.disease));
        }
        report.deferred = outcome.deferred.len();
        report.expired = outcome.expired.len();
        self.stats.record_day(date, &outcome, cancelled, &self.ledgers);
        self.queue = outcome.deferred;
    }

    fn phase_burden(&mut self, date: NaiveDate) {
        for person in self.population.living() {
            if person.conditions.is_empty() {
                continue;
            }
            let yld = accrue_yld(person, &self.scenario.diseases);
            self.burden.add_daily_yld(date, &yld);
        }
    }

    pub fn finish(self) -> RunResult {
        let sc = self.scenario;
        let dalys = self.burden.records(&sc.diseases);
        let facility_labels: Vec<String> = (0..sc.facilities.len())
            .map(|i| sc.facility_label(crate::ids::FacilityId(i)))
            .collect();
        let delivery_by_facility_disease = self
            .stats
            .by_facility_disease()
            .into_iter()
            .map(|r| LabeledCounts {
                facility: facility_labels[r.facility.index()].clone(),
                disease: sc.diseases[r.disease.index()].name.clone(),
                counts: r.counts,
            })
            .collect();
        let mean_utilization = self
            .stats
            .mean_utilization()
            .into_iter()
            .map(|(f, c, u)| CadreUtilization {
                facility: facility_labels[f.index()].clone(),
                cadre: sc.cadres[c.index()].clone(),
                utilization: u,
            })
            .collect();
        let final_prevalence = sc
            .diseases
            .iter()
            .map(|d| {
                let n = self.population.living().filter(|p| p.carries(d.id)).count() as u64;
                (d.name.clone(), n)
            })
            .collect();
        let production_analysis = sc
            .production_analysis
            .iter()
            .flat_map(|named| {
                sc.facilities.iter().map(move |f| {
                    let inputs: Vec<f64> = f
                        .staffing
                        .iter()
                        .map(|s| effective_minutes(s.count, s.minutes_per_day, &f.shifters))
                        .collect();
                    ProductionAnalysisRow {
                        function: named.name.clone(),
                        facility: sc.facility_label(f.id),
                        daily_output: named.function.output(&inputs).unwrap_or(f64::NAN),
                    }
                })
            })
            .collect();
        let summary = RunSummary {
            scenario: sc.config.name.clone(),
            config_fingerprint: sc.fingerprint.clone(),
            population_fingerprint: sc.population_fingerprint.clone(),
            master_seed: self.streams.master_seed,
            mode: self.mode,
            start_date: sc.start,
            end_date: sc.end,
            days: sc.days(),
            total_dalys: total_dalys(&dalys),
            dalys,
            hsis_generated: self.issuer.issued(),
            delivery_totals: self.stats.totals(),
            delivery_by_facility_disease,
            mean_utilization,
            population: PopulationSummary {
                initial_size: self.initial_size,
                births: self.births,
                background_deaths: self.background_deaths,
                disease_deaths: self.disease_deaths,
                final_alive: self.population.living_count() as u64,
                final_prevalence,
            },
            production_analysis,
        };
        RunResult {
            summary,
            stats: self.stats,
            facility_labels,
            cadre_names: sc.cadres.clone(),
            final_population: self.population,
        }
    }
}

/// Runs a validated scenario from start to end.
pub fn run(scenario: &Scenario, seed: u64) -> Result<RunResult, EngineError> {
    let mut sim = Simulation::new(scenario, seed);
    log::debug!(
        "run start: seed={seed} mode={} persons={} days={}",
        scenario.mode,
        sim.population().len(),
        scenario.days()
    );
    while !sim.is_finished() {
        sim.step()?;
    }
    let result = sim.finish();
    log::debug!("run end: seed={seed} total_dalys={}", result.summary.total_dalys);
    Ok(result)
}

/// Validates then runs; an invalid config is rejected before day one.
pub fn run_config(config: &ScenarioConfig, seed: u64) -> Result<RunResult, EngineError> {
    let scenario = config.validate().map_err(EngineError::InvalidConfig)?;
    run(&scenario, seed)
}
