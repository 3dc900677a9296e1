//! Scenario file: the JSON document users write, and its validation into a
//! resolved [`Scenario`] where every name has become a dense id.
//!
//! Validation never stops at the first problem. Every issue is collected
//! with the dotted path of the offending field.

use crate::disease::{
    AgeMultiplier, DiseaseDefinition, DiseaseState, IncidenceHazard, TreatmentSpec, PROBABILITY_SLACK,
};
use crate::health_system::{CadreStaffing, FacilityGroup, FacilityLevel, FacilityRouting, HsiTemplate, Ownership};
use crate::ids::{CadreId, DiseaseId, DistrictId, FacilityId, ItemId, SymptomId};
use crate::population::{Education, LifeTable, PopulationSpec, Residence};
use crate::production::{AppointmentFootprint, CapacityShifters, Mode, ProductionFunction};
use crate::seeking::{OddsRatios, SeekingModel};
use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use thiserror::Error;

pub const DEFAULT_PATIENCE_DAYS: u32 = 14;

fn default_patience() -> u32 {
    DEFAULT_PATIENCE_DAYS
}

fn one() -> f64 {
    1.0
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: String,
    pub horizon: Horizon,
    /// 0, 1 or 2.
    pub mode: u8,
    #[serde(default = "default_patience")]
    pub patience_days: u32,
    pub population: PopulationSpec,
    pub life_table: LifeTable,
    #[serde(default)]
    pub diseases: Vec<DiseaseConfig>,
    pub seeking: SeekingConfig,
    pub health_system: HealthSystemConfig,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    #[serde(default)]
    pub output: OutputOptions,
}

/// Simulated days run from `start` up to but excluding `end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Horizon {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiseaseConfig {
    pub name: String,
    pub incidence: IncidenceConfig,
    pub states: Vec<StateConfig>,
    #[serde(default)]
    pub treatment: Option<TreatmentConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IncidenceConfig {
    /// Onsets per person-day.
    pub base: f64,
    #[serde(default)]
    pub age_multipliers: Vec<AgeMultiplier>,
    #[serde(default = "one")]
    pub female_multiplier: f64,
    #[serde(default = "one")]
    pub male_multiplier: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionConfig {
    pub to: String,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    pub name: String,
    pub disability_weight: f64,
    #[serde(default)]
    pub daily_death_hazard: f64,
    #[serde(default)]
    pub progression: Vec<TransitionConfig>,
    #[serde(default)]
    pub symptoms: Vec<String>,
    #[serde(default)]
    pub spontaneous_recovery: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreatmentConfig {
    /// Minutes per cadre name.
    pub footprint: BTreeMap<String, f64>,
    #[serde(default)]
    pub essential_consumables: Vec<String>,
    #[serde(default)]
    pub optional_consumables: Vec<String>,
    #[serde(default)]
    pub priority: u32,
    pub facility_level: FacilityLevel,
    pub diagnostic_sensitivity: f64,
    #[serde(default = "one")]
    pub diagnostic_specificity: f64,
    pub cure_probability: f64,
    #[serde(default = "one")]
    pub partial_effect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeekingConfig {
    /// Daily seeking probability per symptom name. Defines the symptom set.
    pub base_probability: BTreeMap<String, f64>,
    #[serde(default)]
    pub odds_ratios: OddsRatiosConfig,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OddsRatiosConfig {
    #[serde(default)]
    pub wealth_quintile: Option<[f64; 5]>,
    #[serde(default)]
    pub education: BTreeMap<Education, f64>,
    #[serde(default)]
    pub residence: BTreeMap<Residence, f64>,
    /// Keyed by district remoteness class.
    #[serde(default)]
    pub remoteness: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HealthSystemConfig {
    /// Default ownership multiplier for facilities that do not set their own.
    #[serde(default)]
    pub ownership_multipliers: BTreeMap<Ownership, f64>,
    pub facilities: Vec<FacilityConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacilityConfig {
    pub district: String,
    pub level: FacilityLevel,
    #[serde(default = "public")]
    pub ownership: Ownership,
    /// Staffing per cadre name. Together these define the cadre set.
    pub staff: BTreeMap<String, CadreStaffing>,
    #[serde(default)]
    pub shifters: ShiftersConfig,
    /// Monthly availability probability per item name.
    #[serde(default)]
    pub consumables: BTreeMap<String, f64>,
    #[serde(default)]
    pub bed_count: u32,
}

fn public() -> Ownership {
    Ownership::Public
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftersConfig {
    #[serde(default)]
    pub absence_rate: f64,
    #[serde(default)]
    pub ownership_multiplier: Option<f64>,
    #[serde(default = "one")]
    pub facility_scale_multiplier: f64,
}

impl Default for ShiftersConfig {
    fn default() -> Self {
        Self {
            absence_rate: 0.0,
            ownership_multiplier: None,
            facility_scale_multiplier: 1.0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    /// Evaluated on each facility's daily effective minutes per cadre
    /// (cadres in sorted name order).
    #[serde(default)]
    pub production_functions: Vec<NamedProductionFunction>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedProductionFunction {
    pub name: String,
    pub function: ProductionFunction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputOptions {
    #[serde(default = "yes")]
    pub utilization_csv: bool,
}

impl Default for OutputOptions {
    fn default() -> Self {
        Self { utilization_csv: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Every problem found in a scenario file.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.issues.push(Issue {
            path: path.into(),
            message: message.into(),
        });
    }

    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn mentions(&self, path: &str) -> bool {
        self.issues.iter().any(|i| i.path == path)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} validation error(s):", self.issues.len())?;
        for i in &self.issues {
            writeln!(f, "  {i}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed scenario JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(ValidationReport),
}

/// A validated scenario with every reference resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// The source document, kept for provenance.
    pub config: ScenarioConfig,
    pub fingerprint: String,
    pub population_fingerprint: String,
    pub start: NaiveDate,
    pub end: NaiveDate,
    pub mode: Mode,
    pub patience_days: u32,
    pub population: PopulationSpec,
    pub life_table: LifeTable,
    pub diseases: Vec<DiseaseDefinition>,
    pub seeking: SeekingModel,
    pub facilities: Vec<FacilityGroup>,
    pub routing: FacilityRouting,
    pub cadres: Vec<String>,
    pub items: Vec<String>,
    pub symptoms: Vec<String>,
    pub production_analysis: Vec<NamedProductionFunction>,
}

impl Scenario {
    pub fn district_name(&self, d: DistrictId) -> &str {
        &self.population.districts[d.index()].name
    }

    pub fn facility_label(&self, f: FacilityId) -> String {
        let g = &self.facilities[f.index()];
        format!("{}/{}", self.district_name(g.district), g.level)
    }

    pub fn days(&self) -> i64 {
        (self.end - self.start).num_days()
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn in_unit(p: f64) -> bool {
    (0.0..=1.0).contains(&p)
}

/// Lookup from names to dense ids, assigned in sorted order.
struct NameTable(BTreeMap<String, usize>);

impl NameTable {
    fn new<'a>(names: impl IntoIterator<Item = &'a String>) -> Self {
        let set: BTreeSet<&String> = names.into_iter().collect();
        Self(set.into_iter().enumerate().map(|(i, n)| (n.clone(), i)).collect())
    }

    fn get(&self, name: &str) -> Option<usize> {
        self.0.get(name).copied()
    }

    fn names(&self) -> Vec<String> {
        self.0.keys().cloned().collect()
    }

    fn len(&self) -> usize {
        self.0.len()
    }
}

impl FromStr for ScenarioConfig {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(s)?)
    }
}

impl ScenarioConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        text.parse()
    }

    pub fn fingerprint(&self) -> String {
        sha256_hex(&serde_json::to_vec(self).expect("config serialises"))
    }

    /// Checks every invariant and resolves names into ids.
    pub fn validate(&self) -> Result<Scenario, ValidationReport> {
        let mut report = ValidationReport::default();

        if self.horizon.start >= self.horizon.end {
            report.push("horizon", "start must be before end");
        }
        let mode = Mode::try_from(self.mode);
        if let Err(e) = &mode {
            report.push("mode", e.clone());
        }
        if self.population.size == 0 {
            // an empty start is allowed, but nothing can be born into it
            if self.population.crude_birth_rate > 0.0 {
                report.push("population.size", "births need at least one initial person");
            }
        }
        for (p, m) in self.population.violations() {
            report.push(format!("population.{p}"), m);
        }
        for (p, m) in self.life_table.violations() {
            report.push(format!("life_table{p}"), m);
        }

        let districts: BTreeMap<&str, DistrictId> = self
            .population
            .districts
            .iter()
            .enumerate()
            .map(|(i, d)| (d.name.as_str(), DistrictId(i)))
            .collect();

        let cadres = NameTable::new(self.health_system.facilities.iter().flat_map(|f| f.staff.keys()));
        let items = NameTable::new(self.health_system.facilities.iter().flat_map(|f| f.consumables.keys()));
        let symptoms = NameTable::new(self.seeking.base_probability.keys());

        let facilities = self.resolve_facilities(&districts, &cadres, &items, &mut report);
        let routing = FacilityRouting::from_facilities(&facilities);
        let seeking = self.resolve_seeking(&symptoms, &mut report);
        let diseases = self.resolve_diseases(&cadres, &items, &symptoms, &facilities, &mut report);

        for (i, f) in self.analysis.production_functions.iter().enumerate() {
            let path = format!("analysis.production_functions[{i}]");
            if let Err(e) = f.function.validate() {
                report.push(format!("{path}.function"), e.to_string());
            }
            if f.function.dimension() != cadres.len() {
                report.push(
                    format!("{path}.function"),
                    format!(
                        "needs one input per cadre ({}), has {}",
                        cadres.len(),
                        f.function.dimension()
                    ),
                );
            }
        }

        if !report.is_empty() {
            return Err(report);
        }
        Ok(Scenario {
            config: self.clone(),
            fingerprint: self.fingerprint(),
            population_fingerprint: sha256_hex(&serde_json::to_vec(&self.population).expect("population serialises")),
            start: self.horizon.start,
            end: self.horizon.end,
            mode: mode.expect("checked above"),
            patience_days: self.patience_days,
            population: self.population.clone(),
            life_table: self.life_table.clone(),
            diseases,
            seeking,
            facilities,
            routing,
            cadres: cadres.names(),
            items: items.names(),
            symptoms: symptoms.names(),
            production_analysis: self.analysis.production_functions.clone(),
        })
    }

    fn resolve_facilities(
        &self,
        districts: &BTreeMap<&str, DistrictId>,
        cadres: &NameTable,
        items: &NameTable,
        report: &mut ValidationReport,
    ) -> Vec<FacilityGroup> {
        let hs = &self.health_system;
        for (o, m) in &hs.ownership_multipliers {
            if !(m.is_finite() && *m > 0.0) {
                report.push(
                    format!("health_system.ownership_multipliers.{}", ownership_name(*o)),
                    format!("must be > 0, got {m}"),
                );
            }
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (i, f) in hs.facilities.iter().enumerate() {
            let path = format!("health_system.facilities[{i}]");
            let district = districts.get(f.district.as_str()).copied();
            if district.is_none() {
                report.push(format!("{path}.district"), format!("unknown district '{}'", f.district));
            }
            if !seen.insert((f.district.as_str(), f.level)) {
                report.push(
                    format!("{path}.level"),
                    format!("duplicate facility group for ({}, {})", f.district, f.level),
                );
            }
            let mut staffing = vec![CadreStaffing::NONE; cadres.len()];
            for (name, s) in &f.staff {
                if !(s.minutes_per_day.is_finite() && s.minutes_per_day >= 0.0) {
                    report.push(
                        format!("{path}.staff.{name}.minutes_per_day"),
                        format!("must be finite and >= 0, got {}", s.minutes_per_day),
                    );
                }
                if let Some(c) = cadres.get(name) {
                    staffing[c] = *s;
                }
            }
            let shifters = CapacityShifters {
                absence_rate: f.shifters.absence_rate,
                ownership_multiplier: f
                    .shifters
                    .ownership_multiplier
                    .or_else(|| hs.ownership_multipliers.get(&f.ownership).copied())
                    .unwrap_or(1.0),
                facility_scale_multiplier: f.shifters.facility_scale_multiplier,
            };
            for (field, msg) in shifters.violations() {
                report.push(format!("{path}.shifters.{field}"), msg);
            }
            let mut availability = BTreeMap::new();
            for (name, p) in &f.consumables {
                if !in_unit(*p) {
                    report.push(
                        format!("{path}.consumables.{name}"),
                        format!("must be in [0, 1], got {p}"),
                    );
                }
                if let Some(item) = items.get(name) {
                    availability.insert(ItemId(item), *p);
                }
            }
            out.push(FacilityGroup {
                id: FacilityId(i),
                district: district.unwrap_or(DistrictId(0)),
                level: f.level,
                ownership: f.ownership,
                staffing,
                shifters,
                consumable_availability: availability,
                bed_count: f.bed_count,
            });
        }
        out
    }

    fn resolve_seeking(&self, symptoms: &NameTable, report: &mut ValidationReport) -> SeekingModel {
        let cfg = &self.seeking;
        let mut base = vec![0.5; symptoms.len()];
        for (name, p) in &cfg.base_probability {
            if !(*p > 0.0 && *p < 1.0) {
                report.push(
                    format!("seeking.base_probability.{name}"),
                    format!("must be in (0, 1), got {p}"),
                );
            }
            base[symptoms.get(name).expect("symptom table built from these keys")] = *p;
        }
        fn check(report: &mut ValidationReport, path: String, v: f64) {
            if !(v.is_finite() && v > 0.0) {
                report.push(path, format!("odds ratio must be finite and > 0, got {v}"));
            }
        }
        let or = &cfg.odds_ratios;
        let mut odds = OddsRatios::identity(self.population.districts.len());
        if let Some(w) = or.wealth_quintile {
            for (q, v) in w.iter().enumerate() {
                check(report, format!("seeking.odds_ratios.wealth_quintile[{q}]"), *v);
            }
            odds.wealth_quintile = w;
        }
        for (e, v) in &or.education {
            check(report, format!("seeking.odds_ratios.education.{e:?}"), *v);
            odds.education[e.index()] = *v;
        }
        for (r, v) in &or.residence {
            check(report, format!("seeking.odds_ratios.residence.{r:?}"), *v);
            match r {
                Residence::Urban => odds.urban = *v,
                Residence::Rural => odds.rural = *v,
            }
        }
        let classes: BTreeSet<&str> = self
            .population
            .districts
            .iter()
            .map(|d| d.remoteness.as_str())
            .collect();
        for (class, v) in &or.remoteness {
            let path = format!("seeking.odds_ratios.remoteness.{class}");
            if !classes.contains(class.as_str()) {
                report.push(path.clone(), format!("no district has remoteness class '{class}'"));
            }
            check(report, path, *v);
        }
        for (i, d) in self.population.districts.iter().enumerate() {
            odds.remoteness_by_district[i] = or.remoteness.get(&d.remoteness).copied().unwrap_or(1.0);
        }
        SeekingModel {
            base_probability: base,
            odds_ratios: odds,
        }
    }

    // negated comparisons also reject NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    fn resolve_diseases(
        &self,
        cadres: &NameTable,
        items: &NameTable,
        symptoms: &NameTable,
        facilities: &[FacilityGroup],
        report: &mut ValidationReport,
    ) -> Vec<DiseaseDefinition> {
        let mut names = BTreeSet::new();
        let mut out = Vec::new();
        for (di, d) in self.diseases.iter().enumerate() {
            let path = format!("diseases[{di}]");
            if !names.insert(d.name.as_str()) {
                report.push(format!("{path}.name"), format!("duplicate disease '{}'", d.name));
            }
            if d.name == crate::burden::BACKGROUND_CAUSE {
                report.push(format!("{path}.name"), "'background' is reserved");
            }
            let inc = &d.incidence;
            if !(inc.base >= 0.0) {
                report.push(
                    format!("{path}.incidence.base"),
                    format!("hazard must be >= 0, got {}", inc.base),
                );
            }
            for (k, m) in [
                ("female_multiplier", inc.female_multiplier),
                ("male_multiplier", inc.male_multiplier),
            ] {
                if !(m >= 0.0 && m.is_finite()) {
                    report.push(
                        format!("{path}.incidence.{k}"),
                        format!("must be finite and >= 0, got {m}"),
                    );
                }
            }
            for (k, m) in inc.age_multipliers.iter().enumerate() {
                if !(m.multiplier >= 0.0 && m.multiplier.is_finite() && m.min_age <= m.max_age) {
                    report.push(
                        format!("{path}.incidence.age_multipliers[{k}]"),
                        "need min_age <= max_age and multiplier >= 0",
                    );
                }
            }

            if d.states.is_empty() {
                report.push(format!("{path}.states"), "at least one state is required");
            }
            let state_index: BTreeMap<&str, usize> =
                d.states.iter().enumerate().map(|(i, s)| (s.name.as_str(), i)).collect();
            if state_index.len() != d.states.len() {
                report.push(format!("{path}.states"), "state names must be unique");
            }
            let mut states = Vec::new();
            for (si, s) in d.states.iter().enumerate() {
                let sp = format!("{path}.states[{si}]");
                if !in_unit(s.disability_weight) {
                    report.push(
                        format!("{sp}.disability_weight"),
                        format!("must be in [0, 1], got {}", s.disability_weight),
                    );
                }
                if !(s.daily_death_hazard >= 0.0) {
                    report.push(
                        format!("{sp}.daily_death_hazard"),
                        format!("must be >= 0, got {}", s.daily_death_hazard),
                    );
                }
                if !in_unit(s.spontaneous_recovery) {
                    report.push(
                        format!("{sp}.spontaneous_recovery"),
                        format!("must be in [0, 1], got {}", s.spontaneous_recovery),
                    );
                }
                let mut progression = Vec::new();
                for (ti, t) in s.progression.iter().enumerate() {
                    if !in_unit(t.probability) {
                        report.push(
                            format!("{sp}.progression[{ti}].probability"),
                            format!("must be in [0, 1], got {}", t.probability),
                        );
                    }
                    match state_index.get(t.to.as_str()) {
                        Some(&target) => progression.push((target, t.probability)),
                        None => report.push(
                            format!("{sp}.progression[{ti}].to"),
                            format!("unknown state '{}'", t.to),
                        ),
                    }
                }
                let mut emitted = Vec::new();
                for (k, sym) in s.symptoms.iter().enumerate() {
                    match symptoms.get(sym) {
                        Some(id) => emitted.push(SymptomId(id)),
                        None => report.push(
                            format!("{sp}.symptoms[{k}]"),
                            format!("symptom '{sym}' has no base probability in seeking"),
                        ),
                    }
                }
                emitted.sort();
                emitted.dedup();
                let state = DiseaseState {
                    name: s.name.clone(),
                    disability_weight: s.disability_weight,
                    daily_death_hazard: s.daily_death_hazard,
                    progression,
                    emitted_symptoms: emitted,
                    spontaneous_recovery: s.spontaneous_recovery,
                };
                let exit = state.total_exit_probability();
                if exit > 1.0 + PROBABILITY_SLACK {
                    report.push(
                        sp.clone(),
                        format!("death + recovery + progression probabilities sum to {exit} > 1"),
                    );
                }
                states.push(state);
            }

            let treatment = d.treatment.as_ref().and_then(|t| {
                resolve_treatment(
                    t,
                    &format!("{path}.treatment"),
                    cadres,
                    items,
                    facilities,
                    &self.population,
                    report,
                )
            });
            out.push(DiseaseDefinition {
                id: DiseaseId(di),
                name: d.name.clone(),
                incidence: IncidenceHazard {
                    base: inc.base,
                    age_multipliers: inc.age_multipliers.clone(),
                    female_multiplier: inc.female_multiplier,
                    male_multiplier: inc.male_multiplier,
                },
                states,
                treatment,
            });
        }
        out
    }

    /// Applies a sweep lever to a copy of this config.
    pub fn with_lever(&self, lever: Lever, value: f64) -> ScenarioConfig {
        let mut c = self.clone();
        match lever {
            Lever::Mode => c.mode = value.round().clamp(0.0, 255.0) as u8,
            Lever::AbsenceRate => {
                for f in &mut c.health_system.facilities {
                    f.shifters.absence_rate = value;
                }
            }
            Lever::StaffScale => {
                for f in &mut c.health_system.facilities {
                    for s in f.staff.values_mut() {
                        s.count = (s.count as f64 * value).round().max(0.0) as u32;
                    }
                }
            }
            Lever::ConsumableScale => {
                for f in &mut c.health_system.facilities {
                    for p in f.consumables.values_mut() {
                        *p = (*p * value).clamp(0.0, 1.0);
                    }
                }
            }
        }
        c
    }
}

fn ownership_name(o: Ownership) -> String {
    serde_json::to_value(o)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn resolve_treatment(
    t: &TreatmentConfig,
    path: &str,
    cadres: &NameTable,
    items: &NameTable,
    facilities: &[FacilityGroup],
    population: &PopulationSpec,
    report: &mut ValidationReport,
) -> Option<TreatmentSpec> {
    let before = report.issues.len();
    for (k, p) in [
        ("diagnostic_sensitivity", t.diagnostic_sensitivity),
        ("diagnostic_specificity", t.diagnostic_specificity),
        ("cure_probability", t.cure_probability),
        ("partial_effect", t.partial_effect),
    ] {
        if !in_unit(p) {
            report.push(format!("{path}.{k}"), format!("must be in [0, 1], got {p}"));
        }
    }
    let mut entries = Vec::new();
    for (name, minutes) in &t.footprint {
        let fp = format!("{path}.footprint.{name}");
        if !(minutes.is_finite() && *minutes >= 0.0) {
            report.push(fp.clone(), format!("minutes must be finite and >= 0, got {minutes}"));
        }
        match cadres.get(name) {
            Some(c) => entries.push((CadreId(c), *minutes)),
            None => report.push(fp, format!("cadre '{name}' is absent from every facility")),
        }
    }
    if !t.footprint.values().any(|m| *m > 0.0) {
        report.push(
            format!("{path}.footprint"),
            "needs at least one strictly positive entry",
        );
    }

    let at_level: Vec<&FacilityGroup> = facilities.iter().filter(|f| f.level == t.facility_level).collect();
    for (i, d) in population.districts.iter().enumerate() {
        if !at_level.iter().any(|f| f.district == DistrictId(i)) {
            report.push(
                format!("{path}.facility_level"),
                format!("no level {} facility group in district '{}'", t.facility_level, d.name),
            );
        }
    }
    let mut resolve_items = |key: &str, list: &[String]| -> Vec<ItemId> {
        let mut ids = Vec::new();
        for (k, name) in list.iter().enumerate() {
            let ip = format!("{path}.{key}[{k}]");
            let Some(item) = items.get(name) else {
                report.push(ip, format!("item '{name}' has no availability at any facility"));
                continue;
            };
            for f in &at_level {
                if !f.consumable_availability.contains_key(&ItemId(item)) {
                    report.push(
                        ip.clone(),
                        format!("item '{name}' has no availability at facility group {}", f.id),
                    );
                }
            }
            ids.push(ItemId(item));
        }
        ids
    };
    let essential = resolve_items("essential_consumables", &t.essential_consumables);
    let optional = resolve_items("optional_consumables", &t.optional_consumables);

    if report.issues.len() != before {
        return None;
    }
    let footprint = match AppointmentFootprint::from_minutes(&entries) {
        Ok(f) => f,
        Err(e) => {
            report.push(format!("{path}.footprint"), e.to_string());
            return None;
        }
    };
    Some(TreatmentSpec {
        hsi_template: HsiTemplate {
            footprint,
            essential_consumables: essential,
            optional_consumables: optional,
            priority: t.priority,
            facility_level: t.facility_level,
        },
        diagnostic_sensitivity: t.diagnostic_sensitivity,
        diagnostic_specificity: t.diagnostic_specificity,
        cure_probability: t.cure_probability,
        partial_effect: t.partial_effect,
    })
}

/// Policy levers a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lever {
    Mode,
    AbsenceRate,
    StaffScale,
    ConsumableScale,
}

impl FromStr for Lever {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "mode" => Ok(Lever::Mode),
            "absence_rate" => Ok(Lever::AbsenceRate),
            "staff_scale" => Ok(Lever::StaffScale),
            "consumable_scale" => Ok(Lever::ConsumableScale),
            other => Err(format!(
                "unknown lever '{other}' (expected mode, absence_rate, staff_scale or consumable_scale)"
            )),
        }
    }
}

impl fmt::Display for Lever {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lever::Mode => "mode",
            Lever::AbsenceRate => "absence_rate",
            Lever::StaffScale => "staff_scale",
            Lever::ConsumableScale => "consumable_scale",
        })
    }
}
