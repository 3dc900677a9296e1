//! DALY accounting: YLD accrued daily, YLL booked at death, aggregated by
//! calendar year and cause.

use crate::disease::DiseaseDefinition;
use crate::engine::RunSummary;
use crate::ids::DiseaseId;
use crate::population::{LifeTable, Person, DAYS_PER_YEAR};
use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

pub const BACKGROUND_CAUSE: &str = "background";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cause {
    Background,
    Disease(DiseaseId),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DalyRecord {
    pub year: i32,
    pub cause: String,
    pub yld: f64,
    pub yll: f64,
}

impl DalyRecord {
    pub fn daly(&self) -> f64 {
        self.yld + self.yll
    }
}

/// `1 - prod(1 - dw)` over concurrent conditions.
pub fn combined_disability_weight(weights: impl IntoIterator<Item = f64>) -> f64 {
    1.0 - weights.into_iter().fold(1.0, |acc, w| acc * (1.0 - w))
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DailyYld {
    pub total: f64,
    pub by_disease: Vec<(DiseaseId, f64)>,
}

/// One day of YLD for a living person, split across causes in proportion to
/// each condition's disability weight.
pub fn accrue_yld(person: &Person, diseases: &[DiseaseDefinition]) -> DailyYld {
    if person.conditions.is_empty() {
        return DailyYld::default();
    }
    let weights: Vec<(DiseaseId, f64)> = person
        .conditions
        .iter()
        .map(|c| (c.disease, diseases[c.disease.index()].states[c.state].disability_weight))
        .collect();
    let total = combined_disability_weight(weights.iter().map(|(_, w)| *w)) / DAYS_PER_YEAR;
    let sum: f64 = weights.iter().map(|(_, w)| w).sum();
    let by_disease = if sum > 0.0 {
        weights.iter().map(|(d, w)| (*d, total * w / sum)).collect()
    } else {
        weights.iter().map(|(d, _)| (*d, 0.0)).collect()
    };
    DailyYld { total, by_disease }
}

/// Remaining life expectancy at death. Undiscounted, no age weights.
pub fn yll_on_death(person: &Person, date: NaiveDate, life_table: &LifeTable) -> f64 {
    life_table.expectancy(person.age_years(date), person.sex)
}

/// Running YLD/YLL totals keyed by (year, cause).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BurdenLedger {
    cells: BTreeMap<(i32, Cause), (f64, f64)>,
}

impl BurdenLedger {
    pub fn add_yld(&mut self, date: NaiveDate, cause: Cause, yld: f64) {
        self.cells.entry((date.year(), cause)).or_default().0 += yld;
    }

    pub fn add_yll(&mut self, date: NaiveDate, cause: Cause, yll: f64) {
        self.cells.entry((date.year(), cause)).or_default().1 += yll;
    }

    pub fn add_daily_yld(&mut self, date: NaiveDate, yld: &DailyYld) {
        for (d, v) in &yld.by_disease {
            self.add_yld(date, Cause::Disease(*d), *v);
        }
    }

    pub fn total(&self) -> f64 {
        self.cells.values().map(|(a, b)| a + b).sum()
    }

    /// Rows ordered by year then cause (background first, then disease id).
    pub fn records(&self, diseases: &[DiseaseDefinition]) -> Vec<DalyRecord> {
        self.cells
            .iter()
            .map(|(&(year, cause), &(yld, yll))| DalyRecord {
                year,
                cause: match cause {
                    Cause::Background => BACKGROUND_CAUSE.to_string(),
                    Cause::Disease(d) => diseases[d.index()].name.clone(),
                },
                yld,
                yll,
            })
            .collect()
    }
}

pub fn total_dalys(records: &[DalyRecord]) -> f64 {
    records.iter().map(DalyRecord::daly).sum()
}

pub fn dalys_by_cause(records: &[DalyRecord]) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    for r in records {
        *out.entry(r.cause.clone()).or_insert(0.0) += r.daly();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComparisonError {
    #[error("runs use different population specs")]
    PopulationMismatch,
    #[error("runs cover different horizons ({0} vs {1})")]
    HorizonMismatch(String, String),
    #[error("runs use different master seeds ({0} vs {1})")]
    SeedMismatch(u64, u64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DalysAverted {
    pub baseline_total: f64,
    pub comparator_total: f64,
    /// baseline minus comparator.
    pub total: f64,
    /// `None` when the baseline has zero DALYs.
    pub percent_of_baseline: Option<f64>,
    pub per_cause: BTreeMap<String, f64>,
}

/// DALYs the comparator averts relative to the baseline. Both runs must
/// share population spec, horizon and master seed.
pub fn dalys_averted(baseline: &RunSummary, comparator: &RunSummary) -> Result<DalysAverted, ComparisonError> {
    if baseline.population_fingerprint != comparator.population_fingerprint {
        return Err(ComparisonError::PopulationMismatch);
    }
    if (baseline.start_date, baseline.end_date) != (comparator.start_date, comparator.end_date) {
        return Err(ComparisonError::HorizonMismatch(
            format!("{}..{}", baseline.start_date, baseline.end_date),
            format!("{}..{}", comparator.start_date, comparator.end_date),
        ));
    }
    if baseline.master_seed != comparator.master_seed {
        return Err(ComparisonError::SeedMismatch(
            baseline.master_seed,
            comparator.master_seed,
        ));
    }
    let base = dalys_by_cause(&baseline.dalys);
    let comp = dalys_by_cause(&comparator.dalys);
    let mut per_cause = BTreeMap::new();
    for cause in base.keys().chain(comp.keys()) {
        let v = base.get(cause).copied().unwrap_or(0.0) - comp.get(cause).copied().unwrap_or(0.0);
        per_cause.insert(cause.clone(), v);
    }
    let baseline_total = total_dalys(&baseline.dalys);
    let comparator_total = total_dalys(&comparator.dalys);
    let total = baseline_total - comparator_total;
    Ok(DalysAverted {
        baseline_total,
        comparator_total,
        total,
        percent_of_baseline: (baseline_total > 0.0).then(|| 100.0 * total / baseline_total),
        per_cause,
    })
}
