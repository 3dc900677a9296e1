//! Synthetic population: initial draw, births, background deaths, ageing.

use crate::ids::{DiseaseId, DistrictId, PersonId, SymptomId};
use crate::rng::{categorical, hazard_to_probability, Purpose, Streams};
use chrono::{Duration, NaiveDate};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

pub const DAYS_PER_YEAR: f64 = 365.25;

/// Youngest age at which a living female can be picked as a newborn's mother.
pub const ADULT_AGE: f64 = 15.0;

// Draw indices on the demography stream. Initialisation shares the stream of
// the start date with the first demography step, so it uses a separate range.
mod draw {
    pub const BIRTH: u64 = 0;
    pub const DEATH: u64 = 1;
    pub const MOTHER: u64 = 2;
    pub const NEWBORN_SEX: u64 = 3;
    pub const NEWBORN_EDUCATION: u64 = 4;
    pub const NEWBORN_DISTRICT: u64 = 5;
    pub const NEWBORN_RESIDENCE: u64 = 6;
    pub const NEWBORN_WEALTH: u64 = 7;

    pub const INIT_AGE_BAND: u64 = 100;
    pub const INIT_AGE: u64 = 101;
    pub const INIT_SEX: u64 = 102;
    pub const INIT_DISTRICT: u64 = 103;
    pub const INIT_RESIDENCE: u64 = 104;
    pub const INIT_WEALTH: u64 = 105;
    pub const INIT_EDUCATION: u64 = 106;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sex {
    Female,
    Male,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Residence {
    Urban,
    Rural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Education {
    None,
    Primary,
    SecondaryPlus,
}

impl Education {
    pub const ALL: [Education; 3] = [Education::None, Education::Primary, Education::SecondaryPlus];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// An active disease episode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub disease: DiseaseId,
    pub state: usize,
    pub onset: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Person {
    pub id: PersonId,
    pub date_of_birth: NaiveDate,
    pub sex: Sex,
    pub alive: bool,
    pub district: DistrictId,
    pub residence: Residence,
    /// 1 (poorest) to 5.
    pub wealth_quintile: u8,
    pub education: Education,
    /// Sorted by disease id, at most one entry per disease.
    pub conditions: Vec<Condition>,
    pub symptoms: BTreeSet<SymptomId>,
}

impl Person {
    pub fn age_years(&self, date: NaiveDate) -> f64 {
        (date - self.date_of_birth).num_days().max(0) as f64 / DAYS_PER_YEAR
    }

    pub fn condition(&self, disease: DiseaseId) -> Option<&Condition> {
        self.conditions
            .binary_search_by_key(&disease, |c| c.disease)
            .ok()
            .map(|i| &self.conditions[i])
    }

    pub fn carries(&self, disease: DiseaseId) -> bool {
        self.condition(disease).is_some()
    }

    /// Adds or replaces the condition for `condition.disease`.
    pub fn set_condition(&mut self, condition: Condition) {
        match self.conditions.binary_search_by_key(&condition.disease, |c| c.disease) {
            Ok(i) => self.conditions[i] = condition,
            Err(i) => self.conditions.insert(i, condition),
        }
    }

    pub fn clear_condition(&mut self, disease: DiseaseId) -> Option<Condition> {
        self.conditions
            .binary_search_by_key(&disease, |c| c.disease)
            .ok()
            .map(|i| self.conditions.remove(i))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgeBandShare {
    pub min_age: f64,
    pub max_age: f64,
    pub share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistrictSpec {
    pub name: String,
    pub share: f64,
    /// Class label looked up in the seeking model's remoteness odds.
    #[serde(default = "default_remoteness")]
    pub remoteness: String,
}

fn default_remoteness() -> String {
    "default".to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EducationShares {
    pub none: f64,
    pub primary: f64,
    pub secondary_plus: f64,
}

impl EducationShares {
    pub fn as_array(&self) -> [f64; 3] {
        [self.none, self.primary, self.secondary_plus]
    }
}

/// Daily background mortality hazard from `min_age` up to the next band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MortalityBand {
    pub min_age: f64,
    pub female: f64,
    pub male: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopulationSpec {
    pub size: u64,
    pub age_bands: Vec<AgeBandShare>,
    pub female_share: f64,
    pub districts: Vec<DistrictSpec>,
    pub rural_share: f64,
    pub wealth_quintile_shares: [f64; 5],
    pub education_shares: EducationShares,
    /// Births per living person per day.
    #[serde(default)]
    pub crude_birth_rate: f64,
    #[serde(default)]
    pub mortality: Vec<MortalityBand>,
}

impl PopulationSpec {
    pub fn mortality_hazard(&self, age: f64, sex: Sex) -> f64 {
        let band = self
            .mortality
            .iter()
            .rev()
            .find(|b| b.min_age <= age)
            .or_else(|| self.mortality.first());
        match (band, sex) {
            (None, _) => 0.0,
            (Some(b), Sex::Female) => b.female,
            (Some(b), Sex::Male) => b.male,
        }
    }

    pub fn district_shares(&self) -> Vec<f64> {
        self.districts.iter().map(|d| d.share).collect()
    }

    /// Checks every share vector and rate; returns (field path, message) pairs.
    pub fn violations(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut sums_to_one = |path: &str, shares: &[f64]| {
            if shares.iter().any(|s| !s.is_finite() || *s < 0.0) {
                out.push((path.to_string(), "shares must be finite and >= 0".to_string()));
                return;
            }
            let total: f64 = shares.iter().sum();
            if (total - 1.0).abs() > SHARE_TOLERANCE {
                out.push((path.to_string(), format!("shares must sum to 1, got {total}")));
            }
        };
        sums_to_one("age_bands", &self.age_bands.iter().map(|b| b.share).collect::<Vec<_>>());
        sums_to_one("districts", &self.district_shares());
        sums_to_one("wealth_quintile_shares", &self.wealth_quintile_shares);
        sums_to_one("education_shares", &self.education_shares.as_array());

        if self.age_bands.is_empty() {
            out.push(("age_bands".into(), "at least one band is required".into()));
        }
        for (i, b) in self.age_bands.iter().enumerate() {
            if !(b.min_age >= 0.0 && b.max_age >= b.min_age && b.max_age.is_finite()) {
                out.push((
                    format!("age_bands[{i}]"),
                    format!("need 0 <= min_age <= max_age, got [{}, {}]", b.min_age, b.max_age),
                ));
            }
        }
        if self.districts.is_empty() {
            out.push(("districts".into(), "at least one district is required".into()));
        }
        let mut names = BTreeSet::new();
        for (i, d) in self.districts.iter().enumerate() {
            if !names.insert(d.name.as_str()) {
                out.push((
                    format!("districts[{i}].name"),
                    format!("duplicate district '{}'", d.name),
                ));
            }
        }
        for (name, p) in [("female_share", self.female_share), ("rural_share", self.rural_share)] {
            if !(0.0..=1.0).contains(&p) {
                out.push((name.into(), format!("must be in [0, 1], got {p}")));
            }
        }
        if !(self.crude_birth_rate.is_finite() && self.crude_birth_rate >= 0.0) {
            out.push((
                "crude_birth_rate".into(),
                format!("must be >= 0, got {}", self.crude_birth_rate),
            ));
        }
        for (i, b) in self.mortality.iter().enumerate() {
            if !(b.female >= 0.0 && b.male >= 0.0 && b.female.is_finite() && b.male.is_finite()) {
                out.push((format!("mortality[{i}]"), "hazards must be finite and >= 0".into()));
            }
            if i > 0 && b.min_age <= self.mortality[i - 1].min_age {
                out.push((
                    format!("mortality[{i}].min_age"),
                    "bands must be strictly ascending".into(),
                ));
            }
        }
        out
    }
}

const SHARE_TOLERANCE: f64 = 1e-9;

/// Remaining life expectancy by age band and sex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LifeTable {
    pub rows: Vec<LifeTableRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LifeTableRow {
    pub min_age: f64,
    pub female: f64,
    pub male: f64,
}

impl LifeTable {
    /// Constant expectancy regardless of age; handy in tests.
    pub fn constant(years: f64) -> Self {
        Self {
            rows: vec![LifeTableRow {
                min_age: 0.0,
                female: years,
                male: years,
            }],
        }
    }

    /// Expectancy for the band containing `age`; ages past the table use the
    /// terminal band.
    pub fn expectancy(&self, age: f64, sex: Sex) -> f64 {
        let row = self
            .rows
            .iter()
            .rev()
            .find(|r| r.min_age <= age)
            .or_else(|| self.rows.first());
        match (row, sex) {
            (None, _) => 0.0,
            (Some(r), Sex::Female) => r.female,
            (Some(r), Sex::Male) => r.male,
        }
    }

    pub fn violations(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        if self.rows.is_empty() {
            out.push((String::new(), "life table needs at least one row".into()));
            return out;
        }
        if self.rows[0].min_age != 0.0 {
            out.push(("[0].min_age".into(), "first band must start at age 0".into()));
        }
        let last = self.rows.len() - 1;
        for (i, r) in self.rows.iter().enumerate() {
            if !(r.female.is_finite() && r.male.is_finite() && r.female >= 0.0 && r.male >= 0.0) {
                out.push((format!("[{i}]"), "expectancy must be finite and >= 0".into()));
            }
            if i < last && (r.female <= 0.0 || r.male <= 0.0) {
                out.push((
                    format!("[{i}]"),
                    "expectancy must be > 0 below the terminal band".into(),
                ));
            }
            if i > 0 {
                let prev = &self.rows[i - 1];
                if r.min_age <= prev.min_age {
                    out.push((format!("[{i}].min_age"), "bands must be strictly ascending".into()));
                }
                if r.female >= prev.female || r.male >= prev.male {
                    out.push((
                        format!("[{i}]"),
                        "expectancy must strictly decrease with age within each sex".into(),
                    ));
                }
            }
        }
        out
    }
}

/// All persons ever created, indexed by id. Dead persons keep their slot.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Population {
    persons: Vec<Person>,
}

impl Population {
    pub fn new(persons: Vec<Person>) -> Self {
        debug_assert!(persons.iter().enumerate().all(|(i, p)| p.id.index() == i));
        Self { persons }
    }

    pub fn persons(&self) -> &[Person] {
        &self.persons
    }

    pub fn get(&self, id: PersonId) -> Option<&Person> {
        self.persons.get(id.index())
    }

    pub fn get_mut(&mut self, id: PersonId) -> Option<&mut Person> {
        self.persons.get_mut(id.index())
    }

    pub fn living(&self) -> impl Iterator<Item = &Person> {
        self.persons.iter().filter(|p| p.alive)
    }

    pub fn living_count(&self) -> usize {
        self.living().count()
    }

    pub fn next_id(&self) -> PersonId {
        PersonId(self.persons.len() as u64)
    }

    pub fn len(&self) -> usize {
        self.persons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.persons.is_empty()
    }

    /// Appends newborns, whose ids must continue the dense sequence.
    pub fn add_births(&mut self, births: Vec<Person>) {
        for b in births {
            assert_eq!(b.id, self.next_id(), "person ids must be dense");
            self.persons.push(b);
        }
    }

    /// Marks a person dead and drops their conditions and symptoms.
    pub fn kill(&mut self, id: PersonId) {
        if let Some(p) = self.persons.get_mut(id.index()) {
            p.alive = false;
            p.conditions.clear();
            p.symptoms.clear();
        }
    }
}

fn draw_district(spec: &PopulationSpec, u: f64) -> DistrictId {
    DistrictId(categorical(u, &spec.district_shares()))
}

fn draw_residence(spec: &PopulationSpec, u: f64) -> Residence {
    if u < spec.rural_share {
        Residence::Rural
    } else {
        Residence::Urban
    }
}

fn draw_sex(spec: &PopulationSpec, u: f64) -> Sex {
    if u < spec.female_share {
        Sex::Female
    } else {
        Sex::Male
    }
}

/// Draws the starting population. Ids are dense `0..size`.
pub fn initialize_population(spec: &PopulationSpec, start: NaiveDate, streams: &Streams) -> Vec<Person> {
    let band_shares: Vec<f64> = spec.age_bands.iter().map(|b| b.share).collect();
    let education = spec.education_shares.as_array();
    (0..spec.size)
        .map(|i| {
            let s = streams.stream(Purpose::Demography, i, start);
            let band = &spec.age_bands[categorical(s.uniform(draw::INIT_AGE_BAND), &band_shares)];
            let age = band.min_age + (band.max_age - band.min_age) * s.uniform(draw::INIT_AGE);
            let age_days = (age * DAYS_PER_YEAR).round() as i64;
            Person {
                id: PersonId(i),
                date_of_birth: start - Duration::days(age_days),
                sex: draw_sex(spec, s.uniform(draw::INIT_SEX)),
                alive: true,
                district: draw_district(spec, s.uniform(draw::INIT_DISTRICT)),
                residence: draw_residence(spec, s.uniform(draw::INIT_RESIDENCE)),
                wealth_quintile: categorical(s.uniform(draw::INIT_WEALTH), &spec.wealth_quintile_shares) as u8 + 1,
                education: Education::ALL[categorical(s.uniform(draw::INIT_EDUCATION), &education)],
                conditions: Vec::new(),
                symptoms: BTreeSet::new(),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DemographyOutcome {
    pub births: Vec<Person>,
    pub background_deaths: Vec<PersonId>,
}

/// One day of births and background deaths. Does not mutate the population;
/// newborn ids continue from `population.next_id()`.
pub fn demography_step(
    population: &Population,
    spec: &PopulationSpec,
    date: NaiveDate,
    streams: &Streams,
) -> DemographyOutcome {
    let mut out = DemographyOutcome::default();
    let p_birth = hazard_to_probability(spec.crude_birth_rate);
    let mothers: Vec<&Person> = population
        .living()
        .filter(|p| p.sex == Sex::Female && p.age_years(date) >= ADULT_AGE)
        .collect();
    let education = spec.education_shares.as_array();
    let mut next_id = population.next_id().0;

    for person in population.living() {
        let s = streams.stream(Purpose::Demography, person.id.0, date);
        if p_birth > 0.0 && s.bernoulli(draw::BIRTH, p_birth) {
            let (district, residence, wealth_quintile) = if mothers.is_empty() {
                (
                    draw_district(spec, s.uniform(draw::NEWBORN_DISTRICT)),
                    draw_residence(spec, s.uniform(draw::NEWBORN_RESIDENCE)),
                    categorical(s.uniform(draw::NEWBORN_WEALTH), &spec.wealth_quintile_shares) as u8 + 1,
                )
            } else {
                let k = ((s.uniform(draw::MOTHER) * mothers.len() as f64) as usize).min(mothers.len() - 1);
                let m = mothers[k];
                (m.district, m.residence, m.wealth_quintile)
            };
            out.births.push(Person {
                id: PersonId(next_id),
                date_of_birth: date,
                sex: draw_sex(spec, s.uniform(draw::NEWBORN_SEX)),
                alive: true,
                district,
                residence,
                wealth_quintile,
                education: Education::ALL[categorical(s.uniform(draw::NEWBORN_EDUCATION), &education)],
                conditions: Vec::new(),
                symptoms: BTreeSet::new(),
            });
            next_id += 1;
        }
        let hazard = spec.mortality_hazard(person.age_years(date), person.sex);
        if hazard > 0.0 && s.bernoulli(draw::DEATH, hazard_to_probability(hazard)) {
            out.background_deaths.push(person.id);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn spec(size: u64) -> PopulationSpec {
        PopulationSpec {
            size,
            age_bands: vec![
                AgeBandShare {
                    min_age: 0.0,
                    max_age: 15.0,
                    share: 0.4,
                },
                AgeBandShare {
                    min_age: 15.0,
                    max_age: 60.0,
                    share: 0.5,
                },
                AgeBandShare {
                    min_age: 60.0,
                    max_age: 90.0,
                    share: 0.1,
                },
            ],
            female_share: 0.5,
            districts: vec![
                DistrictSpec {
                    name: "north".into(),
                    share: 0.5,
                    remoteness: "default".into(),
                },
                DistrictSpec {
                    name: "south".into(),
                    share: 0.5,
                    remoteness: "remote".into(),
                },
            ],
            rural_share: 0.6,
            wealth_quintile_shares: [0.2; 5],
            education_shares: EducationShares {
                none: 0.3,
                primary: 0.5,
                secondary_plus: 0.2,
            },
            crude_birth_rate: 0.0,
            mortality: vec![],
        }
    }

    fn d(y: i32, m: u32, day: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, day).unwrap()
    }

    fn within_3_sigma(observed: usize, n: usize, p: f64) -> bool {
        let mean = n as f64 * p;
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        (observed as f64 - mean).abs() <= 3.0 * sd
    }

    #[test]
    fn ids_dense_and_rural_share() {
        let people = initialize_population(&spec(1000), d(2020, 1, 1), &Streams::new(5));
        assert!(people.iter().enumerate().all(|(i, p)| p.id.0 == i as u64));
        let rural = people.iter().filter(|p| p.residence == Residence::Rural).count();
        assert!(within_3_sigma(rural, 1000, 0.6), "rural {rural}");
        assert!(people.iter().all(|p| (1..=5).contains(&p.wealth_quintile)));
    }

    #[test]
    fn single_district_single_age() {
        let mut s = spec(50);
        s.districts.truncate(1);
        s.districts[0].share = 1.0;
        s.age_bands = vec![AgeBandShare {
            min_age: 30.0,
            max_age: 30.0,
            share: 1.0,
        }];
        let start = d(2020, 1, 1);
        let people = initialize_population(&s, start, &Streams::new(1));
        let dob = people[0].date_of_birth;
        assert!(people
            .iter()
            .all(|p| p.district == DistrictId(0) && p.date_of_birth == dob));
        assert!((people[0].age_years(start) - 30.0).abs() < 1.0 / 365.0);
    }

    #[test]
    fn empty_population() {
        assert!(initialize_population(&spec(0), d(2020, 1, 1), &Streams::new(1)).is_empty());
        let pop = Population::default();
        let out = demography_step(&pop, &spec(0), d(2020, 1, 1), &Streams::new(1));
        assert!(out.births.is_empty() && out.background_deaths.is_empty());
    }

    #[test]
    fn zero_rates_no_change() {
        let start = d(2020, 1, 1);
        let pop = Population::new(initialize_population(&spec(500), start, &Streams::new(3)));
        let out = demography_step(&pop, &spec(500), start, &Streams::new(3));
        assert_eq!(out, DemographyOutcome::default());
    }

    #[test]
    fn mortality_binomial() {
        let mut s = spec(10_000);
        s.mortality = vec![MortalityBand {
            min_age: 0.0,
            female: 0.001,
            male: 0.001,
        }];
        let start = d(2020, 1, 1);
        let streams = Streams::new(77);
        let pop = Population::new(initialize_population(&s, start, &streams));
        let out = demography_step(&pop, &s, start, &streams);
        let p = 1.0 - (-0.001f64).exp();
        assert!(
            within_3_sigma(out.background_deaths.len(), 10_000, p),
            "{}",
            out.background_deaths.len()
        );
    }

    #[test]
    fn newborns_inherit_from_adult_female() {
        let mut s = spec(2000);
        s.crude_birth_rate = 0.01;
        let start = d(2020, 1, 1);
        let streams = Streams::new(9);
        let pop = Population::new(initialize_population(&s, start, &streams));
        let out = demography_step(&pop, &s, start, &streams);
        assert!(!out.births.is_empty());
        for (k, b) in out.births.iter().enumerate() {
            assert_eq!(b.id.0, 2000 + k as u64);
            assert_eq!(b.date_of_birth, start);
            assert!(pop.living().any(|m| m.sex == Sex::Female
                && m.age_years(start) >= ADULT_AGE
                && m.district == b.district
                && m.residence == b.residence
                && m.wealth_quintile == b.wealth_quintile));
        }
    }

    #[test]
    fn life_table_lookup_and_checks() {
        let t = LifeTable {
            rows: vec![
                LifeTableRow {
                    min_age: 0.0,
                    female: 65.0,
                    male: 60.0,
                },
                LifeTableRow {
                    min_age: 40.0,
                    female: 32.5,
                    male: 29.0,
                },
                LifeTableRow {
                    min_age: 80.0,
                    female: 1.0,
                    male: 1.0,
                },
            ],
        };
        assert!(t.violations().is_empty());
        assert_eq!(t.expectancy(40.0, Sex::Female), 32.5);
        assert_eq!(t.expectancy(39.9, Sex::Male), 60.0);
        assert_eq!(t.expectancy(120.0, Sex::Male), 1.0);
        let bad = LifeTable {
            rows: vec![
                LifeTableRow {
                    min_age: 0.0,
                    female: 30.0,
                    male: 30.0,
                },
                LifeTableRow {
                    min_age: 10.0,
                    female: 31.0,
                    male: 20.0,
                },
            ],
        };
        assert!(!bad.violations().is_empty());
    }

    #[test]
    fn share_violations_reported() {
        let mut s = spec(10);
        s.wealth_quintile_shares = [0.2, 0.2, 0.2, 0.2, 0.3];
        s.rural_share = 1.5;
        let paths: Vec<_> = s.violations().into_iter().map(|(p, _)| p).collect();
        assert!(paths.contains(&"wealth_quintile_shares".to_string()));
        assert!(paths.contains(&"rural_share".to_string()));
    }

    #[test]
    fn condition_bookkeeping() {
        let start = d(2020, 1, 1);
        let mut p = initialize_population(&spec(1), start, &Streams::new(1)).remove(0);
        p.set_condition(Condition {
            disease: DiseaseId(2),
            state: 0,
            onset: start,
        });
        p.set_condition(Condition {
            disease: DiseaseId(0),
            state: 1,
            onset: start,
        });
        p.set_condition(Condition {
            disease: DiseaseId(2),
            state: 1,
            onset: start,
        });
        assert_eq!(p.conditions.len(), 2);
        assert_eq!(p.conditions[0].disease, DiseaseId(0));
        assert_eq!(p.condition(DiseaseId(2)).unwrap().state, 1);
        assert!(p.clear_condition(DiseaseId(2)).is_some());
        assert!(!p.carries(DiseaseId(2)));
    }
}
