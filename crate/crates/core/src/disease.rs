//! Config-driven disease framework: onset, daily state transitions,
//! symptoms, diagnosis and treatment.

use crate::health_system::HsiTemplate;
use crate::ids::{DiseaseId, PersonId, SymptomId};
use crate::population::{Condition, Person, Population, Sex};
use crate::rng::{hazard_to_probability, Purpose, Streams};
use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

/// Tolerance for a state's outgoing probabilities summing past one.
pub const PROBABILITY_SLACK: f64 = 1e-12;

/// Key layout of disease draws. Each disease owns one index per person-day
/// on the incidence and progression streams, and two on the treatment stream.
pub mod draw {
    use crate::ids::DiseaseId;

    pub fn incidence(disease: DiseaseId) -> u64 {
        disease.0 as u64
    }

    pub fn progression(disease: DiseaseId) -> u64 {
        disease.0 as u64
    }

    pub fn diagnosis(disease: DiseaseId) -> u64 {
        2 * disease.0 as u64
    }

    pub fn cure(disease: DiseaseId) -> u64 {
        2 * disease.0 as u64 + 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgeMultiplier {
    pub min_age: f64,
    pub max_age: f64,
    pub multiplier: f64,
}

/// Daily onset hazard with optional age-band and sex multipliers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncidenceHazard {
    pub base: f64,
    pub age_multipliers: Vec<AgeMultiplier>,
    pub female_multiplier: f64,
    pub male_multiplier: f64,
}

impl IncidenceHazard {
    pub fn flat(base: f64) -> Self {
        Self {
            base,
            age_multipliers: Vec::new(),
            female_multiplier: 1.0,
            male_multiplier: 1.0,
        }
    }

    pub fn hazard_for(&self, age: f64, sex: Sex) -> f64 {
        let age_mult = self
            .age_multipliers
            .iter()
            .find(|m| m.min_age <= age && age < m.max_age)
            .map_or(1.0, |m| m.multiplier);
        let sex_mult = match sex {
            Sex::Female => self.female_multiplier,
            Sex::Male => self.male_multiplier,
        };
        self.base * age_mult * sex_mult
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiseaseState {
    pub name: String,
    pub disability_weight: f64,
    pub daily_death_hazard: f64,
    /// (target state index, daily probability)
    pub progression: Vec<(usize, f64)>,
    pub emitted_symptoms: Vec<SymptomId>,
    pub spontaneous_recovery: f64,
}

impl DiseaseState {
    pub fn death_probability(&self) -> f64 {
        hazard_to_probability(self.daily_death_hazard)
    }

    /// Death probability plus recovery plus every progression probability.
    pub fn total_exit_probability(&self) -> f64 {
        self.death_probability() + self.spontaneous_recovery + self.progression.iter().map(|(_, p)| p).sum::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreatmentSpec {
    pub hsi_template: HsiTemplate,
    pub diagnostic_sensitivity: f64,
    pub diagnostic_specificity: f64,
    /// Cure probability given detection and all essential consumables.
    pub cure_probability: f64,
    /// Multiplier on `cure_probability` when optional consumables are missing.
    pub partial_effect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiseaseDefinition {
    pub id: DiseaseId,
    pub name: String,
    pub incidence: IncidenceHazard,
    pub states: Vec<DiseaseState>,
    /// `None` disables care seeking and treatment for this disease.
    pub treatment: Option<TreatmentSpec>,
}

/// Persons that acquire `definition` today. Eligible persons are alive and
/// not already carrying it.
pub fn incidence_step(
    population: &Population,
    definition: &DiseaseDefinition,
    date: NaiveDate,
    streams: &Streams,
) -> Vec<PersonId> {
    let index = draw::incidence(definition.id);
    population
        .living()
        .filter(|p| !p.carries(definition.id))
        .filter(|p| {
            let hazard = definition.incidence.hazard_for(p.age_years(date), p.sex);
            hazard > 0.0 && streams.uniform(Purpose::Incidence, p.id.0, date, index) < hazard_to_probability(hazard)
        })
        .map(|p| p.id)
        .collect()
}

/// Puts a person into the first state of `definition` and refreshes symptoms.
pub fn apply_onset(person: &mut Person, definition: &DiseaseDefinition, date: NaiveDate, all: &[DiseaseDefinition]) {
    person.set_condition(Condition {
        disease: definition.id,
        state: 0,
        onset: date,
    });
    refresh_symptoms(person, all);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Progression {
    Stay,
    Progress(usize),
    Recover,
    Die,
}

/// Samples the day's transition for one carried disease from a single
/// uniform `u`, laid out as `[death | recovery | progressions... | stay]`.
pub fn progression_from_uniform(state: &DiseaseState, u: f64) -> Progression {
    let mut edge = state.death_probability();
    if u < edge {
        return Progression::Die;
    }
    edge += state.spontaneous_recovery;
    if u < edge {
        return Progression::Recover;
    }
    for (target, p) in &state.progression {
        edge += p;
        if u < edge {
            return Progression::Progress(*target);
        }
    }
    Progression::Stay
}

/// Returns `None` if the person does not carry the disease.
pub fn progression_step(
    person: &Person,
    definition: &DiseaseDefinition,
    date: NaiveDate,
    streams: &Streams,
) -> Option<Progression> {
    let condition = person.condition(definition.id)?;
    let state = &definition.states[condition.state];
    let u = streams.uniform(
        Purpose::Progression,
        person.id.0,
        date,
        draw::progression(definition.id),
    );
    Some(progression_from_uniform(state, u))
}

/// Whether the delivering facility had every optional consumable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConsumablesOk {
    Full,
    Partial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreatmentOutcome {
    Cured,
    NotCured,
    FalseNegativeNoTreatment,
}

/// Diagnosis then cure, drawn on the treatment stream. Pure: the caller
/// clears the condition on `Cured`.
pub fn apply_treatment(
    person: PersonId,
    disease: DiseaseId,
    spec: &TreatmentSpec,
    consumables: ConsumablesOk,
    date: NaiveDate,
    streams: &Streams,
) -> TreatmentOutcome {
    let s = streams.stream(Purpose::Treatment, person.0, date);
    if s.uniform(draw::diagnosis(disease)) >= spec.diagnostic_sensitivity {
        return TreatmentOutcome::FalseNegativeNoTreatment;
    }
    let p = match consumables {
        ConsumablesOk::Full => spec.cure_probability,
        ConsumablesOk::Partial => spec.cure_probability * spec.partial_effect,
    };
    if s.uniform(draw::cure(disease)) < p {
        TreatmentOutcome::Cured
    } else {
        TreatmentOutcome::NotCured
    }
}

/// Rebuilds the symptom set as the union over current disease states.
pub fn refresh_symptoms(person: &mut Person, diseases: &[DiseaseDefinition]) {
    person.symptoms.clear();
    for c in &person.conditions {
        let state = &diseases[c.disease.index()].states[c.state];
        person.symptoms.extend(state.emitted_symptoms.iter().copied());
    }
}

pub fn symptoms_consistent(person: &Person, diseases: &[DiseaseDefinition]) -> bool {
    let mut expected = std::collections::BTreeSet::new();
    for c in &person.conditions {
        expected.extend(
            diseases[c.disease.index()].states[c.state]
                .emitted_symptoms
                .iter()
                .copied(),
        );
    }
    expected == person.symptoms
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::health_system::{FacilityLevel, HsiTemplate};
    use crate::ids::CadreId;
    use crate::population::{Education, Residence};
    use crate::production::AppointmentFootprint;
    use std::collections::BTreeSet;

    pub(crate) fn d(y: i32, m: u32, day: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, day).unwrap()
    }

    pub(crate) fn person(id: u64) -> Person {
        Person {
            id: PersonId(id),
            date_of_birth: d(1990, 1, 1),
            sex: Sex::Female,
            alive: true,
            district: crate::ids::DistrictId(0),
            residence: Residence::Rural,
            wealth_quintile: 3,
            education: Education::Primary,
            conditions: Vec::new(),
            symptoms: BTreeSet::new(),
        }
    }

    pub(crate) fn state(death: f64, recovery: f64, progression: Vec<(usize, f64)>) -> DiseaseState {
        DiseaseState {
            name: "s".into(),
            disability_weight: 0.1,
            daily_death_hazard: death,
            progression,
            emitted_symptoms: vec![SymptomId(0)],
            spontaneous_recovery: recovery,
        }
    }

    pub(crate) fn treatment(sensitivity: f64, cure: f64, partial: f64) -> TreatmentSpec {
        TreatmentSpec {
            hsi_template: HsiTemplate {
                footprint: AppointmentFootprint::from_minutes(&[(CadreId(0), 10.0)]).unwrap(),
                essential_consumables: vec![],
                optional_consumables: vec![],
                priority: 0,
                facility_level: FacilityLevel::L1a,
            },
            diagnostic_sensitivity: sensitivity,
            diagnostic_specificity: 1.0,
            cure_probability: cure,
            partial_effect: partial,
        }
    }

    fn disease(hazard: f64) -> DiseaseDefinition {
        DiseaseDefinition {
            id: DiseaseId(0),
            name: "x".into(),
            incidence: IncidenceHazard::flat(hazard),
            states: vec![state(0.0, 0.0, vec![])],
            treatment: None,
        }
    }

    fn pop(n: u64) -> Population {
        Population::new((0..n).map(person).collect())
    }

    #[test]
    fn zero_hazard_no_onsets() {
        assert!(incidence_step(&pop(100), &disease(0.0), d(2020, 1, 1), &Streams::new(1)).is_empty());
    }

    #[test]
    fn infinite_hazard_everyone() {
        let onsets = incidence_step(&pop(100), &disease(f64::INFINITY), d(2020, 1, 1), &Streams::new(1));
        assert_eq!(onsets.len(), 100);
    }

    #[test]
    fn carriers_not_eligible() {
        let mut p = pop(10);
        let def = disease(f64::INFINITY);
        let all = vec![def.clone()];
        apply_onset(p.get_mut(PersonId(3)).unwrap(), &def, d(2020, 1, 1), &all);
        let onsets = incidence_step(&p, &def, d(2020, 1, 2), &Streams::new(1));
        assert_eq!(onsets.len(), 9);
        assert!(!onsets.contains(&PersonId(3)));
    }

    #[test]
    fn onset_binomial() {
        let onsets = incidence_step(&pop(2000), &disease(0.005), d(2020, 1, 1), &Streams::new(31));
        let p = 1.0 - (-0.005f64).exp();
        let mean = 2000.0 * p;
        let sd = (2000.0 * p * (1.0 - p)).sqrt();
        assert!((onsets.len() as f64 - mean).abs() <= 3.0 * sd, "{}", onsets.len());
    }

    #[test]
    fn progression_edge_cases() {
        assert_eq!(
            progression_from_uniform(&state(0.0, 0.0, vec![]), 0.0),
            Progression::Stay
        );
        assert_eq!(
            progression_from_uniform(&state(0.0, 1.0, vec![]), 0.999_999),
            Progression::Recover
        );
        assert_eq!(
            progression_from_uniform(&state(f64::INFINITY, 0.0, vec![]), 0.5),
            Progression::Die
        );
    }

    #[test]
    fn progression_multinomial() {
        // death hazard chosen so the converted probability is exactly 0.1
        let death_hazard = -(0.9f64).ln();
        let st = state(death_hazard, 0.2, vec![(1, 0.3)]);
        let def = DiseaseDefinition {
            id: DiseaseId(0),
            name: "x".into(),
            incidence: IncidenceHazard::flat(0.0),
            states: vec![st, state(0.0, 0.0, vec![])],
            treatment: None,
        };
        let streams = Streams::new(8);
        let n = 100_000u64;
        let mut counts = [0usize; 4];
        let mut p = person(0);
        p.set_condition(Condition {
            disease: DiseaseId(0),
            state: 0,
            onset: d(2020, 1, 1),
        });
        let start = d(2020, 1, 1);
        for k in 0..n {
            p.id = PersonId(k);
            let out = progression_step(&p, &def, start, &streams).unwrap();
            let slot = match out {
                Progression::Die => 0,
                Progression::Recover => 1,
                Progression::Progress(1) => 2,
                Progression::Stay => 3,
                other => panic!("unexpected {other:?}"),
            };
            counts[slot] += 1;
        }
        for (observed, prob) in counts.iter().zip([0.1, 0.2, 0.3, 0.4]) {
            let sd = (n as f64 * prob * (1.0 - prob)).sqrt();
            assert!((*observed as f64 - n as f64 * prob).abs() <= 3.0 * sd, "{counts:?}");
        }
    }

    #[test]
    fn treatment_certain_outcomes() {
        let s = Streams::new(2);
        let date = d(2020, 1, 1);
        for k in 0..100 {
            assert_eq!(
                apply_treatment(
                    PersonId(k),
                    DiseaseId(0),
                    &treatment(1.0, 1.0, 1.0),
                    ConsumablesOk::Full,
                    date,
                    &s
                ),
                TreatmentOutcome::Cured
            );
            assert_eq!(
                apply_treatment(
                    PersonId(k),
                    DiseaseId(0),
                    &treatment(0.0, 1.0, 1.0),
                    ConsumablesOk::Full,
                    date,
                    &s
                ),
                TreatmentOutcome::FalseNegativeNoTreatment
            );
        }
    }

    #[test]
    fn partial_cure_frequency() {
        let s = Streams::new(12);
        let date = d(2020, 1, 1);
        let spec = treatment(0.9, 0.8, 0.5);
        let n = 100_000u64;
        let cured = (0..n)
            .filter(|k| {
                apply_treatment(PersonId(*k), DiseaseId(1), &spec, ConsumablesOk::Partial, date, &s)
                    == TreatmentOutcome::Cured
            })
            .count();
        let p = 0.9 * 0.8 * 0.5;
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        assert!((cured as f64 - n as f64 * p).abs() <= 3.0 * sd, "{cured}");
    }

    #[test]
    fn symptoms_follow_states() {
        let mut a = disease(0.0);
        a.states[0].emitted_symptoms = vec![SymptomId(0), SymptomId(2)];
        let mut b = disease(0.0);
        b.id = DiseaseId(1);
        b.states[0].emitted_symptoms = vec![SymptomId(1)];
        let all = vec![a.clone(), b.clone()];
        let mut p = person(0);
        apply_onset(&mut p, &a, d(2020, 1, 1), &all);
        apply_onset(&mut p, &b, d(2020, 1, 1), &all);
        assert_eq!(p.symptoms.len(), 3);
        p.clear_condition(DiseaseId(0));
        refresh_symptoms(&mut p, &all);
        assert_eq!(p.symptoms.iter().copied().collect::<Vec<_>>(), vec![SymptomId(1)]);
        assert!(symptoms_consistent(&p, &all));
    }
}
