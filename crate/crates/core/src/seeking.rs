//! Turning symptoms into demand for care.

use crate::disease::DiseaseDefinition;
use crate::health_system::{FacilityRouting, HsiEvent};
use crate::ids::{DiseaseId, PersonId, SymptomId};
use crate::population::{Person, Residence};
use crate::rng::{Purpose, Streams};
use chrono::{Duration, NaiveDate};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

/// Odds multipliers by attribute value. Reference categories carry 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OddsRatios {
    /// Quintile 1..=5 at index 0..=4.
    pub wealth_quintile: [f64; 5],
    /// Indexed by [`Education::index`].
    pub education: [f64; 3],
    pub urban: f64,
    pub rural: f64,
    /// Per district, from the district's remoteness class.
    pub remoteness_by_district: Vec<f64>,
}

impl OddsRatios {
    pub fn identity(n_districts: usize) -> Self {
        Self {
            wealth_quintile: [1.0; 5],
            education: [1.0; 3],
            urban: 1.0,
            rural: 1.0,
            remoteness_by_district: vec![1.0; n_districts],
        }
    }

    fn for_person(&self, person: &Person) -> [f64; 4] {
        [
            self.wealth_quintile[(person.wealth_quintile.clamp(1, 5) - 1) as usize],
            self.education[person.education.index()],
            match person.residence {
                Residence::Urban => self.urban,
                Residence::Rural => self.rural,
            },
            self.remoteness_by_district
                .get(person.district.index())
                .copied()
                .unwrap_or(1.0),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeekingModel {
    /// Daily probability of seeking care, indexed by symptom.
    pub base_probability: Vec<f64>,
    pub odds_ratios: OddsRatios,
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl SeekingModel {
    /// Logistic model: the person's odds ratios add to the base log-odds.
    pub fn seek_probability(&self, symptom: SymptomId, person: &Person) -> f64 {
        let base = self.base_probability[symptom.index()];
        let shift: f64 = self.odds_ratios.for_person(person).iter().map(|or| or.ln()).sum();
        logistic(logit(base) + shift)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeekingError {
    #[error("HSI sequence counter overflowed")]
    SequenceOverflow,
}

/// Stamps new HSIs with routing, expiry and sequence numbers.
#[derive(Debug, Clone)]
pub struct HsiIssuer {
    pub patience_days: u32,
    pub routing: FacilityRouting,
    next_sequence: u64,
}

impl HsiIssuer {
    pub fn new(patience_days: u32, routing: FacilityRouting) -> Self {
        Self {
            patience_days,
            routing,
            next_sequence: 0,
        }
    }

    pub fn issued(&self) -> u64 {
        self.next_sequence
    }

    fn next(&mut self) -> Result<u64, SeekingError> {
        let n = self.next_sequence;
        self.next_sequence = n.checked_add(1).ok_or(SeekingError::SequenceOverflow)?;
        Ok(n)
    }
}

/// One Bernoulli draw per current symptom. A successful draw opens an HSI
/// for every carried, treatable disease whose current state emits that
/// symptom and which has no HSI open already.
#[allow(clippy::too_many_arguments)]
pub fn generate_hsi(
    person: &Person,
    date: NaiveDate,
    model: &SeekingModel,
    diseases: &[DiseaseDefinition],
    open: &BTreeSet<(PersonId, DiseaseId)>,
    issuer: &mut HsiIssuer,
    streams: &Streams,
) -> Result<Vec<HsiEvent>, SeekingError> {
    let mut out: Vec<HsiEvent> = Vec::new();
    if !person.alive || person.symptoms.is_empty() {
        return Ok(out);
    }
    let stream = streams.stream(Purpose::Seeking, person.id.0, date);
    for &symptom in &person.symptoms {
        let p = model.seek_probability(symptom, person);
        if !stream.bernoulli(symptom.0 as u64, p) {
            continue;
        }
        for condition in &person.conditions {
            let def = &diseases[condition.disease.index()];
            let Some(treatment) = &def.treatment else { continue };
            if !def.states[condition.state].emitted_symptoms.contains(&symptom)
                || open.contains(&(person.id, def.id))
                || out.iter().any(|h| h.disease == def.id)
            {
                continue;
            }
            let template = &treatment.hsi_template;
            let Some(facility) = issuer.routing.route(person.district, template.facility_level) else {
                continue;
            };
            out.push(HsiEvent {
                person: person.id,
                disease: def.id,
                facility,
                footprint: template.footprint.clone(),
                essential_consumables: template.essential_consumables.clone(),
                optional_consumables: template.optional_consumables.clone(),
                priority: template.priority,
                facility_level: template.facility_level,
                earliest_date: date,
                expiry_date: date + Duration::days(issuer.patience_days as i64),
                attempts: 0,
                sequence_number: issuer.next()?,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disease::tests::{d, person, state, treatment};
    use crate::disease::{apply_onset, IncidenceHazard};
    use crate::health_system::{CadreStaffing, FacilityGroup, FacilityLevel, Ownership};
    use crate::ids::{DistrictId, FacilityId};
    use crate::production::CapacityShifters;

    fn model(base: f64) -> SeekingModel {
        SeekingModel {
            base_probability: vec![base],
            odds_ratios: OddsRatios::identity(1),
        }
    }

    fn routing() -> FacilityRouting {
        FacilityRouting::from_facilities(&[FacilityGroup {
            id: FacilityId(0),
            district: DistrictId(0),
            level: FacilityLevel::L1a,
            ownership: Ownership::Public,
            staffing: vec![CadreStaffing {
                count: 1,
                minutes_per_day: 60.0,
            }],
            shifters: CapacityShifters::default(),
            consumable_availability: Default::default(),
            bed_count: 0,
        }])
    }

    fn disease() -> DiseaseDefinition {
        DiseaseDefinition {
            id: DiseaseId(0),
            name: "x".into(),
            incidence: IncidenceHazard::flat(0.0),
            states: vec![state(0.0, 0.0, vec![])],
            treatment: Some(treatment(1.0, 1.0, 1.0)),
        }
    }

    #[test]
    fn identity_odds_give_base() {
        let p = model(0.2).seek_probability(SymptomId(0), &person(0));
        assert!((p - 0.2).abs() < 1e-12);
    }

    #[test]
    fn single_odds_ratio_two() {
        let mut m = model(0.2);
        m.odds_ratios.rural = 2.0;
        let p = m.seek_probability(SymptomId(0), &person(0));
        // logit(0.2) + ln 2 = ln(0.25) + ln(2) = ln(0.5), sigma(ln 0.5) = 1/3
        assert!((p - 1.0 / 3.0).abs() < 1e-12, "{p}");
    }

    #[test]
    fn vanishing_odds_ratio() {
        let mut m = model(0.2);
        m.odds_ratios.education = [1e-300; 3];
        assert!(m.seek_probability(SymptomId(0), &person(0)) < 1e-290);
        m.odds_ratios.education = [0.0; 3];
        assert_eq!(m.seek_probability(SymptomId(0), &person(0)), 0.0);
    }

    #[test]
    fn asymptomatic_no_hsi() {
        let mut issuer = HsiIssuer::new(14, routing());
        let out = generate_hsi(
            &person(0),
            d(2020, 1, 1),
            &model(0.99),
            &[disease()],
            &BTreeSet::new(),
            &mut issuer,
            &Streams::new(1),
        )
        .unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn certain_seeking_one_hsi() {
        let def = disease();
        let all = vec![def.clone()];
        let mut p = person(0);
        let today = d(2020, 1, 1);
        apply_onset(&mut p, &def, today, &all);
        let mut m = model(0.5);
        m.odds_ratios.rural = f64::INFINITY;
        let mut issuer = HsiIssuer::new(14, routing());
        let out = generate_hsi(&p, today, &m, &all, &BTreeSet::new(), &mut issuer, &Streams::new(1)).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].earliest_date, today);
        assert_eq!(out[0].expiry_date, d(2020, 1, 15));
        assert_eq!(out[0].facility, FacilityId(0));

        let open: BTreeSet<_> = [(PersonId(0), DiseaseId(0))].into_iter().collect();
        let again = generate_hsi(&p, today, &m, &all, &open, &mut issuer, &Streams::new(1)).unwrap();
        assert!(again.is_empty());
    }

    #[test]
    fn days_to_seek_geometric() {
        let def = disease();
        let all = vec![def.clone()];
        let m = model(0.4);
        let streams = Streams::new(21);
        let start = d(2020, 1, 1);
        let n = 20_000u64;
        let mut total_days = 0u64;
        for k in 0..n {
            let mut p = person(k);
            apply_onset(&mut p, &def, start, &all);
            let mut issuer = HsiIssuer::new(14, routing());
            let mut day = 0u64;
            loop {
                day += 1;
                let date = start + Duration::days(day as i64 - 1);
                let out = generate_hsi(&p, date, &m, &all, &BTreeSet::new(), &mut issuer, &streams).unwrap();
                if !out.is_empty() {
                    break;
                }
            }
            total_days += day;
        }
        let mean = total_days as f64 / n as f64;
        assert!((mean - 2.5).abs() / 2.5 < 0.05, "mean {mean}");
    }
}
