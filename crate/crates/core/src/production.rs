//! Production-function algebra and the delivery feasibility gate.
//!
//! Three families are supported: Leontief (fixed proportions), Cobb-Douglas
//! and CES. Only Leontief gates service delivery in the simulator: an
//! appointment footprint is a vector of Leontief input coefficients over
//! worker cadres, and an appointment can be produced only when every
//! required input is on hand. The other two families are used for analysis.

use crate::ids::CadreId;
use crate::minutes::Tenths;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

const SHARE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProductionError {
    #[error("expected {expected} inputs, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("input {index} is negative or not finite ({value})")]
    BadInput { index: usize, value: f64 },
    #[error("invalid production function: {0}")]
    Invalid(String),
}

/// A production function over `n` inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ProductionFunction {
    Leontief { coefficients: Vec<f64> },
    CobbDouglas { scale: f64, exponents: Vec<f64> },
    Ces { scale: f64, shares: Vec<f64>, rho: f64 },
}

impl ProductionFunction {
    pub fn dimension(&self) -> usize {
        match self {
            ProductionFunction::Leontief { coefficients } => coefficients.len(),
            ProductionFunction::CobbDouglas { exponents, .. } => exponents.len(),
            ProductionFunction::Ces { shares, .. } => shares.len(),
        }
    }

    pub fn validate(&self) -> Result<(), ProductionError> {
        let bad = |msg: String| Err(ProductionError::Invalid(msg));
        match self {
            ProductionFunction::Leontief { coefficients } => {
                if coefficients.iter().any(|a| !a.is_finite() || *a < 0.0) {
                    return bad("Leontief coefficients must be finite and >= 0".into());
                }
                if !coefficients.iter().any(|a| *a > 0.0) {
                    return bad("Leontief needs at least one positive coefficient".into());
                }
            }
            ProductionFunction::CobbDouglas { scale, exponents } => {
                if !(scale.is_finite() && *scale > 0.0) {
                    return bad(format!("Cobb-Douglas scale must be > 0, got {scale}"));
                }
                if exponents.iter().any(|a| !a.is_finite() || *a < 0.0) {
                    return bad("Cobb-Douglas exponents must be finite and >= 0".into());
                }
                if !exponents.iter().any(|a| *a > 0.0) {
                    return bad("Cobb-Douglas needs at least one positive exponent".into());
                }
            }
            ProductionFunction::Ces { scale, shares, rho } => {
                if !(scale.is_finite() && *scale > 0.0) {
                    return bad(format!("CES scale must be > 0, got {scale}"));
                }
                if shares.is_empty() || shares.iter().any(|d| !d.is_finite() || *d <= 0.0) {
                    return bad("CES shares must be finite and > 0".into());
                }
                let total: f64 = shares.iter().sum();
                if (total - 1.0).abs() > SHARE_TOLERANCE {
                    return bad(format!("CES shares must sum to 1, got {total}"));
                }
                if !rho.is_finite() || *rho > 1.0 {
                    return bad(format!("CES rho must be <= 1, got {rho}"));
                }
                if *rho == 0.0 {
                    return bad("CES rho must be non-zero".into());
                }
            }
        }
        Ok(())
    }

    /// Output for non-negative `inputs`.
    ///
    /// Leontief ignores inputs whose coefficient is zero. Cobb-Douglas ignores
    /// inputs with a zero exponent. CES with `rho < 0` and any zero input
    /// yields 0, its limiting value.
    pub fn output(&self, inputs: &[f64]) -> Result<f64, ProductionError> {
        if inputs.len() != self.dimension() {
            return Err(ProductionError::DimensionMismatch {
                expected: self.dimension(),
                got: inputs.len(),
            });
        }
        if let Some((index, &value)) = inputs.iter().enumerate().find(|(_, x)| !x.is_finite() || **x < 0.0) {
            return Err(ProductionError::BadInput { index, value });
        }
        let y = match self {
            ProductionFunction::Leontief { coefficients } => coefficients
                .iter()
                .zip(inputs)
                .filter(|(a, _)| **a > 0.0)
                .map(|(a, x)| x / a)
                .fold(f64::INFINITY, f64::min),
            ProductionFunction::CobbDouglas { scale, exponents } => {
                let mut y = *scale;
                for (alpha, x) in exponents.iter().zip(inputs) {
                    if *alpha > 0.0 {
                        y *= x.powf(*alpha);
                    }
                }
                y
            }
            ProductionFunction::Ces { scale, shares, rho } => {
                if *rho < 0.0 && inputs.contains(&0.0) {
                    0.0
                } else {
                    let inner: f64 = shares.iter().zip(inputs).map(|(d, x)| d * x.powf(*rho)).sum();
                    scale * inner.powf(1.0 / rho)
                }
            }
        };
        Ok(y)
    }
}

/// Minutes per cadre needed for one appointment; the Leontief coefficients
/// on the labour side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppointmentFootprint {
    entries: Vec<(CadreId, Tenths)>,
}

impl AppointmentFootprint {
    pub fn new(mut entries: Vec<(CadreId, Tenths)>) -> Result<Self, ProductionError> {
        entries.sort_by_key(|(c, _)| *c);
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(ProductionError::Invalid("duplicate cadre in footprint".into()));
        }
        if entries.iter().any(|(_, m)| m.0 < 0) {
            return Err(ProductionError::Invalid("negative footprint minutes".into()));
        }
        if !entries.iter().any(|(_, m)| m.is_positive()) {
            return Err(ProductionError::Invalid(
                "footprint needs at least one positive entry".into(),
            ));
        }
        Ok(Self { entries })
    }

    /// Builds a footprint from minutes, rounding each requirement up to a tenth.
    pub fn from_minutes(entries: &[(CadreId, f64)]) -> Result<Self, ProductionError> {
        if entries.iter().any(|(_, m)| !m.is_finite()) {
            return Err(ProductionError::Invalid("footprint minutes must be finite".into()));
        }
        Self::new(
            entries
                .iter()
                .map(|(c, m)| (*c, Tenths::from_minutes_ceil(*m)))
                .collect(),
        )
    }

    pub fn entries(&self) -> &[(CadreId, Tenths)] {
        &self.entries
    }

    /// Cadres with a strictly positive requirement.
    pub fn required(&self) -> impl Iterator<Item = (CadreId, Tenths)> + '_ {
        self.entries.iter().copied().filter(|(_, m)| m.is_positive())
    }

    /// The footprint as a Leontief function over `n_cadres` inputs (minutes).
    pub fn as_leontief(&self, n_cadres: usize) -> ProductionFunction {
        let mut coefficients = vec![0.0; n_cadres];
        for (c, m) in &self.entries {
            if c.index() < n_cadres {
                coefficients[c.index()] = m.as_minutes();
            }
        }
        ProductionFunction::Leontief { coefficients }
    }

    /// Whole appointments that `remaining` can still fund (Leontief output,
    /// floored, computed in exact integer tenths).
    pub fn appointments_supported(&self, remaining: &[Tenths]) -> i64 {
        self.required()
            .map(|(c, m)| remaining.get(c.index()).copied().unwrap_or(Tenths::ZERO).0.max(0) / m.0)
            .min()
            .unwrap_or(0)
    }
}

/// Multiplicative shifts applied to available worker minutes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacityShifters {
    #[serde(default)]
    pub absence_rate: f64,
    #[serde(default = "one")]
    pub ownership_multiplier: f64,
    #[serde(default = "one")]
    pub facility_scale_multiplier: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for CapacityShifters {
    fn default() -> Self {
        Self {
            absence_rate: 0.0,
            ownership_multiplier: 1.0,
            facility_scale_multiplier: 1.0,
        }
    }
}

impl CapacityShifters {
    /// Returns the names of violated fields together with a message.
    pub fn violations(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        if !(0.0..1.0).contains(&self.absence_rate) {
            out.push(("absence_rate", format!("must be in [0, 1), got {}", self.absence_rate)));
        }
        if !(self.ownership_multiplier.is_finite() && self.ownership_multiplier > 0.0) {
            out.push((
                "ownership_multiplier",
                format!("must be > 0, got {}", self.ownership_multiplier),
            ));
        }
        if !(self.facility_scale_multiplier.is_finite() && self.facility_scale_multiplier > 0.0) {
            out.push((
                "facility_scale_multiplier",
                format!("must be > 0, got {}", self.facility_scale_multiplier),
            ));
        }
        out
    }
}

/// Patient-facing minutes a cadre supplies per day.
pub fn effective_minutes(staff_count: u32, minutes_per_day: f64, shifters: &CapacityShifters) -> f64 {
    staff_count as f64
        * minutes_per_day
        * (1.0 - shifters.absence_rate)
        * shifters.ownership_multiplier
        * shifters.facility_scale_multiplier
}

/// Constraint regime for delivering appointments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Mode {
    /// Delivered whether or not the worker is there.
    Unconstrained,
    /// The cadre must be staffed; time is unlimited.
    Presence,
    /// Full daily time ledger.
    TimeLedger,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Unconstrained, Mode::Presence, Mode::TimeLedger];

    pub fn number(self) -> u8 {
        self.into()
    }
}

impl From<Mode> for u8 {
    fn from(m: Mode) -> u8 {
        match m {
            Mode::Unconstrained => 0,
            Mode::Presence => 1,
            Mode::TimeLedger => 2,
        }
    }
}

impl TryFrom<u8> for Mode {
    type Error = String;
    fn try_from(v: u8) -> Result<Self, String> {
        match v {
            0 => Ok(Mode::Unconstrained),
            1 => Ok(Mode::Presence),
            2 => Ok(Mode::TimeLedger),
            other => Err(format!("mode must be 0, 1 or 2, got {other}")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConsumableStatus {
    Available,
    OptionalMissing,
    EssentialMissing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfeasibleReason {
    Consumables,
    Presence,
    Time,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feasibility {
    DeliverFull,
    DeliverPartial,
    Infeasible(InfeasibleReason),
}

impl Feasibility {
    pub fn delivers(self) -> bool {
        !matches!(self, Feasibility::Infeasible(_))
    }
}

/// Decides whether one appointment can be delivered.
///
/// `remaining` and `staff_present` are indexed by cadre; cadres beyond the
/// end of either slice count as zero. Essential consumables are checked
/// first in every mode, then presence (modes 1 and 2), then time (mode 2).
pub fn feasible(
    footprint: &AppointmentFootprint,
    remaining: &[Tenths],
    staff_present: &[u32],
    consumables: ConsumableStatus,
    mode: Mode,
) -> Feasibility {
    if consumables == ConsumableStatus::EssentialMissing {
        return Feasibility::Infeasible(InfeasibleReason::Consumables);
    }
    if mode >= Mode::Presence {
        let absent = footprint
            .required()
            .any(|(c, _)| staff_present.get(c.index()).copied().unwrap_or(0) == 0);
        if absent {
            return Feasibility::Infeasible(InfeasibleReason::Presence);
        }
    }
    if mode == Mode::TimeLedger {
        let short = footprint
            .required()
            .any(|(c, need)| remaining.get(c.index()).copied().unwrap_or(Tenths::ZERO) < need);
        if short {
            return Feasibility::Infeasible(InfeasibleReason::Time);
        }
    }
    match consumables {
        ConsumableStatus::OptionalMissing => Feasibility::DeliverPartial,
        _ => Feasibility::DeliverFull,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(entries: &[(usize, f64)]) -> AppointmentFootprint {
        AppointmentFootprint::from_minutes(&entries.iter().map(|(c, m)| (CadreId(*c), *m)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn leontief_min_rule() {
        let pf = ProductionFunction::Leontief {
            coefficients: vec![1.0, 2.0],
        };
        assert_eq!(pf.output(&[10.0, 10.0]).unwrap(), 5.0);
        assert_eq!(pf.output(&[1.0, 2.0]).unwrap(), 1.0);
    }

    #[test]
    fn zero_inputs_zero_output() {
        let fns = [
            ProductionFunction::Leontief {
                coefficients: vec![1.0, 0.5],
            },
            ProductionFunction::CobbDouglas {
                scale: 2.0,
                exponents: vec![0.3, 0.7],
            },
            ProductionFunction::Ces {
                scale: 1.5,
                shares: vec![0.4, 0.6],
                rho: -2.0,
            },
            ProductionFunction::Ces {
                scale: 1.5,
                shares: vec![0.4, 0.6],
                rho: 0.5,
            },
        ];
        for f in &fns {
            f.validate().unwrap();
            assert_eq!(f.output(&[0.0, 0.0]).unwrap(), 0.0, "{f:?}");
        }
    }

    #[test]
    fn zero_coefficient_input_ignored() {
        let pf = ProductionFunction::Leontief {
            coefficients: vec![0.0, 2.0],
        };
        assert_eq!(pf.output(&[0.0, 8.0]).unwrap(), 4.0);
    }

    #[test]
    fn dimension_mismatch_is_error() {
        let pf = ProductionFunction::Leontief {
            coefficients: vec![1.0],
        };
        assert!(matches!(
            pf.output(&[1.0, 2.0]),
            Err(ProductionError::DimensionMismatch { expected: 1, got: 2 })
        ));
    }

    #[test]
    fn ces_validation() {
        let rho_zero = ProductionFunction::Ces {
            scale: 1.0,
            shares: vec![0.5, 0.5],
            rho: 0.0,
        };
        assert!(rho_zero.validate().is_err());
        let bad_shares = ProductionFunction::Ces {
            scale: 1.0,
            shares: vec![0.5, 0.6],
            rho: 0.5,
        };
        assert!(bad_shares.validate().is_err());
        let rho_big = ProductionFunction::Ces {
            scale: 1.0,
            shares: vec![0.5, 0.5],
            rho: 1.5,
        };
        assert!(rho_big.validate().is_err());
    }

    #[test]
    fn effective_minutes_cases() {
        let absent = CapacityShifters {
            absence_rate: 0.347,
            ..Default::default()
        };
        let m = effective_minutes(10, 240.0, &absent);
        assert!((m - 1567.2).abs() < 1e-9);
        assert_eq!(Tenths::from_minutes_floor(m), Tenths(15672));
        assert_eq!(effective_minutes(7, 123.5, &CapacityShifters::default()), 7.0 * 123.5);
        assert_eq!(effective_minutes(0, 240.0, &absent), 0.0);
        let half = CapacityShifters {
            absence_rate: 0.5,
            ..Default::default()
        };
        assert_eq!(effective_minutes(4, 200.0, &half), 400.0);
    }

    #[test]
    fn shifter_violations_name_fields() {
        let s = CapacityShifters {
            absence_rate: 1.2,
            ownership_multiplier: 0.0,
            facility_scale_multiplier: 1.0,
        };
        let names: Vec<_> = s.violations().into_iter().map(|(n, _)| n).collect();
        assert_eq!(names, vec!["absence_rate", "ownership_multiplier"]);
    }

    #[test]
    fn mode_zero_ignores_staff() {
        let f = fp(&[(0, 10.0)]);
        assert_eq!(
            feasible(
                &f,
                &[Tenths::ZERO],
                &[0],
                ConsumableStatus::Available,
                Mode::Unconstrained
            ),
            Feasibility::DeliverFull
        );
    }

    #[test]
    fn mode_two_strict_time() {
        let f = fp(&[(0, 10.0)]);
        let remaining = [Tenths::from_minutes_floor(9.99)];
        assert_eq!(
            feasible(&f, &remaining, &[3], ConsumableStatus::Available, Mode::TimeLedger),
            Feasibility::Infeasible(InfeasibleReason::Time)
        );
        let remaining = [Tenths::from_minutes_floor(10.0)];
        assert_eq!(
            feasible(&f, &remaining, &[3], ConsumableStatus::Available, Mode::TimeLedger),
            Feasibility::DeliverFull
        );
    }

    #[test]
    fn mode_one_needs_every_cadre() {
        let f = fp(&[(0, 5.0), (1, 5.0)]);
        let rem = [Tenths(1000), Tenths(1000)];
        assert_eq!(
            feasible(&f, &rem, &[1, 0], ConsumableStatus::Available, Mode::Presence),
            Feasibility::Infeasible(InfeasibleReason::Presence)
        );
        assert_eq!(
            feasible(&f, &rem, &[1, 0], ConsumableStatus::Available, Mode::Unconstrained),
            Feasibility::DeliverFull
        );
    }

    #[test]
    fn consumables_gate_all_modes() {
        let f = fp(&[(0, 5.0)]);
        for mode in Mode::ALL {
            assert_eq!(
                feasible(&f, &[Tenths(100)], &[1], ConsumableStatus::EssentialMissing, mode),
                Feasibility::Infeasible(InfeasibleReason::Consumables)
            );
            assert_eq!(
                feasible(&f, &[Tenths(100)], &[1], ConsumableStatus::OptionalMissing, mode),
                Feasibility::DeliverPartial
            );
        }
    }

    #[test]
    fn footprint_rejects_empty_or_zero() {
        assert!(AppointmentFootprint::from_minutes(&[]).is_err());
        assert!(AppointmentFootprint::from_minutes(&[(CadreId(0), 0.0)]).is_err());
        assert!(AppointmentFootprint::from_minutes(&[(CadreId(0), f64::NAN)]).is_err());
    }

    #[test]
    fn appointments_supported_matches_leontief() {
        let f = fp(&[(0, 6.0), (1, 4.0)]);
        let rem = [Tenths(1200), Tenths(300)];
        assert_eq!(f.appointments_supported(&rem), 7);
        let leo = f.as_leontief(2).output(&[120.0, 30.0]).unwrap();
        assert_eq!(leo.floor() as i64, 7);
    }

    #[test]
    fn mode_serde_numeric() {
        assert_eq!(serde_json::to_string(&Mode::Presence).unwrap(), "1");
        let m: Mode = serde_json::from_str("2").unwrap();
        assert_eq!(m, Mode::TimeLedger);
        assert!(serde_json::from_str::<Mode>("3").is_err());
    }

    fn positive_vec(n: usize) -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(0.01f64..100.0, n)
    }

    proptest! {
        #[test]
        fn leontief_homogeneous(a in positive_vec(3), x in positive_vec(3), k in 0.0f64..50.0) {
            let pf = ProductionFunction::Leontief { coefficients: a };
            let base = pf.output(&x).unwrap();
            let scaled: Vec<f64> = x.iter().map(|v| v * k).collect();
            let y = pf.output(&scaled).unwrap();
            prop_assert!((y - k * base).abs() <= 1e-12 * (k * base).abs().max(1e-300));
        }

        #[test]
        fn leontief_dominance(a in positive_vec(3), x in positive_vec(3)) {
            let pf = ProductionFunction::Leontief { coefficients: a.clone() };
            let y = pf.output(&x).unwrap();
            let ratios: Vec<f64> = a.iter().zip(&x).map(|(a, x)| x / a).collect();
            prop_assert!(ratios.iter().all(|r| y <= *r));
            prop_assert!(ratios.contains(&y));
        }

        #[test]
        fn monotone_in_each_input(
            x in positive_vec(3),
            bump in 0.0f64..10.0,
            i in 0usize..3,
            rho in prop_oneof![-5.0f64..-0.01, 0.01f64..1.0],
        ) {
            let fns = [
                ProductionFunction::Leontief { coefficients: vec![1.0, 2.0, 0.5] },
                ProductionFunction::CobbDouglas { scale: 1.3, exponents: vec![0.2, 0.5, 0.3] },
                ProductionFunction::Ces { scale: 0.9, shares: vec![0.2, 0.5, 0.3], rho },
            ];
            let mut y = x.clone();
            y[i] += bump;
            for f in &fns {
                let lo = f.output(&x).unwrap();
                let hi = f.output(&y).unwrap();
                prop_assert!(hi >= lo * (1.0 - 1e-12), "{:?}: {} < {}", f, hi, lo);
            }
        }
    }
}
