//! Worker time in integer tenths of a minute.
//!
//! Ledger arithmetic is exact in this unit. Conversions from configured
//! minutes round capacity down and requirements up, so a quantised ledger
//! never admits an appointment that the unquantised one would refuse.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Sub, SubAssign};

const SLACK: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tenths(pub i64);

impl Tenths {
    pub const ZERO: Tenths = Tenths(0);

    /// Capacity conversion: rounds down to the nearest tenth.
    pub fn from_minutes_floor(minutes: f64) -> Self {
        Tenths((minutes * 10.0 + SLACK).floor() as i64)
    }

    /// Requirement conversion: rounds up to the nearest tenth.
    pub fn from_minutes_ceil(minutes: f64) -> Self {
        Tenths((minutes * 10.0 - SLACK).ceil() as i64)
    }

    pub fn as_minutes(self) -> f64 {
        self.0 as f64 / 10.0
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn checked_add(self, rhs: Tenths) -> Option<Tenths> {
        self.0.checked_add(rhs.0).map(Tenths)
    }
}

impl Add for Tenths {
    type Output = Tenths;
    fn add(self, rhs: Tenths) -> Tenths {
        Tenths(self.0 + rhs.0)
    }
}

impl Sub for Tenths {
    type Output = Tenths;
    fn sub(self, rhs: Tenths) -> Tenths {
        Tenths(self.0 - rhs.0)
    }
}

impl AddAssign for Tenths {
    fn add_assign(&mut self, rhs: Tenths) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Tenths {
    fn sub_assign(&mut self, rhs: Tenths) {
        self.0 -= rhs.0;
    }
}

/// Prints as minutes with exactly one decimal, e.g. `1567.2`.
impl fmt::Display for Tenths {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let a = self.0.unsigned_abs();
        write!(f, "{sign}{}.{}", a / 10, a % 10)
    }
}
