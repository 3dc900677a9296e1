//! Counter-based random streams.
//!
//! A draw is a pure function of `(master_seed, purpose, entity, day, index)`.
//! Nothing is consumed sequentially, so the value a person sees for their
//! incidence draw on a given day cannot depend on how many treatment or
//! consumable draws happened earlier in the run. This is what lets runs under
//! different constraint modes share every demand-side draw.
//!
//! The mixer is the SplitMix64 finalizer applied once per key component with
//! distinct odd multipliers, so keys that differ in any single component land
//! in unrelated parts of the output space.

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

/// Labels the stochastic process a draw belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Purpose {
    Incidence,
    Progression,
    Seeking,
    Consumables,
    Treatment,
    Demography,
}

impl Purpose {
    pub const ALL: [Purpose; 6] = [
        Purpose::Incidence,
        Purpose::Progression,
        Purpose::Seeking,
        Purpose::Consumables,
        Purpose::Treatment,
        Purpose::Demography,
    ];

    fn tag(self) -> u64 {
        match self {
            Purpose::Incidence => 0x1A2B_3C4D_0000_0001,
            Purpose::Progression => 0x1A2B_3C4D_0000_0002,
            Purpose::Seeking => 0x1A2B_3C4D_0000_0003,
            Purpose::Consumables => 0x1A2B_3C4D_0000_0004,
            Purpose::Treatment => 0x1A2B_3C4D_0000_0005,
            Purpose::Demography => 0x1A2B_3C4D_0000_0006,
        }
    }
}

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
fn absorb(state: u64, value: u64, k: u64) -> u64 {
    mix64(state ^ value.wrapping_mul(k).wrapping_add(0x9E37_79B9_7F4A_7C15))
}

/// Day number used in stream keys.
#[inline]
pub fn day_key(date: NaiveDate) -> u64 {
    date.num_days_from_ce() as i64 as u64
}

/// A fully keyed stream. Individual draws are addressed by `index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RngStream {
    pub master_seed: u64,
    pub purpose: Purpose,
    pub entity: u64,
    pub date: NaiveDate,
    base: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, purpose: Purpose, entity: u64, date: NaiveDate) -> Self {
        let mut h = mix64(master_seed ^ 0x6A09_E667_F3BC_C909);
        h = absorb(h, purpose.tag(), 0xD6E8_FEB8_6659_FD93);
        h = absorb(h, entity, 0xA076_1D64_78BD_642F);
        h = absorb(h, day_key(date), 0xE703_7ED1_A0B4_28DB);
        Self {
            master_seed,
            purpose,
            entity,
            date,
            base: h,
        }
    }

    #[inline]
    pub fn next_u64_at(&self, index: u64) -> u64 {
        absorb(self.base, index, 0x8EBC_6AF0_9C88_C6E3)
    }

    /// Uniform on [0, 1) with 53 bits of resolution.
    #[inline]
    pub fn uniform(&self, index: u64) -> f64 {
        (self.next_u64_at(index) >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    #[inline]
    pub fn bernoulli(&self, index: u64, p: f64) -> bool {
        self.uniform(index) < p
    }
}

/// Free-function form of [`RngStream::uniform`].
pub fn draw_uniform(stream: &RngStream, index: u64) -> f64 {
    stream.uniform(index)
}

/// Handle carried through a run; builds keyed streams on demand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Streams {
    pub master_seed: u64,
}

impl Streams {
    pub fn new(master_seed: u64) -> Self {
        Self { master_seed }
    }

    #[inline]
    pub fn stream(&self, purpose: Purpose, entity: u64, date: NaiveDate) -> RngStream {
        RngStream::new(self.master_seed, purpose, entity, date)
    }

    #[inline]
    pub fn uniform(&self, purpose: Purpose, entity: u64, date: NaiveDate, index: u64) -> f64 {
        self.stream(purpose, entity, date).uniform(index)
    }
}

/// Converts a rate per unit time into the probability of at least one event
/// over one unit, `1 - exp(-rate)`. Infinite rates map to 1.
#[inline]
pub fn hazard_to_probability(rate: f64) -> f64 {
    if rate.is_infinite() && rate > 0.0 {
        1.0
    } else {
        -(-rate).exp_m1()
    }
}

/// Picks an index from a list of non-negative weights that sum to ~1.
pub fn categorical(u: f64, shares: &[f64]) -> usize {
    let mut acc = 0.0;
    for (i, s) in shares.iter().enumerate() {
        acc += s;
        if u < acc {
            return i;
        }
    }
    // rounding slack: fall back to the last non-zero category
    shares.iter().rposition(|s| *s > 0.0).unwrap_or(0)
}
