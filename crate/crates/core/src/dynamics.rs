//! The forward Collatz map and its iterates.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::natural::{positive, require_odd, Natural};

/// Step budget for a single trajectory.
pub const DEFAULT_STEP_LIMIT: u64 = 1 << 16;

/// Which form of the odd branch to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapVariant {
    /// odd `d` maps to `(3d + 1) / 2`.
    #[default]
    Shortcut,
    /// odd `d` maps to `3d + 1`.
    Classic,
}

impl fmt::Display for MapVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapVariant::Shortcut => "shortcut",
            MapVariant::Classic => "classic",
        })
    }
}

impl FromStr for MapVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "shortcut" => Ok(MapVariant::Shortcut),
            "classic" => Ok(MapVariant::Classic),
            other => Err(format!("unknown map variant `{other}`")),
        }
    }
}

/// A forward orbit, cut at 1 or at the step budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory<V> {
    pub start: V,
    pub values: Vec<V>,
    /// Whether 1 was reached.
    pub terminated: bool,
    pub steps: u64,
    pub peak: V,
}

/// One application of the map.
pub fn step<V: Natural>(d: &V, variant: MapVariant) -> Result<V> {
    positive(d)?;
    if d.is_even() {
        return Ok(d.div_floor(&V::small(2)));
    }
    let tripled = d.mul_small(3)?.add_small(1)?;
    Ok(match variant {
        MapVariant::Shortcut => tripled.div_floor(&V::small(2)),
        MapVariant::Classic => tripled,
    })
}

/// `t` applications of the map; `t = 0` is the identity.
pub fn iterate<V: Natural>(d: &V, t: u64, variant: MapVariant) -> Result<V> {
    positive(d)?;
    let mut x = d.clone();
    for _ in 0..t {
        x = step(&x, variant)?;
    }
    Ok(x)
}

/// Iterate from `d` until 1 or until `step_limit` steps have been taken.
pub fn trajectory<V: Natural>(d: &V, variant: MapVariant, step_limit: u64) -> Result<Trajectory<V>> {
    positive(d)?;
    let mut values = vec![d.clone()];
    let mut peak = d.clone();
    let mut x = d.clone();
    let mut steps = 0;
    while !x.is_unit() && steps < step_limit {
        x = step(&x, variant)?;
        steps += 1;
        if x > peak {
            peak = x.clone();
        }
        values.push(x.clone());
    }
    Ok(Trajectory {
        start: d.clone(),
        terminated: x.is_unit(),
        values,
        steps,
        peak,
    })
}

/// Closed form of `n` consecutive odd shortcut steps: `3^n (D + 1) / 2^n - 1`.
///
/// Requires `2^n | D + 1`. When the first `n - 1` iterates of `D` are odd this
/// equals `iterate(D, n, Shortcut)`.
pub fn odd_ascent<V: Natural>(d: &V, n: u32) -> Result<V> {
    require_odd(d)?;
    let succ = d.add_small(1)?;
    let halved = succ
        .div_exact(&V::pow_exact(2, n)?)
        .ok_or_else(|| Error::AscentNotIntegral { value: d.to_string(), n })?;
    let top = halved.mul_exact(&V::pow_exact(3, n)?)?;
    Ok(top.sub_small(1).expect("3^n * k >= 1"))
}
