//! Main-child chains stacked above an odd integer and the grandparent bound.
//!
//! Above an odd `G` of class `6a-1` or `6a-5` sit main children
//! `Mc_1 = (2^b1 G - 1) / 3`, above those `Mc_2 = (2^b2 Mc_1 - 1) / 3`, and so
//! on. The exponent `b_j` is odd when `Mc_{j-1}` is of class `6a-1` and even
//! when it is of class `6a-5`; a value of class `6a-3` has nothing above it.

use std::cmp::Ordering;

use crate::decomposition::{classify_odd, compose_parent, OddClass, ParentDecomposition};
use crate::dynamics::{iterate, MapVariant};
use crate::error::{Error, Result};
use crate::natural::Natural;
use crate::subtrees::main_child;

/// Parity an exponent must have for `(2^b p - 1) / 3` to be an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentParity {
    Odd,
    Even,
    /// `p` is a multiple of 3: no main child exists above it.
    Flower,
}

impl ExponentParity {
    /// The exponent chosen by index `m >= 1`: `2m + 1` or `2m`.
    pub fn exponent(self, m: u32) -> Option<u32> {
        match self {
            ExponentParity::Odd => Some(2 * m + 1),
            ExponentParity::Even => Some(2 * m),
            ExponentParity::Flower => None,
        }
    }
}

pub fn next_exponent_parity<V: Natural>(p: &V) -> Result<ExponentParity> {
    Ok(match classify_odd(p)?.class {
        OddClass::M1 => ExponentParity::Odd,
        OddClass::M5 => ExponentParity::Even,
        OddClass::M3 => ExponentParity::Flower,
    })
}

/// `values[j]` is `Mc_{j+1}`; `exponents[j]` is the `b` that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MainChildChain<V> {
    pub base: V,
    pub exponents: Vec<u32>,
    pub values: Vec<V>,
}

impl<V: Natural> MainChildChain<V> {
    /// The top of the chain (`G` itself for an empty chain).
    pub fn top(&self) -> &V {
        self.values.last().unwrap_or(&self.base)
    }

    /// Whether the top value is a flower, so the chain cannot be extended.
    pub fn ends_in_flower(&self) -> bool {
        matches!(next_exponent_parity(self.top()), Ok(ExponentParity::Flower))
    }
}

/// Build the chain above `base` from the row indices `m_1, m_2, ...`.
pub fn mc_chain<V: Natural>(base: &V, indices: &[u32]) -> Result<MainChildChain<V>> {
    let mut chain = MainChildChain {
        base: base.clone(),
        exponents: Vec::with_capacity(indices.len()),
        values: Vec::with_capacity(indices.len()),
    };
    if next_exponent_parity(base)? == ExponentParity::Flower {
        return Err(Error::Flower(base.to_string()));
    }
    for &m in indices {
        if m == 0 {
            return Err(Error::Precondition("row indices start at 1".into()));
        }
        let below = chain.top().clone();
        let b = next_exponent_parity(&below)?
            .exponent(m)
            .ok_or_else(|| Error::Flower(below.to_string()))?;
        let lifted = below.shl_exact(b)?.sub_small(1).expect("2^b p >= 2");
        let next = lifted.div_exact(&V::small(3)).ok_or(Error::InexactDivision)?;
        chain.exponents.push(b);
        chain.values.push(next);
    }
    Ok(chain)
}

/// `(2^(b_1+...+b_J) G - sum_u 3^(u-1) 2^(b_(u+1)+...+b_J)) / 3^J`.
pub fn mc_closed_form<V: Natural>(base: &V, exponents: &[u32]) -> Result<V> {
    let total: u32 = exponents.iter().sum();
    let lead = base.shl_exact(total)?;
    let mut correction = V::zero();
    let mut tail: u32 = total;
    for (u, &b) in exponents.iter().enumerate() {
        tail -= b;
        let term = V::pow_exact(3, u as u32)?.shl_exact(tail)?;
        correction = correction.add_exact(&term)?;
    }
    let numer = lead.checked_sub(&correction).ok_or(Error::InexactDivision)?;
    let denom = V::pow_exact(3, exponents.len() as u32)?;
    numer.div_exact(&denom).ok_or(Error::InexactDivision)
}

/// Each chain value must iterate down onto the one below it in exactly `b_j`
/// shortcut steps.
pub fn verify_descent<V: Natural>(chain: &MainChildChain<V>) -> bool {
    let mut below = &chain.base;
    for (value, &b) in chain.values.iter().zip(&chain.exponents) {
        match iterate(value, u64::from(b), MapVariant::Shortcut) {
            Ok(ref landed) if landed == below => {}
            _ => return false,
        }
        below = value;
    }
    true
}

/// Exact comparison of the main child against `T / 2^b`, by cross-multiplying.
pub fn grandparent_comparison<V: Natural>(params: &ParentDecomposition<V>, b: u32) -> Result<Ordering> {
    let child = main_child(params)?;
    let parent = compose_parent(params)?;
    Ok(child.shl_exact(b)?.cmp(&parent))
}

pub fn grandparent_inequality<V: Natural>(params: &ParentDecomposition<V>, b: u32) -> Result<bool> {
    Ok(grandparent_comparison(params, b)? != Ordering::Less)
}
