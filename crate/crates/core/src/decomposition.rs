//! 2-adic / 3-adic factorization of tree members and the residue taxonomy
//! of odd parents and even children.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::natural::{positive, require_even, require_odd, Natural};

/// An odd integer written as `2^n * 3^(N-n) * h - 1`.
///
/// `ascent` is `n`, the number of odd shortcut steps until the value turns
/// even; `width` is `N`, the number of odd children in the even sub-tree the
/// value belongs to; `cofactor` is `h`, odd and prime to 3.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OddDecomposition<V> {
    #[serde(rename = "n")]
    pub ascent: u32,
    #[serde(rename = "N")]
    pub width: u32,
    #[serde(rename = "h")]
    pub cofactor: V,
}

/// An even parent written as `3^N * h - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParentDecomposition<V> {
    #[serde(rename = "N")]
    pub width: u32,
    #[serde(rename = "h")]
    pub cofactor: V,
}

impl<V: Natural> ParentDecomposition<V> {
    pub fn new(width: u32, cofactor: V) -> Result<Self> {
        let dec = ParentDecomposition { width, cofactor };
        dec.validate()?;
        Ok(dec)
    }

    fn validate(&self) -> Result<()> {
        check_cofactor(&self.cofactor)?;
        if self.width == 0 {
            return Err(Error::InvalidDecomposition("N must be at least 1".into()));
        }
        Ok(())
    }

    /// The odd member with the given ascent, `1 <= ascent <= width`.
    pub fn child(&self, ascent: u32) -> OddDecomposition<V> {
        OddDecomposition {
            ascent,
            width: self.width,
            cofactor: self.cofactor.clone(),
        }
    }
}

impl<V: Natural> OddDecomposition<V> {
    pub fn new(ascent: u32, width: u32, cofactor: V) -> Result<Self> {
        let dec = OddDecomposition { ascent, width, cofactor };
        dec.validate()?;
        Ok(dec)
    }

    fn validate(&self) -> Result<()> {
        check_cofactor(&self.cofactor)?;
        if self.ascent == 0 {
            return Err(Error::InvalidDecomposition("n must be at least 1".into()));
        }
        if self.ascent > self.width {
            return Err(Error::InvalidDecomposition(format!(
                "n = {} exceeds N = {}",
                self.ascent, self.width
            )));
        }
        Ok(())
    }

    /// Parameters of the even parent this member reaches.
    pub fn parent(&self) -> ParentDecomposition<V> {
        ParentDecomposition {
            width: self.width,
            cofactor: self.cofactor.clone(),
        }
    }

    pub fn is_main_child(&self) -> bool {
        self.ascent == 1
    }
}

fn check_cofactor<V: Natural>(h: &V) -> Result<()> {
    if h.is_zero() || h.is_even() {
        return Err(Error::InvalidDecomposition(format!("h = {h} must be odd")));
    }
    if h.rem_small(3) == 0 {
        return Err(Error::InvalidDecomposition(format!("h = {h} is divisible by 3")));
    }
    Ok(())
}

/// Residue class of an odd integer modulo 6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OddClass {
    /// `6a - 1`
    M1,
    /// `6a - 3`, the flowers.
    M3,
    /// `6a - 5`
    M5,
}

impl OddClass {
    fn offset(self) -> u64 {
        match self {
            OddClass::M1 => 1,
            OddClass::M3 => 3,
            OddClass::M5 => 5,
        }
    }

    /// Whether `p * 2^b` is an even parent for members `p` of this class.
    pub fn capable_exponent(self, b: u32) -> bool {
        match self {
            OddClass::M1 => b % 2 == 0,
            OddClass::M5 => b % 2 == 1,
            OddClass::M3 => false,
        }
    }
}

impl fmt::Display for OddClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M{}", self.offset())
    }
}

/// `p = 6a - offset(class)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OddClassification<V> {
    pub class: OddClass,
    pub a: V,
}

/// `E = (6a - offset) * 2^b`, with the parent-capability verdict of the form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EvenForm<V> {
    pub odd: OddClassification<V>,
    pub exponent: u32,
    pub parent_capable: bool,
}

impl<V> EvenForm<V> {
    pub fn class(&self) -> OddClass {
        self.odd.class
    }
}

pub fn decompose_odd<V: Natural>(d: &V) -> Result<OddDecomposition<V>> {
    require_odd(d)?;
    let succ = d.add_small(1)?;
    let (k, ascent) = succ.valuation(2);
    let (cofactor, extra) = k.valuation(3);
    Ok(OddDecomposition {
        ascent,
        width: ascent + extra,
        cofactor,
    })
}

/// `2^n * 3^(N-n) * h - 1`.
pub fn compose_odd<V: Natural>(dec: &OddDecomposition<V>) -> Result<V> {
    dec.validate()?;
    let v = V::pow_exact(2, dec.ascent)?
        .mul_exact(&V::pow_exact(3, dec.width - dec.ascent)?)?
        .mul_exact(&dec.cofactor)?;
    Ok(v.sub_small(1).expect("product is at least 2"))
}

/// `Ok(None)` is the ordinary "not an even parent" answer for `T ≢ 2 (mod 3)`.
pub fn decompose_even_parent<V: Natural>(t: &V) -> Result<Option<ParentDecomposition<V>>> {
    require_even(t)?;
    if t.rem_small(3) != 2 {
        return Ok(None);
    }
    let (cofactor, width) = t.add_small(1)?.valuation(3);
    Ok(Some(ParentDecomposition { width, cofactor }))
}

/// `3^N * h - 1`.
pub fn compose_parent<V: Natural>(dec: &ParentDecomposition<V>) -> Result<V> {
    dec.validate()?;
    let v = V::pow_exact(3, dec.width)?.mul_exact(&dec.cofactor)?;
    Ok(v.sub_small(1).expect("product is at least 3"))
}

pub fn classify_odd<V: Natural>(p: &V) -> Result<OddClassification<V>> {
    require_odd(p)?;
    let class = match p.rem_small(6) {
        5 => OddClass::M1,
        3 => OddClass::M3,
        1 => OddClass::M5,
        _ => unreachable!("odd residues mod 6"),
    };
    let a = p.add_small(class.offset())?.div_floor(&V::small(6));
    Ok(OddClassification { class, a })
}

pub fn classify_even<V: Natural>(e: &V) -> Result<EvenForm<V>> {
    require_even(e)?;
    let (odd, exponent) = odd_part(e)?;
    let odd = classify_odd(&odd)?;
    let parent_capable = odd.class.capable_exponent(exponent);
    Ok(EvenForm {
        odd,
        exponent,
        parent_capable,
    })
}

/// `x = odd * 2^exponent` with `odd` odd.
pub fn odd_part<V: Natural>(x: &V) -> Result<(V, u32)> {
    positive(x)?;
    Ok(x.valuation(2))
}
