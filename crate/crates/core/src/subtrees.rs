//! Even sub-trees (odd children sharing an even parent) and odd sub-trees
//! (even children sharing an odd parent).

use crate::decomposition::{
    classify_even, classify_odd, compose_odd, compose_parent, decompose_even_parent,
    decompose_odd, odd_part, OddClass, OddClassification, ParentDecomposition,
};
use crate::dynamics::{step, MapVariant};
use crate::error::{Error, Result};
use crate::natural::{require_even, require_odd, Natural};

/// An even parent `3^N h - 1` with its `N` odd children, largest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenSubTree<V> {
    pub parent: V,
    pub params: ParentDecomposition<V>,
    /// `D_1 > D_2 > ... > D_N`; `children[i - 1]` has ascent `i`.
    pub children: Vec<V>,
}

impl<V: Natural> EvenSubTree<V> {
    pub fn new(params: ParentDecomposition<V>) -> Result<Self> {
        let parent = compose_parent(&params)?;
        let children = (1..=params.width)
            .map(|n| compose_odd(&params.child(n)))
            .collect::<Result<Vec<_>>>()?;
        Ok(EvenSubTree { parent, params, children })
    }

    pub fn main_child(&self) -> &V {
        &self.children[0]
    }
}

/// An odd parent with the first few of its even children `p * 2^b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddSubTree<V> {
    pub parent: V,
    pub class: OddClassification<V>,
    /// `children[b - 1] = parent * 2^b`.
    pub children: Vec<V>,
    pub productive: Vec<bool>,
}

impl<V: Natural> OddSubTree<V> {
    pub fn productive_children(&self) -> impl Iterator<Item = &V> {
        self.children
            .iter()
            .zip(&self.productive)
            .filter_map(|(c, &p)| p.then_some(c))
    }
}

/// Rebuild the whole even sub-tree from any one member, odd child or parent.
pub fn even_subtree_from_member<V: Natural>(x: &V) -> Result<EvenSubTree<V>> {
    let params = if x.is_odd() {
        decompose_odd(x)?.parent()
    } else {
        decompose_even_parent(x)?.ok_or_else(|| Error::NotParentCapable(x.to_string()))?
    };
    EvenSubTree::new(params)
}

/// Each child must step onto its larger neighbour, and the main child onto
/// the parent.
pub fn children_chain_check<V: Natural>(st: &EvenSubTree<V>) -> bool {
    let mut targets = std::iter::once(&st.parent).chain(st.children.iter());
    st.children.iter().all(|child| {
        let target = targets.next().expect("one target per child");
        step(child, MapVariant::Shortcut).as_ref() == Ok(target)
    })
}

/// `2 * 3^(N-1) * h - 1`, the only odd integer stepping directly onto the parent.
pub fn main_child<V: Natural>(params: &ParentDecomposition<V>) -> Result<V> {
    compose_odd(&params.child(1))
}

pub fn odd_subtree<V: Natural>(p: &V, count: u32) -> Result<OddSubTree<V>> {
    let class = classify_odd(p)?;
    let mut children = Vec::with_capacity(count as usize);
    let mut productive = Vec::with_capacity(count as usize);
    let mut child = p.clone();
    for b in 1..=count {
        child = child.mul_small(2)?;
        productive.push(class.class.capable_exponent(b));
        children.push(child.clone());
    }
    debug_assert!(children
        .iter()
        .zip(&productive)
        .all(|(c, &f)| classify_even(c).map(|e| e.parent_capable) == Ok(f)));
    Ok(OddSubTree {
        parent: p.clone(),
        class,
        children,
        productive,
    })
}

/// Exponent of the `j`-th productive child (`j >= 1`) of an odd parent.
pub fn productive_exponent(class: OddClass, j: u32) -> Option<u32> {
    match class {
        OddClass::M1 => Some(2 * j),
        OddClass::M5 => Some(2 * j - 1),
        OddClass::M3 => None,
    }
}

/// The `j`-th productive child (`j >= 1`) of `p`.
pub fn productive_child<V: Natural>(p: &V, j: u32) -> Result<V> {
    let class = classify_odd(p)?.class;
    let b = productive_exponent(class, j).ok_or_else(|| Error::Flower(p.to_string()))?;
    p.shl_exact(b)
}

/// The odd `d` with `step(d) = e`, if one exists.
pub fn direct_odd_predecessor<V: Natural>(e: &V) -> Result<Option<V>> {
    require_even(e)?;
    let numer = e.mul_small(2)?.sub_small(1).expect("e >= 2");
    Ok(numer.div_exact(&V::small(3)))
}

/// The odd integer an even parent reaches by halving.
pub fn grandparent_of_parent<V: Natural>(t: &V) -> Result<V> {
    require_even(t)?;
    if decompose_even_parent(t)?.is_none() {
        return Err(Error::NotParentCapable(t.to_string()));
    }
    let (odd, _) = odd_part(t)?;
    require_odd(&odd)?;
    Ok(odd)
}
