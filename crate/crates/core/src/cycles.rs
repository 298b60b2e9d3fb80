//! Search for trajectories that return to where they started.
//!
//! A "1-trivial" cycle is an odd child `D = 2^n k - 1` whose even parent
//! `T = 3^n k - 1` halves straight back to `D`, i.e. `T = 2^b D`. Eliminating
//! `T` leaves `(2^(b+n) - 3^n) k = 2^b - 1`, which is enumerated exactly over a
//! window of `(b, n)`. Every algebraic candidate is then replayed through the
//! map before it is accepted.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::decomposition::{compose_parent, decompose_odd, odd_part, OddDecomposition};
use crate::dynamics::{iterate, step, MapVariant};
use crate::error::{Error, Result};
use crate::natural::Natural;

/// Default window; keeps `2^(b+n)` inside 128 bits.
pub const DEFAULT_EXPONENT_BOUND: u32 = 60;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleSolution<V> {
    pub b: u32,
    pub n: u32,
    pub k: V,
    /// The odd child.
    #[serde(rename = "D")]
    pub child: V,
    /// The even parent `2^b D`.
    #[serde(rename = "T")]
    pub parent: V,
    /// `(n, N, h)` of the child, recovering `k = 3^(N-n) h`.
    pub decomposition: OddDecomposition<V>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrivialCycleSearch<V> {
    pub b_max: u32,
    pub n_max: u32,
    /// `(b, n)` pairs with `2^(b+n) > 3^n`.
    pub positive_denominators: u64,
    /// Pairs where the denominator divides `2^b - 1`.
    pub exact_quotients: u64,
    pub solutions: Vec<CycleSolution<V>>,
    /// Integral odd candidates that failed the replay; expected empty.
    pub rejected: Vec<(u32, u32, V)>,
}

pub fn search_trivial_cycles<V: Natural>(b_max: u32, n_max: u32) -> Result<TrivialCycleSearch<V>> {
    if b_max == 0 || n_max == 0 {
        return Err(Error::Precondition("exponent bounds start at 1".into()));
    }
    let mut report = TrivialCycleSearch {
        b_max,
        n_max,
        positive_denominators: 0,
        exact_quotients: 0,
        solutions: Vec::new(),
        rejected: Vec::new(),
    };
    for b in 1..=b_max {
        let rhs = V::pow_exact(2, b)?.sub_small(1).expect("2^b >= 2");
        for n in 1..=n_max {
            let Some(denom) = V::pow_exact(2, b + n)?.checked_sub(&V::pow_exact(3, n)?) else {
                continue;
            };
            if denom.is_zero() {
                continue;
            }
            report.positive_denominators += 1;
            let Some(k) = rhs.div_exact(&denom) else {
                continue;
            };
            report.exact_quotients += 1;
            if k.is_even() {
                continue;
            }
            match replay(b, n, &k)? {
                Some(sol) => report.solutions.push(sol),
                None => report.rejected.push((b, n, k)),
            }
        }
    }
    Ok(report)
}

/// Check every defining identity of a candidate, algebraic and dynamic.
fn replay<V: Natural>(b: u32, n: u32, k: &V) -> Result<Option<CycleSolution<V>>> {
    let child = V::pow_exact(2, n)?.mul_exact(k)?.sub_small(1).expect("2^n k >= 2");
    let parent = child.shl_exact(b)?;
    let decomposition = decompose_odd(&child)?;
    let via_form = compose_parent(&decomposition.parent())?;
    let k_again = V::pow_exact(3, decomposition.width - decomposition.ascent)?
        .mul_exact(&decomposition.cofactor)?;
    let ok = decomposition.ascent == n
        && &k_again == k
        && via_form == parent
        && iterate(&child, u64::from(n), MapVariant::Shortcut)? == parent
        && odd_part(&parent)? == (child.clone(), b);
    Ok(ok.then_some(CycleSolution {
        b,
        n,
        k: k.clone(),
        child,
        parent,
        decomposition,
    }))
}

/// Pairs with `2^(b+n) - 1 = 3^n`, the reduced form the coprime case leads to.
pub fn reduced_equation_solutions<V: Natural>(b_max: u32, n_max: u32) -> Result<Vec<(u32, u32)>> {
    let mut found = Vec::new();
    for b in 1..=b_max {
        for n in 1..=n_max {
            let lhs = V::pow_exact(2, b + n)?.sub_small(1).expect("2^(b+n) >= 4");
            if lhs == V::pow_exact(3, n)? {
                found.push((b, n));
            }
        }
    }
    Ok(found)
}

/// Outcome of a forward scan for cycles avoiding 1.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EmpiricalCycleScan {
    pub limit: u128,
    /// `(first start reaching it, cycle rotated to begin at its minimum)`.
    pub cycles: Vec<(u128, Vec<u128>)>,
    /// Starts whose budget ran out before 1 or a revisit.
    pub exhausted: Vec<u128>,
}

/// Iterate every start in `[1, limit]` with a per-start visited set.
pub fn search_cycles_empirical(limit: u128, step_limit: u64) -> Result<EmpiricalCycleScan> {
    if limit == 0 {
        return Err(Error::Zero);
    }
    let mut scan = EmpiricalCycleScan {
        limit,
        ..Default::default()
    };
    let mut seen = BTreeSet::new();
    let mut visited: HashMap<u128, usize> = HashMap::new();
    let mut path = Vec::new();
    for start in 1..=limit {
        visited.clear();
        path.clear();
        let mut x = start;
        let mut steps = 0;
        loop {
            if let Some(&at) = visited.get(&x) {
                let cycle = canonical_cycle(&path[at..]);
                if cycle[0] != 1 && seen.insert(cycle.clone()) {
                    scan.cycles.push((start, cycle));
                }
                break;
            }
            if steps == step_limit {
                scan.exhausted.push(start);
                break;
            }
            visited.insert(x, path.len());
            path.push(x);
            x = step(&x, MapVariant::Shortcut)?;
            steps += 1;
        }
    }
    Ok(scan)
}

fn canonical_cycle(cycle: &[u128]) -> Vec<u128> {
    let pivot = cycle
        .iter()
        .enumerate()
        .min_by_key(|&(_, v)| v)
        .map(|(i, _)| i)
        .unwrap_or(0);
    cycle[pivot..].iter().chain(&cycle[..pivot]).copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn only_root(report: &TrivialCycleSearch<u128>) {
        assert_eq!(report.solutions.len(), 1);
        let s = &report.solutions[0];
        assert_eq!((s.b, s.n, s.k, s.child, s.parent), (1, 1, 1, 1, 2));
        assert!(report.rejected.is_empty());
    }

    #[test]
    fn window_60_has_only_the_root_cycle() {
        only_root(&search_trivial_cycles(60, 60).unwrap());
    }

    #[test]
    fn minimal_window() {
        let r = search_trivial_cycles::<u128>(1, 1).unwrap();
        only_root(&r);
        assert_eq!(r.positive_denominators, 1);
    }

    #[test]
    fn window_40_counts() {
        let r = search_trivial_cycles::<u128>(40, 40).unwrap();
        only_root(&r);
        assert_eq!(r.positive_denominators, 1140);
        assert_eq!(r.exact_quotients, 1);
    }

    #[test]
    fn bigint_window_beyond_128_bits() {
        let r = search_trivial_cycles::<BigUint>(100, 100).unwrap();
        assert_eq!(r.solutions.len(), 1);
        assert_eq!(r.solutions[0].child, BigUint::from(1u8));
        assert!(search_trivial_cycles::<u128>(100, 100).is_err());
    }

    #[test]
    fn reduced_equation_only_at_one_one() {
        assert_eq!(reduced_equation_solutions::<u128>(60, 60), Ok(vec![(1, 1)]));
    }

    #[test]
    fn empirical_small_scans() {
        let r = search_cycles_empirical(2, 10).unwrap();
        assert!(r.cycles.is_empty() && r.exhausted.is_empty());
        let r = search_cycles_empirical(10_000, 100_000).unwrap();
        assert!(r.cycles.is_empty() && r.exhausted.is_empty());
    }

    #[test]
    fn empirical_budget_exhaustion_is_per_start() {
        let r = search_cycles_empirical(30, 5).unwrap();
        assert!(r.exhausted.contains(&27));
        assert!(!r.exhausted.contains(&4));
    }

    #[test]
    fn canonical_rotation() {
        assert_eq!(canonical_cycle(&[7, 3, 9]), vec![3, 9, 7]);
        assert_eq!(canonical_cycle(&[2, 1]), vec![1, 2]);
    }
}
