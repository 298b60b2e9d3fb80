//! Main-child chain grid: recursive vs closed form, descent, monotonicity.

use arbor_core::decomposition::{classify_odd, OddClass};
use arbor_core::trajectories::{mc_chain, mc_closed_form, verify_descent};
use arbor_core::Error;

fn vectors(max_len: usize, max_m: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for v in &frontier {
            for m in 1..=max_m {
                let mut w: Vec<u32> = v.clone();
                w.push(m);
                next.push(w);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn bases() -> impl Iterator<Item = u128> {
    (1..=999u128).step_by(2).filter(|g| classify_odd(g).unwrap().class != OddClass::M3)
}

#[test]
fn recursive_and_closed_form_agree_and_descend() {
    let grid = vectors(4, 4);
    let mut built = 0;
    for g in bases() {
        for m in &grid {
            match mc_chain(&g, m) {
                Ok(chain) => {
                    built += 1;
                    assert_eq!(mc_closed_form(&g, &chain.exponents).unwrap(), *chain.top());
                    for j in 1..=chain.values.len() {
                        assert_eq!(
                            mc_closed_form(&g, &chain.exponents[..j]).unwrap(),
                            chain.values[j - 1]
                        );
                    }
                    assert!(verify_descent(&chain), "{g} {m:?}");
                }
                Err(Error::Flower(_)) => {}
                Err(e) => panic!("{g} {m:?}: {e}"),
            }
        }
    }
    assert!(built > 10_000);
}

#[test]
fn strictly_increasing_in_each_index() {
    let grid = vectors(3, 4);
    for g in bases() {
        for m in grid.iter().filter(|m| !m.is_empty()) {
            let Ok(base) = mc_chain(&g, m) else { continue };
            for i in 0..m.len() {
                let mut bumped = m.clone();
                bumped[i] += 1;
                if let Ok(other) = mc_chain(&g, &bumped) {
                    assert!(other.top() > base.top(), "{g} {m:?} -> {bumped:?}");
                }
            }
        }
    }
}

#[test]
fn closed_form_is_injective_and_increasing_in_the_base() {
    // Fixed exponent vector: the closed form is affine in G with positive slope.
    for exps in [vec![3u32], vec![2], vec![3, 2], vec![2, 3, 4], vec![5, 4, 3, 2]] {
        let mut previous: Option<(u128, u128)> = None;
        for g in bases() {
            let Ok(v) = mc_closed_form(&g, &exps) else { continue };
            if let Some((pg, pv)) = previous {
                assert!(v > pv, "{exps:?}: {pg} -> {pv}, {g} -> {v}");
            }
            previous = Some((g, v));
        }
    }
}
