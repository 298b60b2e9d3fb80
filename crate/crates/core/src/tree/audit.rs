use serde::Serialize;

use super::{Edge, TreeGraph};
use crate::dynamics::{step, trajectory, MapVariant, DEFAULT_STEP_LIMIT};
use crate::error::{Error, Result};

/// Values that occur more than once: those regenerated during expansion plus
/// any repeat found by sorting the node list.
pub fn audit_uniqueness(tree: &TreeGraph) -> Vec<u128> {
    let mut values: Vec<u128> = tree.nodes().iter().map(|n| n.value).collect();
    values.sort_unstable();
    let mut repeated: Vec<u128> = values.windows(2).filter(|w| w[0] == w[1]).map(|w| w[0]).collect();
    repeated.extend_from_slice(tree.duplicates());
    repeated.sort_unstable();
    repeated.dedup();
    repeated
}

/// Edges along which one shortcut step does not lead from child to parent.
pub fn audit_edges(tree: &TreeGraph) -> Vec<Edge> {
    tree.edges()
        .filter(|e| step(&e.child, MapVariant::Shortcut) != Ok(e.parent))
        .collect()
}

/// Largest value visited by the forward trajectories of `1..=m`.
pub fn forward_peak(m: u128) -> Result<u128> {
    let mut peak = 1;
    for d in 1..=m {
        let t = trajectory(&d, MapVariant::Shortcut, DEFAULT_STEP_LIMIT)?;
        if !t.terminated {
            return Err(Error::Precondition(format!("trajectory of {d} did not reach 1")));
        }
        peak = peak.max(t.peak);
    }
    Ok(peak)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageAudit {
    pub upto: u128,
    /// Integers in `[1, upto]` absent from the tree.
    pub missing: Vec<u128>,
    /// Forward peak over `[1, upto]`; the value bound needed for full coverage.
    pub required_value_bound: u128,
    pub value_bound: u128,
    pub truncated: bool,
}

impl CoverageAudit {
    /// Whether the tree was built large enough for `missing` to be meaningful.
    pub fn precondition_met(&self) -> bool {
        self.value_bound >= self.required_value_bound && !self.truncated
    }

    /// The audit as a hard result: a precondition violation is an error.
    pub fn into_result(self) -> Result<Vec<u128>> {
        if self.precondition_met() {
            Ok(self.missing)
        } else {
            Err(Error::Precondition(format!(
                "value bound {} is below the forward peak {} over [1, {}]{}",
                self.value_bound,
                self.required_value_bound,
                self.upto,
                if self.truncated { " or expansion was truncated" } else { "" }
            )))
        }
    }
}

pub fn audit_coverage(tree: &TreeGraph, upto: u128) -> Result<CoverageAudit> {
    let required_value_bound = forward_peak(upto)?;
    let missing = (1..=upto).filter(|&v| !tree.contains(v)).collect();
    Ok(CoverageAudit {
        upto,
        missing,
        required_value_bound,
        value_bound: tree.policy.value_bound,
        truncated: tree.truncated(),
    })
}
