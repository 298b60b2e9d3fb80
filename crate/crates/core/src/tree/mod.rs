//! Reverse construction of the tree from the root 1.
//!
//! Expansion is breadth-first by sub-tree row. An odd node spawns its even
//! children `p * 2^b` up to the value bound, each linked to its half
//! (`p * 2^b -> p * 2^(b-1)`, and `2p -> p`). A parent-capable even node spawns
//! its `N` odd children, linked `D_N -> ... -> D_1 -> T`. Every edge is thus a
//! single application of the shortcut map. Re-generating 1 under the parent 2
//! is recorded once as the cycle back-edge; any other repeat is a duplicate.

mod audit;
mod block;
mod render;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::decomposition::{classify_even, classify_odd, OddClass};
use crate::error::Result;
use crate::subtrees::even_subtree_from_member;

pub use audit::{audit_coverage, audit_edges, audit_uniqueness, forward_peak, CoverageAudit};
pub use block::grandchild_block;
pub use render::{export_json, render_dot, write_json};

/// Cuts for the otherwise infinite expansion. Any bound tripping stops it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionPolicy {
    /// Largest value admitted as a node.
    pub value_bound: u128,
    /// Nodes on this sub-tree row are kept but not expanded.
    pub depth_bound: u32,
    /// Maximum number of nodes.
    pub node_bound: usize,
}

impl ExpansionPolicy {
    pub fn bounded_by_value(value_bound: u128) -> Self {
        ExpansionPolicy {
            value_bound,
            depth_bound: u32::MAX,
            node_bound: usize::MAX,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeKind {
    /// Even child onto its half inside an odd sub-tree.
    OddSubtree,
    /// Odd child onto its neighbour (or the parent) inside an even sub-tree.
    EvenSubtree,
    /// The single edge 1 -> 2 closing the root cycle.
    CycleBack,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub child: u128,
    pub parent: u128,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

/// Compact per-node record. `exponent == 0` marks an odd node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Node {
    pub value: u128,
    pub depth: u32,
    /// Residue class of the value (odd) or of its odd part (even).
    pub class: OddClass,
    pub exponent: u8,
    edge_to: u32,
    kind: EdgeKind,
    /// Index of the parent of the sub-tree this node was generated in.
    subtree: u32,
}

const ROOT: u32 = 0;

impl Node {
    pub fn parity(&self) -> Parity {
        if self.exponent == 0 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn parent_capable(&self) -> bool {
        self.exponent > 0 && self.class.capable_exponent(u32::from(self.exponent))
    }

    /// `M1`, `M3`, `M5` for odd nodes; `M5*2^3` style for even ones.
    pub fn class_label(&self) -> String {
        match self.exponent {
            0 => self.class.to_string(),
            b => format!("{}*2^{}", self.class, b),
        }
    }
}

/// The reverse tree, stored in breadth-first insertion order.
#[derive(Debug, Clone)]
pub struct TreeGraph {
    pub policy: ExpansionPolicy,
    nodes: Vec<Node>,
    index: HashMap<u128, u32>,
    back_edge: Option<(u32, u32)>,
    duplicates: Vec<u128>,
    truncated: bool,
}

impl TreeGraph {
    pub fn root(&self) -> u128 {
        1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes in insertion order.
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, value: u128) -> Option<&Node> {
        self.index.get(&value).map(|&i| &self.nodes[i as usize])
    }

    pub fn contains(&self, value: u128) -> bool {
        self.index.contains_key(&value)
    }

    /// Whether the node or depth bound stopped expansion early.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Values generated a second time during expansion.
    pub fn duplicates(&self) -> &[u128] {
        &self.duplicates
    }

    /// Every edge, one per non-root node in insertion order, then the back-edge.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let tree_edges = self.nodes.iter().skip(1).map(|n| Edge {
            child: n.value,
            parent: self.nodes[n.edge_to as usize].value,
            kind: n.kind,
        });
        let back = self.back_edge.map(|(c, p)| Edge {
            child: self.nodes[c as usize].value,
            parent: self.nodes[p as usize].value,
            kind: EdgeKind::CycleBack,
        });
        tree_edges.chain(back)
    }

    /// Members generated in the sub-tree whose parent is `value`, in order.
    pub fn subtree_members(&self, value: u128) -> Vec<u128> {
        let Some(&at) = self.index.get(&value) else {
            return Vec::new();
        };
        let mut members: Vec<u128> = self
            .nodes
            .iter()
            .skip(1)
            .filter(|n| n.subtree == at)
            .map(|n| n.value)
            .collect();
        if let Some((c, p)) = self.back_edge {
            if p == at {
                members.insert(0, self.nodes[c as usize].value);
            }
        }
        members
    }

    /// Odd values on the given sub-tree row, plus the root when the cycle
    /// back-edge regenerates it on that row.
    pub fn odd_row(&self, depth: u32) -> Vec<u128> {
        let mut row: Vec<u128> = self
            .nodes
            .iter()
            .filter(|n| n.depth == depth && n.parity() == Parity::Odd)
            .map(|n| n.value)
            .collect();
        if let Some((_, p)) = self.back_edge {
            if self.nodes[p as usize].depth + 1 == depth {
                row.insert(0, self.root());
            }
        }
        row
    }

    fn insert(&mut self, value: u128, depth: u32, edge_to: u32, kind: EdgeKind, subtree: u32) -> Result<Option<u32>> {
        if let Some(&existing) = self.index.get(&value) {
            if existing == ROOT && self.nodes[edge_to as usize].value == 2 && self.back_edge.is_none() {
                self.back_edge = Some((ROOT, edge_to));
            } else {
                self.duplicates.push(value);
            }
            return Ok(Some(existing));
        }
        if self.nodes.len() >= self.policy.node_bound {
            self.truncated = true;
            return Ok(None);
        }
        let (class, exponent) = if value % 2 == 1 {
            (classify_odd(&value)?.class, 0)
        } else {
            let form = classify_even(&value)?;
            (form.class(), form.exponent as u8)
        };
        let id = self.nodes.len() as u32;
        self.nodes.push(Node {
            value,
            depth,
            class,
            exponent,
            edge_to,
            kind,
            subtree,
        });
        self.index.insert(value, id);
        Ok(Some(id))
    }
}

/// Breadth-first reverse expansion from 1 under `policy`.
pub fn build_tree(policy: ExpansionPolicy) -> Result<TreeGraph> {
    let mut tree = TreeGraph {
        policy,
        nodes: Vec::new(),
        index: HashMap::new(),
        back_edge: None,
        duplicates: Vec::new(),
        truncated: false,
    };
    if policy.value_bound == 0 || policy.node_bound == 0 {
        tree.truncated = true;
        return Ok(tree);
    }
    tree.insert(1, 0, ROOT, EdgeKind::CycleBack, ROOT)?;

    let mut cursor = 0;
    'expand: while cursor < tree.nodes.len() {
        let at = cursor as u32;
        let node = tree.nodes[cursor];
        cursor += 1;
        if node.depth >= policy.depth_bound {
            tree.truncated = true;
            continue;
        }
        let depth = node.depth + 1;
        match node.parity() {
            Parity::Odd => {
                let mut below = at;
                let mut child = node.value;
                while let Some(next) = child.checked_mul(2).filter(|&c| c <= policy.value_bound) {
                    child = next;
                    match tree.insert(child, depth, below, EdgeKind::OddSubtree, at)? {
                        Some(id) => below = id,
                        None => break 'expand,
                    }
                }
            }
            Parity::Even if node.parent_capable() => {
                let subtree = even_subtree_from_member(&node.value)?;
                let mut above = at;
                for child in subtree.children {
                    match tree.insert(child, depth, above, EdgeKind::EvenSubtree, at)? {
                        Some(id) => above = id,
                        None => break 'expand,
                    }
                }
            }
            Parity::Even => {}
        }
    }
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn policy(value_bound: u128, depth_bound: u32) -> ExpansionPolicy {
        ExpansionPolicy {
            value_bound,
            depth_bound,
            node_bound: 10_000,
        }
    }

    #[test]
    fn minimal_tree() {
        let t = build_tree(policy(2, 8)).unwrap();
        let values: Vec<u128> = t.nodes().iter().map(|n| n.value).collect();
        assert_eq!(values, vec![1, 2]);
        let edges: Vec<Edge> = t.edges().collect();
        assert_eq!(
            edges,
            vec![
                Edge { child: 2, parent: 1, kind: EdgeKind::OddSubtree },
                Edge { child: 1, parent: 2, kind: EdgeKind::CycleBack },
            ]
        );
        assert!(t.duplicates().is_empty());
    }

    #[test]
    fn bound_100_contains_doubling_chain_and_children_of_8() {
        let t = build_tree(policy(100, 8)).unwrap();
        let edges: Vec<Edge> = t.edges().collect();
        for (c, p) in [(8, 4), (4, 2), (2, 1)] {
            assert!(edges.contains(&Edge { child: c, parent: p, kind: EdgeKind::OddSubtree }));
        }
        assert_eq!(t.subtree_members(8), vec![5, 3]);
        assert_eq!(t.subtree_members(2), vec![1]);
        assert!(t.node(8).unwrap().parent_capable());
        assert!(!t.node(4).unwrap().parent_capable());
    }

    #[test]
    fn grandchildren_row_of_root() {
        let t = build_tree(policy(200, 2)).unwrap();
        assert_eq!(t.odd_row(2), vec![1, 5, 3, 21, 85]);
        assert!(t.truncated());
    }

    #[test]
    fn node_bound_truncates() {
        let t = build_tree(ExpansionPolicy { value_bound: 1000, depth_bound: 50, node_bound: 10 }).unwrap();
        assert_eq!(t.len(), 10);
        assert!(t.truncated());
    }

    #[test]
    fn class_labels() {
        let t = build_tree(policy(100, 8)).unwrap();
        assert_eq!(t.node(1).unwrap().class_label(), "M5");
        assert_eq!(t.node(40).unwrap().class_label(), "M1*2^3");
        assert_eq!(t.node(40).unwrap().parity(), Parity::Even);
    }
}
