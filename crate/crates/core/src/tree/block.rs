use crate::error::Result;
use crate::natural::Natural;
use crate::subtrees::{even_subtree_from_member, productive_child};

/// Odd grandchildren of `g`: `(j, i, value)` is the `i`-th child of the `j`-th
/// productive child, for the first `productive_count` productive children.
pub fn grandchild_block<V: Natural>(g: &V, productive_count: u32) -> Result<Vec<(u32, u32, V)>> {
    let mut block = Vec::new();
    for j in 1..=productive_count {
        let parent = productive_child(g, j)?;
        let subtree = even_subtree_from_member(&parent)?;
        block.extend(
            subtree
                .children
                .into_iter()
                .enumerate()
                .map(|(i, v)| (j, i as u32 + 1, v)),
        );
    }
    Ok(block)
}
