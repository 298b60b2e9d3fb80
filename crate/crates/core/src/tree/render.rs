use std::fmt::Write as _;
use std::io;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use super::{EdgeKind, Node, Parity, TreeGraph};

/// Graphviz text. Parent-capable evens are black, other evens gray, odd
/// values white; the cycle back-edge is dashed. Nodes and edges follow
/// insertion order, so sub-tree members appear by increasing `n` or `b`.
pub fn render_dot(tree: &TreeGraph) -> String {
    let mut out = String::new();
    out.push_str("digraph collatz {\n");
    out.push_str("  rankdir=BT;\n");
    out.push_str("  node [shape=circle, style=filled, fillcolor=white, fontcolor=black];\n");
    for node in tree.nodes() {
        let style = match node.parity() {
            Parity::Odd => "",
            Parity::Even if node.parent_capable() => ", fillcolor=black, fontcolor=white",
            Parity::Even => ", fillcolor=gray",
        };
        let _ = writeln!(out, "  n{v} [label=\"{v}\"{style}];", v = node.value);
    }
    for edge in tree.edges() {
        let style = match edge.kind {
            EdgeKind::CycleBack => " [style=dashed]",
            EdgeKind::OddSubtree | EdgeKind::EvenSubtree => "",
        };
        let _ = writeln!(out, "  n{} -> n{}{style};", edge.child, edge.parent);
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct NodeRecord {
    value: u128,
    parity: Parity,
    class: String,
    depth: u32,
}

impl From<&Node> for NodeRecord {
    fn from(n: &Node) -> Self {
        NodeRecord {
            value: n.value,
            parity: n.parity(),
            class: n.class_label(),
            depth: n.depth,
        }
    }
}

struct Canonical<'a>(&'a TreeGraph);

impl Serialize for Canonical<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let tree = self.0;
        let mut nodes: Vec<&Node> = tree.nodes().iter().collect();
        nodes.sort_unstable_by_key(|n| n.value);
        let mut edges: Vec<_> = tree.edges().collect();
        edges.sort_unstable();

        let mut s = serializer.serialize_struct("TreeGraph", 2)?;
        s.serialize_field("nodes", &Seq(|| nodes.iter().map(|&n| NodeRecord::from(n))))?;
        s.serialize_field("edges", &Seq(|| edges.iter()))?;
        s.end()
    }
}

struct Seq<F>(F);

impl<F, I> Serialize for Seq<F>
where
    F: Fn() -> I,
    I: Iterator,
    I::Item: Serialize,
{
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq((self.0)())
    }
}

/// Stream the canonical JSON form: nodes sorted by value, edges by child.
pub fn write_json<W: io::Write>(tree: &TreeGraph, writer: W) -> io::Result<()> {
    serde_json::to_writer(writer, &Canonical(tree)).map_err(io::Error::from)
}

pub fn export_json(tree: &TreeGraph) -> String {
    let mut buf = Vec::new();
    write_json(tree, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}
