//! Graphviz export of the KR-graph.

use std::fmt::Write as _;

use krtorus_core::ReebGraph;

/// Renders `g` bottom-up by level. `special`, when given, is drawn as a
/// double circle.
pub fn reeb_dot(g: &ReebGraph, special: Option<usize>) -> String {
    let mut out = String::from("graph kr {\n  rankdir=BT;\n  node [shape=circle, fontsize=10];\n");
    for (id, node) in g.nodes().iter().enumerate() {
        let kinds: Vec<String> = node.kinds.iter().map(|k| k.to_string()).collect();
        let shape = if special == Some(id) { ", shape=doublecircle" } else { "" };
        writeln!(out, "  n{id} [label=\"{id}\\n{}\\n{}\"{shape}];", node.level, kinds.join(" ")).unwrap();
    }
    for (id, e) in g.edges().iter().enumerate() {
        writeln!(out, "  n{} -- n{} [label=\"e{id}\"];", e.lower, e.upper).unwrap();
    }
    // same critical level, same rank
    for (index, _) in g.critical_values().iter().enumerate() {
        let same: Vec<String> =
            g.nodes().iter().enumerate().filter(|(_, n)| n.level_index == index).map(|(id, _)| format!("n{id}")).collect();
        if same.len() > 1 {
            writeln!(out, "  {{ rank=same; {} }}", same.join("; ")).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::Preset;
    use krtorus_core::{compute_reeb, ClosedSurface};

    #[test]
    fn two_cell_graph() {
        let s = ClosedSurface::new(Preset::TwoCell.sample(16)).unwrap();
        let g = compute_reeb(&s).unwrap();
        let dot = reeb_dot(&g, Some(1));
        assert!(dot.starts_with("graph kr {"));
        assert!(dot.ends_with("}\n"));
        assert_eq!(dot.matches(" -- ").count(), g.edges().len());
        assert_eq!(dot.matches("doublecircle").count(), 1);
        assert_eq!(dot.matches("[label=\"").count(), g.nodes().len() + g.edges().len());
    }
}
