//! Text serialization of networks and DOT export.
//!
//! The network file format is deliberately minimal because the edge-line
//! order is load-bearing: it defines the canonical edge indices that every
//! bitstring selection refers to.
//!
//! ```text
//! # phylonet v1
//! # optional comments
//! TAIL -> HEAD
//! ...
//! leaves: NAME NAME ...
//! ```
//!
//! Vertex names are nonempty strings over `[A-Za-z0-9_.-]`. The `leaves:`
//! trailer is optional; without it every out-degree-0 vertex is a leaf
//! labeled by its own name.

use std::fmt::Write as _;

use thiserror::Error;

use crate::network::{PhyloNetwork, RawGraph, ValidationMode, ValidationReport};
use crate::subgraph::EdgeSelection;
use crate::zigzag::TrailDecomposition;

pub const HEADER: &str = "# phylonet v1";

#[derive(Debug, Clone, Error)]
pub enum ParseError {
    #[error("first line must be exactly `{HEADER}`")]
    BadHeader,
    #[error("line {line}: malformed edge line `{content}`")]
    BadEdgeLine { line: usize, content: String },
    #[error("line {line}: duplicate edge")]
    DuplicateEdge { line: usize },
    #[error(transparent)]
    ValidationFailed(#[from] ValidationReport),
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'-'))
}

/// Parses the text format and validates the network in strict-binary mode.
pub fn parse_network(text: &str) -> Result<PhyloNetwork, ParseError> {
    parse_network_with(text, ValidationMode::Strict)
}

/// Parses the text format under the given validation mode.
pub fn parse_network_with(
    text: &str,
    mode: ValidationMode,
) -> Result<PhyloNetwork, ParseError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first.trim_end() == HEADER => {}
        _ => return Err(ParseError::BadHeader),
    }

    let mut raw = RawGraph::new();
    let mut seen: Vec<(String, String)> = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("leaves:") {
            let names: Vec<&str> = rest.split_whitespace().collect();
            if names.is_empty() || !names.iter().all(|n| valid_name(n)) {
                return Err(ParseError::BadEdgeLine {
                    line: line_no,
                    content: trimmed.to_string(),
                });
            }
            raw.declare_leaves(names);
            continue;
        }
        let bad = || ParseError::BadEdgeLine {
            line: line_no,
            content: trimmed.to_string(),
        };
        let (tail, head) = trimmed.split_once("->").ok_or_else(bad)?;
        let (tail, head) = (tail.trim(), head.trim());
        if !valid_name(tail) || !valid_name(head) || tail == head {
            return Err(bad());
        }
        if seen.iter().any(|(t, h)| t == tail && h == head) {
            return Err(ParseError::DuplicateEdge { line: line_no });
        }
        seen.push((tail.to_string(), head.to_string()));
        raw.add_edge(tail, head);
    }

    Ok(raw.validate(mode)?)
}

/// Canonical text form: header, edges in index order, explicit trailer.
/// Byte-deterministic for a given network.
pub fn write_network(net: &PhyloNetwork) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for e in net.edges() {
        let _ = writeln!(out, "{} -> {}", net.name(e.tail), net.name(e.head));
    }
    let labels: Vec<&str> = net.leaf_labels().values().map(String::as_str).collect();
    let _ = writeln!(out, "leaves: {}", labels.join(" "));
    out
}

/// Color cycle for trail highlighting in DOT output.
const TRAIL_COLORS: [&str; 8] = [
    "blue", "darkgreen", "darkorange", "purple", "brown", "deeppink", "cadetblue", "goldenrod",
];

/// Renders the network in DOT. Selected edges are solid and unselected ones
/// dashed; reticulations of the selected subgraph are filled red; with a
/// decomposition, edges are colored by trail.
pub fn export_dot(
    net: &PhyloNetwork,
    selection: Option<&EdgeSelection>,
    decomposition: Option<&TrailDecomposition>,
) -> String {
    let mut out = String::new();
    out.push_str("digraph phylonet {\n");
    out.push_str("  rankdir=TB;\n");
    out.push_str("  node [shape=circle, fontsize=10];\n");

    let full = EdgeSelection::full(net.edge_count());
    let sel = selection.unwrap_or(&full);
    let view = net
        .induce(sel)
        .expect("selections rendered to DOT are nonempty");

    for v in net.vertices() {
        let mut attrs = vec![format!("label=\"{}\"", net.name(v))];
        if net.is_leaf(v) {
            attrs.push("shape=box".to_string());
        }
        if view.contains_vertex(v) && view.indeg(v) == 2 {
            attrs.push("style=filled".to_string());
            attrs.push("fillcolor=red".to_string());
        }
        let _ = writeln!(out, "  \"{}\" [{}];", net.name(v), attrs.join(", "));
    }
    for e in net.edges() {
        let mut attrs = Vec::new();
        if !sel.contains(e.index) {
            attrs.push("style=dashed".to_string());
        }
        if let Some(d) = decomposition {
            let (trail, _) = d.trail_of_edge(e.index);
            attrs.push(format!(
                "color={}",
                TRAIL_COLORS[trail % TRAIL_COLORS.len()]
            ));
            attrs.push(format!("label=\"Z{}\"", trail + 1));
        }
        let attr_str = if attrs.is_empty() {
            String::new()
        } else {
            format!(" [{}]", attrs.join(", "))
        };
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\"{};",
            net.name(e.tail),
            net.name(e.head),
            attr_str
        );
    }
    out.push_str("}\n");
    out
}

/// One line per trail of a decomposition, for the CLI.
pub fn format_decomposition(d: &TrailDecomposition) -> String {
    let mut out = String::new();
    for (i, t) in d.trails().iter().enumerate() {
        let edges: Vec<String> = t.edges().iter().map(|e| format!("e{e}")).collect();
        let _ = writeln!(
            out,
            "Z{} {} {}: {}",
            i + 1,
            t.trail_type(),
            t.len(),
            edges.join(" ")
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_edge_file() {
        let net = parse_network("# phylonet v1\nrho -> a\n").unwrap();
        assert_eq!(net.edge_count(), 1);
        assert_eq!(net.leaf_labels().values().next().unwrap(), "a");
    }

    #[test]
    fn header_is_required() {
        assert!(matches!(
            parse_network("rho -> a\n"),
            Err(ParseError::BadHeader)
        ));
    }

    #[test]
    fn self_loop_is_a_bad_edge_line() {
        assert!(matches!(
            parse_network("# phylonet v1\nx -> x\n"),
            Err(ParseError::BadEdgeLine { line: 2, .. })
        ));
    }

    #[test]
    fn duplicate_edges_are_rejected() {
        assert!(matches!(
            parse_network("# phylonet v1\nr -> a\nr -> a\n"),
            Err(ParseError::DuplicateEdge { line: 3 })
        ));
    }

    #[test]
    fn bad_names_are_rejected() {
        assert!(matches!(
            parse_network("# phylonet v1\nr -> a b\n"),
            Err(ParseError::BadEdgeLine { .. })
        ));
        assert!(parse_network("# phylonet v1\nr.1 -> a-2_x\n").is_ok());
    }

    #[test]
    fn validation_failures_surface() {
        let err = parse_network("# phylonet v1\nr1 -> a\nr2 -> a\na -> x\n").unwrap_err();
        assert!(matches!(err, ParseError::ValidationFailed(_)));
    }

    #[test]
    fn round_trip_is_identity_on_edges_and_labels() {
        let text = "# phylonet v1\n# a comment\nrho -> a\nrho -> b\na -> x\nb -> x\nx -> c\na -> d\nb -> e\nleaves: c d e\n";
        // the comment is dropped but edges, order and labels survive
        let net = parse_network(text).unwrap();
        let written = write_network(&net);
        let reparsed = parse_network(&written).unwrap();
        assert_eq!(write_network(&reparsed), written);
        assert_eq!(reparsed.edge_count(), net.edge_count());
        for (a, b) in net.edges().iter().zip(reparsed.edges()) {
            assert_eq!(net.name(a.tail), reparsed.name(b.tail));
            assert_eq!(net.name(a.head), reparsed.name(b.head));
        }
    }

    #[test]
    fn declared_leaves_override_inference() {
        let err = parse_network("# phylonet v1\nrho -> a\nrho -> b\nleaves: a\n").unwrap_err();
        assert!(matches!(err, ParseError::ValidationFailed(_)));
    }

    #[test]
    fn dot_output_is_structurally_sound() {
        let net = parse_network("# phylonet v1\nr -> a\nr -> b\na -> x\nb -> x\nx -> c\na -> d\nb -> e\n").unwrap();
        let dot = export_dot(&net, None, None);
        assert!(dot.starts_with("digraph phylonet {"));
        assert!(dot.ends_with("}\n"));
        assert_eq!(dot.matches(" -> ").count(), net.edge_count());
        // exactly one reticulation is colored
        assert_eq!(dot.matches("fillcolor=red").count(), 1);
        // no dashed edges without a selection
        assert!(!dot.contains("dashed"));
    }

    #[test]
    fn dot_marks_unselected_edges_dashed() {
        let net = parse_network("# phylonet v1\nr -> a\nr -> b\na -> x\nb -> x\nx -> c\na -> d\nb -> e\n").unwrap();
        let sel = EdgeSelection::from_indices(net.edge_count(), &[0, 1, 2, 4, 5, 6]);
        let dot = export_dot(&net, Some(&sel), None);
        assert_eq!(dot.matches("dashed").count(), 1);
        // the induced subgraph is a tree, so nothing is red
        assert!(!dot.contains("fillcolor=red"));
    }
}
