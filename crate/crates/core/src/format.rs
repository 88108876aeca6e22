//! Plain-text interchange format for graphs and multi-twists.
//!
//! A graph file holds one directive per line: an optional `mode` line, then
//! `vertex <name> <genus>` and `edge <name> <tail> <head>` lines. Blank
//! lines and `#` comments are ignored. Serialization is canonical (mode
//! first, vertices sorted, then edges sorted), so parse and serialize round
//! trip byte for byte on canonical input.
//!
//! A twist file holds `twist <circle> <exponent>` lines, one per circle.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{EdgeId, Mode, SurfaceGraph, VertexId};
use crate::homology::MultiTwist;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {0}: unknown directive {1:?}")]
    UnknownDirective(usize, String),
    #[error("line {0}: expected {1}")]
    Malformed(usize, &'static str),
    #[error("line {0}: unknown mode {1:?} (expected general or system)")]
    UnknownMode(usize, String),
    #[error("line {0}: mode already set")]
    DuplicateMode(usize),
    #[error("line {0}: mode must precede vertices and edges")]
    LateMode(usize),
    #[error("line {0}: invalid number {1:?}")]
    BadNumber(usize, String),
    #[error("line {0}: twist on {1} repeats an earlier line")]
    DuplicateTwist(usize, EdgeId),
    #[error("line {0}: twist on {1} names no circle of the graph")]
    UnknownCircle(usize, EdgeId),
    #[error("graph is not well formed: {0}")]
    BadGraph(#[from] crate::error::Error),
}

fn tokens(line: &str) -> Vec<&str> {
    let stripped = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    stripped.split_whitespace().collect()
}

/// Parses a graph file.
pub fn parse_graph(input: &str) -> Result<SurfaceGraph, ParseError> {
    let mut mode = None;
    let mut verts = Vec::new();
    let mut edges = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        let toks = tokens(line);
        match toks.as_slice() {
            [] => {}
            ["mode", m] => {
                if mode.is_some() {
                    return Err(ParseError::DuplicateMode(lineno));
                }
                if !verts.is_empty() || !edges.is_empty() {
                    return Err(ParseError::LateMode(lineno));
                }
                mode = Some(match *m {
                    "general" => Mode::General,
                    "system" => Mode::System,
                    other => return Err(ParseError::UnknownMode(lineno, other.to_owned())),
                });
            }
            ["mode", ..] => return Err(ParseError::Malformed(lineno, "mode <general|system>")),
            ["vertex", name, genus] => {
                let genus: u32 = genus
                    .parse()
                    .map_err(|_| ParseError::BadNumber(lineno, (*genus).to_owned()))?;
                verts.push((VertexId::new(*name), genus));
            }
            ["vertex", ..] => return Err(ParseError::Malformed(lineno, "vertex <name> <genus>")),
            ["edge", name, tail, head] => {
                edges.push((EdgeId::new(*name), VertexId::new(*tail), VertexId::new(*head)));
            }
            ["edge", ..] => return Err(ParseError::Malformed(lineno, "edge <name> <tail> <head>")),
            [directive, ..] => {
                return Err(ParseError::UnknownDirective(lineno, (*directive).to_owned()))
            }
        }
    }
    let graph = SurfaceGraph::new(mode.unwrap_or(Mode::System), verts, edges)?;
    Ok(graph)
}

/// Serializes a graph canonically.
pub fn serialize_graph(graph: &SurfaceGraph) -> String {
    let mut out = String::new();
    writeln!(out, "mode {}", graph.mode()).unwrap();
    for (v, genus) in graph.vertices() {
        writeln!(out, "vertex {v} {genus}").unwrap();
    }
    for (e, tail, head) in graph.edges() {
        writeln!(out, "edge {e} {tail} {head}").unwrap();
    }
    out
}

/// Parses a twist file against the graph its circles must belong to.
pub fn parse_twist(input: &str, graph: &SurfaceGraph) -> Result<MultiTwist, ParseError> {
    let mut twist = MultiTwist::default();
    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        let toks = tokens(line);
        match toks.as_slice() {
            [] => {}
            ["twist", circle, exponent] => {
                let circle = EdgeId::new(*circle);
                if !graph.has_edge(&circle) {
                    return Err(ParseError::UnknownCircle(lineno, circle));
                }
                if twist.entry(&circle).is_some() {
                    return Err(ParseError::DuplicateTwist(lineno, circle));
                }
                let exponent: i64 = exponent
                    .parse()
                    .map_err(|_| ParseError::BadNumber(lineno, (*exponent).to_owned()))?;
                twist.set(circle, exponent);
            }
            ["twist", ..] => return Err(ParseError::Malformed(lineno, "twist <circle> <exponent>")),
            [directive, ..] => {
                return Err(ParseError::UnknownDirective(lineno, (*directive).to_owned()))
            }
        }
    }
    Ok(twist)
}

/// Serializes a multi-twist, circles in sorted order.
pub fn serialize_twist(twist: &MultiTwist) -> String {
    let mut out = String::new();
    for (e, c) in twist.entries() {
        writeln!(out, "twist {e} {c}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn parses_a_commented_graph() {
        let text = "\
# a two-piece surface
mode system

vertex a 1   # three-holed torus
vertex b 1
edge C a b
edge D a b
edge E a b
";
        let graph = parse_graph(text).unwrap();
        assert_eq!(graph, families::theta(1, 1));
        assert_eq!(graph.mode(), Mode::System);
    }

    #[test]
    fn mode_defaults_to_system() {
        let graph = parse_graph("vertex a 1\nedge C a a\n").unwrap();
        assert_eq!(graph.mode(), Mode::System);
    }

    #[test]
    fn round_trip_is_byte_stable() {
        for graph in [
            families::theta(1, 2),
            families::bounding_pair(1, 1),
            families::separating_tree(4),
            families::pants_cycle_with_leaves(5),
        ] {
            let text = serialize_graph(&graph);
            let back = parse_graph(&text).unwrap();
            assert_eq!(back, graph);
            assert_eq!(serialize_graph(&back), text);
        }
    }

    #[test]
    fn rejects_malformed_lines_with_line_numbers() {
        assert_eq!(
            parse_graph("vertex a 1\nvertex b\n"),
            Err(ParseError::Malformed(2, "vertex <name> <genus>"))
        );
        assert_eq!(
            parse_graph("piece a 1\n"),
            Err(ParseError::UnknownDirective(1, "piece".to_owned()))
        );
        assert_eq!(
            parse_graph("vertex a x\n"),
            Err(ParseError::BadNumber(1, "x".to_owned()))
        );
        assert_eq!(
            parse_graph("mode torus\n"),
            Err(ParseError::UnknownMode(1, "torus".to_owned()))
        );
        assert_eq!(
            parse_graph("vertex a 1\nmode system\n"),
            Err(ParseError::LateMode(2))
        );
        assert_eq!(
            parse_graph("mode system\nmode system\n"),
            Err(ParseError::DuplicateMode(2))
        );
        assert!(matches!(
            parse_graph("vertex a 1\nedge C a b\n"),
            Err(ParseError::BadGraph(_))
        ));
    }

    #[test]
    fn twist_round_trip_and_validation() {
        let theta = families::theta(1, 1);
        let twist = parse_twist("twist C 2\ntwist D -2\n", &theta).unwrap();
        assert_eq!(twist.exponent(&EdgeId::new("C")), 2);
        assert_eq!(serialize_twist(&twist), "twist C 2\ntwist D -2\n");

        assert_eq!(
            parse_twist("twist Z 1\n", &theta),
            Err(ParseError::UnknownCircle(1, EdgeId::new("Z")))
        );
        assert_eq!(
            parse_twist("twist C 1\ntwist C 2\n", &theta),
            Err(ParseError::DuplicateTwist(2, EdgeId::new("C")))
        );
        assert_eq!(
            parse_twist("twist C x\n", &theta),
            Err(ParseError::BadNumber(1, "x".to_owned()))
        );
    }
}
