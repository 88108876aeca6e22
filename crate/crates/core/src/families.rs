//! Standard families of circle-system graphs.
//!
//! These are the recurring examples of the theory: the theta configuration of
//! three parallel circles, bounding pairs, maximal trees of separating
//! circles, and the cycle-shaped systems whose circles form a single
//! necklace. Tests, benchmarks and documentation all build on them.

use crate::graph::{EdgeId, Mode, SurfaceGraph, VertexId};

fn vid(s: String) -> VertexId {
    VertexId::new(s)
}

fn build(
    vertices: Vec<(String, u32)>,
    edges: Vec<(String, String, String)>,
) -> SurfaceGraph {
    SurfaceGraph::new(
        Mode::System,
        vertices.into_iter().map(|(v, g)| (vid(v), g)).collect(),
        edges
            .into_iter()
            .map(|(e, t, h)| (EdgeId::new(e), vid(t), vid(h)))
            .collect(),
    )
    .expect("family constructors produce well-formed graphs")
}

/// Three parallel circles between two pieces `a` and `b` of the given genera:
/// the classes of the circles satisfy one relation (their sum vanishes) and
/// any two of them are independent. Closed genus is `g1 + g2 + 2`.
pub fn theta(g1: u32, g2: u32) -> SurfaceGraph {
    build(
        vec![("a".into(), g1), ("b".into(), g2)],
        vec![
            ("C".into(), "a".into(), "b".into()),
            ("D".into(), "a".into(), "b".into()),
            ("E".into(), "a".into(), "b".into()),
        ],
    )
}

/// The torus cut along one non-separating circle: a single genus-0 piece
/// whose only edge is a loop.
pub fn single_loop() -> SurfaceGraph {
    build(
        vec![("a".into(), 0)],
        vec![("C".into(), "a".into(), "a".into())],
    )
}

/// A bounding pair: two homology-equivalent circles cutting the surface into
/// pieces of the given genera. The edges are oriented head-to-tail so that a
/// transversal walk crossing both forward closes up. Closed genus is
/// `g1 + g2 + 1`.
pub fn bounding_pair(g1: u32, g2: u32) -> SurfaceGraph {
    build(
        vec![("a".into(), g1), ("b".into(), g2)],
        vec![
            ("C".into(), "a".into(), "b".into()),
            ("D".into(), "b".into(), "a".into()),
        ],
    )
}

/// A maximal tree of separating circles on a closed surface of genus
/// `g >= 2`: a path of `g - 2` pants pieces carrying `g` one-holed-torus
/// leaves, `2g - 3` circles in total, every one separating.
pub fn separating_tree(g: u32) -> SurfaceGraph {
    assert!(g >= 2, "needs genus at least 2");
    if g == 2 {
        return build(
            vec![("t01".into(), 1), ("t02".into(), 1)],
            vec![("s01".into(), "t01".into(), "t02".into())],
        );
    }
    let pants = g - 2;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for i in 1..=pants {
        vertices.push((format!("p{i:02}"), 0));
    }
    for j in 1..=g {
        vertices.push((format!("t{j:02}"), 1));
    }
    for i in 1..pants {
        edges.push((format!("q{i:02}"), format!("p{i:02}"), format!("p{:02}", i + 1)));
    }
    for j in 1..=g {
        let host = if j <= 2 {
            1
        } else if j <= pants + 1 {
            j - 1
        } else {
            pants
        };
        edges.push((format!("s{j:02}"), format!("p{host:02}"), format!("t{j:02}")));
    }
    build(vertices, edges)
}

/// A cycle of `g - 1` pants pieces, each carrying a one-holed-torus leaf, on
/// a closed surface of genus `g >= 2`. The `g - 1` cycle circles form one
/// necklace; the `g - 1` leaf circles are separating.
pub fn pants_cycle_with_leaves(g: u32) -> SurfaceGraph {
    assert!(g >= 2, "needs genus at least 2");
    let n = g - 1;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for i in 1..=n {
        vertices.push((format!("p{i:02}"), 0));
        vertices.push((format!("t{i:02}"), 1));
        edges.push((format!("s{i:02}"), format!("p{i:02}"), format!("t{i:02}")));
    }
    if n == 1 {
        edges.push(("c01".into(), "p01".into(), "p01".into()));
    } else {
        for i in 1..=n {
            let next = i % n + 1;
            edges.push((format!("c{i:02}"), format!("p{i:02}"), format!("p{next:02}")));
        }
    }
    build(vertices, edges)
}

/// A cycle of `g - 1` genus-1 pieces on a closed surface of genus `g >= 2`:
/// all circles are homology equivalent and form one necklace. For `g >= 3`
/// this is the graph shape of a necklace surface.
pub fn torus_cycle(g: u32) -> SurfaceGraph {
    assert!(g >= 2, "needs genus at least 2");
    let n = g - 1;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for i in 1..=n {
        vertices.push((format!("v{i:02}"), 1));
    }
    if n == 1 {
        edges.push(("c01".into(), "v01".into(), "v01".into()));
    } else {
        for i in 1..=n {
            let next = i % n + 1;
            edges.push((format!("c{i:02}"), format!("v{i:02}"), format!("v{next:02}")));
        }
    }
    build(vertices, edges)
}
