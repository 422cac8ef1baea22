//! Edge colourings of bipartite multigraphs.
//!
//! Edges are identified by their position in the edge list, so parallel
//! edges are distinct. Colours are zero-based.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColouringError {
    #[error("edge {edge} joins ({left}, {right}) but the graph has {lefts} left and {rights} right vertices")]
    VertexOutOfRange {
        edge: usize,
        left: usize,
        right: usize,
        lefts: usize,
        rights: usize,
    },
    #[error("number of colours must be positive")]
    ZeroColours,
    #[error("{side} vertex {vertex} has degree {degree}, not a multiple of {k}")]
    DegreeNotDivisible {
        side: &'static str,
        vertex: usize,
        degree: usize,
        k: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BipartiteMultigraph {
    left: usize,
    right: usize,
    edges: Vec<(usize, usize)>,
}

impl BipartiteMultigraph {
    pub fn new(left: usize, right: usize) -> Self {
        BipartiteMultigraph {
            left,
            right,
            edges: Vec::new(),
        }
    }

    pub fn with_edges(
        left: usize,
        right: usize,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, ColouringError> {
        for (edge, &(u, v)) in edges.iter().enumerate() {
            if u >= left || v >= right {
                return Err(ColouringError::VertexOutOfRange {
                    edge,
                    left: u,
                    right: v,
                    lefts: left,
                    rights: right,
                });
            }
        }
        Ok(BipartiteMultigraph { left, right, edges })
    }

    /// Adds an edge and returns its index.
    pub fn add_edge(&mut self, left: usize, right: usize) -> usize {
        assert!(
            left < self.left && right < self.right,
            "vertex out of range"
        );
        self.edges.push((left, right));
        self.edges.len() - 1
    }

    pub fn left_count(&self) -> usize {
        self.left
    }

    pub fn right_count(&self) -> usize {
        self.right
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn left_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.left];
        for &(u, _) in &self.edges {
            deg[u] += 1;
        }
        deg
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.right];
        for &(_, v) in &self.edges {
            deg[v] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        let left = self.left_degrees().into_iter().max().unwrap_or(0);
        let right = self.right_degrees().into_iter().max().unwrap_or(0);
        left.max(right)
    }
}

/// A colour in `0..colours` for every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColouring {
    pub colours: usize,
    pub assignment: Vec<usize>,
}

impl EdgeColouring {
    /// No two edges sharing a vertex share a colour.
    pub fn is_proper(&self, graph: &BipartiteMultigraph) -> bool {
        self.is_equitable_with(graph, |_| 1, true)
    }

    /// Every colour appears exactly `deg(v) / k` times at every vertex `v`,
    /// where `k` is the number of colours.
    pub fn is_equitable(&self, graph: &BipartiteMultigraph) -> bool {
        let k = self.colours;
        if k == 0 {
            return graph.edges.is_empty();
        }
        self.is_equitable_with(graph, |deg| deg / k, false)
            && graph.left_degrees().iter().all(|d| d % k == 0)
            && graph.right_degrees().iter().all(|d| d % k == 0)
    }

    /// Checks per-vertex colour counts: at most `quota(deg)` when `at_most`,
    /// otherwise exactly.
    fn is_equitable_with(
        &self,
        graph: &BipartiteMultigraph,
        quota: impl Fn(usize) -> usize,
        at_most: bool,
    ) -> bool {
        if self.assignment.len() != graph.edges.len()
            || self.assignment.iter().any(|&c| c >= self.colours)
        {
            return false;
        }
        let k = self.colours;
        let mut left = vec![0usize; graph.left * k];
        let mut right = vec![0usize; graph.right * k];
        for (&(u, v), &c) in graph.edges.iter().zip(&self.assignment) {
            left[u * k + c] += 1;
            right[v * k + c] += 1;
        }
        let ok = |counts: &[usize], degrees: Vec<usize>| {
            degrees.iter().enumerate().all(|(vertex, &deg)| {
                let want = quota(deg);
                counts[vertex * k..(vertex + 1) * k].iter().all(|&have| {
                    if at_most {
                        have <= want
                    } else {
                        have == want
                    }
                })
            })
        };
        ok(&left, graph.left_degrees()) && ok(&right, graph.right_degrees())
    }
}

const NONE: usize = usize::MAX;

/// Incremental colouring state: for every vertex and colour, the edge of
/// that colour at the vertex, if any.
struct Palette {
    colours: usize,
    at_left: Vec<usize>,
    at_right: Vec<usize>,
    assignment: Vec<usize>,
}

impl Palette {
    fn left(&self, u: usize, c: usize) -> usize {
        self.at_left[u * self.colours + c]
    }

    fn right(&self, v: usize, c: usize) -> usize {
        self.at_right[v * self.colours + c]
    }

    fn set(&mut self, edges: &[(usize, usize)], edge: usize, colour: usize) {
        let (u, v) = edges[edge];
        self.at_left[u * self.colours + colour] = edge;
        self.at_right[v * self.colours + colour] = edge;
        self.assignment[edge] = colour;
    }

    fn clear(&mut self, edges: &[(usize, usize)], edge: usize) {
        let (u, v) = edges[edge];
        let colour = self.assignment[edge];
        self.at_left[u * self.colours + colour] = NONE;
        self.at_right[v * self.colours + colour] = NONE;
    }
}

/// Properly colours the edges with exactly `Δ(G)` colours.
///
/// Edges are inserted in list order. An edge `(u, v)` takes the smallest
/// colour free at both ends if there is one. Otherwise, with `a` the
/// smallest colour free at `u` and `b` the smallest free at `v`, the `a`/`b`
/// alternating path starting at `v` is flipped, which frees `a` at `v`; the
/// path cannot end at `u` because the graph is bipartite.
pub fn proper_edge_colouring(graph: &BipartiteMultigraph) -> EdgeColouring {
    let colours = graph.max_degree();
    let edges = &graph.edges;
    let mut palette = Palette {
        colours,
        at_left: vec![NONE; graph.left * colours],
        at_right: vec![NONE; graph.right * colours],
        assignment: vec![NONE; edges.len()],
    };
    let mut path = Vec::new();
    for (edge, &(u, v)) in edges.iter().enumerate() {
        if let Some(c) =
            (0..colours).find(|&c| palette.left(u, c) == NONE && palette.right(v, c) == NONE)
        {
            palette.set(edges, edge, c);
            continue;
        }
        let a = (0..colours)
            .find(|&c| palette.left(u, c) == NONE)
            .expect("u has degree below Δ before this edge");
        let b = (0..colours)
            .find(|&c| palette.right(v, c) == NONE)
            .expect("v has degree below Δ before this edge");
        // a is used at v and b is unused there; walk a, b, a, ... from v
        path.clear();
        let mut at_right_side = true;
        let mut vertex = v;
        let mut colour = a;
        loop {
            let next = if at_right_side {
                palette.right(vertex, colour)
            } else {
                palette.left(vertex, colour)
            };
            if next == NONE {
                break;
            }
            path.push(next);
            let (nu, nv) = edges[next];
            vertex = if at_right_side { nu } else { nv };
            debug_assert!(!(at_right_side && vertex == u), "path reached u");
            at_right_side = !at_right_side;
            colour = if colour == a { b } else { a };
        }
        for &e in &path {
            palette.clear(edges, e);
        }
        for &e in &path {
            let flipped = if palette.assignment[e] == a { b } else { a };
            palette.set(edges, e, flipped);
        }
        debug_assert_eq!(palette.right(v, a), NONE);
        palette.set(edges, edge, a);
    }
    EdgeColouring {
        colours,
        assignment: palette.assignment,
    }
}

/// Colours the edges with `k` colours so that every vertex sees each colour
/// `deg(v) / k` times. Requires `k | deg(v)` for every vertex.
///
/// Each vertex is split into `deg(v) / k` copies of degree `k`, handing out
/// its incident edges to the copies in edge-list order; a proper colouring of
/// the split graph uses `k` colours and pulls back to an equitable one.
pub fn equitable_edge_colouring(
    graph: &BipartiteMultigraph,
    k: usize,
) -> Result<EdgeColouring, ColouringError> {
    if k == 0 {
        return Err(ColouringError::ZeroColours);
    }
    for (side, degrees) in [
        ("left", graph.left_degrees()),
        ("right", graph.right_degrees()),
    ] {
        if let Some((vertex, &degree)) = degrees.iter().enumerate().find(|(_, &d)| d % k != 0) {
            return Err(ColouringError::DegreeNotDivisible {
                side,
                vertex,
                degree,
                k,
            });
        }
    }
    let mut seen_left = vec![0usize; graph.left];
    let mut seen_right = vec![0usize; graph.right];
    // copy ids are allocated lazily; equal (vertex, index / k) share a copy
    let mut left_copy = std::collections::HashMap::new();
    let mut right_copy = std::collections::HashMap::new();
    let mut split_edges = Vec::with_capacity(graph.edges.len());
    for &(u, v) in &graph.edges {
        let lu = seen_left[u] / k;
        seen_left[u] += 1;
        let rv = seen_right[v] / k;
        seen_right[v] += 1;
        let next = left_copy.len();
        let a = *left_copy.entry((u, lu)).or_insert(next);
        let next = right_copy.len();
        let b = *right_copy.entry((v, rv)).or_insert(next);
        split_edges.push((a, b));
    }
    let split = BipartiteMultigraph {
        left: left_copy.len(),
        right: right_copy.len(),
        edges: split_edges,
    };
    let colouring = proper_edge_colouring(&split);
    debug_assert!(colouring.colours == k || graph.edges.is_empty());
    Ok(EdgeColouring {
        colours: k,
        assignment: colouring.assignment,
    })
}
