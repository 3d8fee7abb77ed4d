//! Symmetric difference of two matchings and its decomposition into
//! alternating cycles and paths.

use super::{Edge, Instance, Matching, VertexId};
use crate::error::{Error, Result};

/// Which of the two source matchings an edge of `M1 ⊕ M2` came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Origin {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaggedEdge {
    pub edge: Edge,
    pub origin: Origin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComponentKind {
    Cycle,
    /// Even number of edges, at least two.
    EvenPath,
    /// Odd number of edges; first and last edge share an origin.
    OddPath,
}

/// One connected component of a symmetric difference.
///
/// Paths list `vertices` from the smaller-id endpoint to the other one, so
/// `edges[j]` joins `vertices[j]` and `vertices[j + 1]`. Cycles start at their
/// smallest vertex and leave it along the `First`-tagged edge; `vertices` does
/// not repeat the start.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffComponent {
    pub kind: ComponentKind,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<TaggedEdge>,
}

impl DiffComponent {
    pub fn is_path(&self) -> bool {
        self.kind != ComponentKind::Cycle
    }

    /// `(start, end)` of a path.
    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.vertices[0], *self.vertices.last().unwrap())
    }

    pub fn min_vertex(&self) -> VertexId {
        *self.vertices.iter().min().unwrap()
    }

    /// Alternate edges starting with the first one (indices 0, 2, 4, ...).
    /// On a path this covers the start vertex.
    pub fn even_indexed_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().step_by(2).map(|t| t.edge)
    }

    /// Alternate edges starting with the second one (indices 1, 3, ...).
    pub fn odd_indexed_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().skip(1).step_by(2).map(|t| t.edge)
    }
}

/// Edges in exactly one of `m1`, `m2`, sorted, each tagged with its origin.
pub fn symmetric_difference(inst: &Instance, m1: &Matching, m2: &Matching) -> Result<Vec<TaggedEdge>> {
    m1.validate(inst)?;
    m2.validate(inst)?;
    let (a, b) = (m1.edges(), m2.edges());
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(&x), Some(&y)) if x < y => {
                out.push(TaggedEdge {
                    edge: x,
                    origin: Origin::First,
                });
                i += 1;
            }
            (Some(&x), None) => {
                out.push(TaggedEdge {
                    edge: x,
                    origin: Origin::First,
                });
                i += 1;
            }
            (_, Some(&y)) => {
                out.push(TaggedEdge {
                    edge: y,
                    origin: Origin::Second,
                });
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    Ok(out)
}

/// Splits a tagged symmetric difference into cycles and maximal paths,
/// sorted by smallest contained vertex.
pub fn decompose_components(inst: &Instance, diff: &[TaggedEdge]) -> Result<Vec<DiffComponent>> {
    let n = inst.vertex_count();
    // incident[v] holds indices into `diff`
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (idx, t) in diff.iter().enumerate() {
        if t.edge.v() > n || t.edge.u() == 0 {
            return Err(Error::InvalidDifference(format!(
                "edge {} outside the instance",
                t.edge
            )));
        }
        for x in [t.edge.u(), t.edge.v()] {
            incident[x].push(idx);
            if incident[x].len() > 2 {
                return Err(Error::InvalidDifference(format!("vertex {x} has degree > 2")));
            }
        }
    }
    for (v, inc) in incident.iter().enumerate() {
        if inc.len() == 2 {
            if diff[inc[0]].origin == diff[inc[1]].origin {
                return Err(Error::InvalidDifference(format!(
                    "edges at vertex {v} do not alternate between the two matchings"
                )));
            }
            if diff[inc[0]].edge == diff[inc[1]].edge {
                return Err(Error::InvalidDifference(format!(
                    "edge {} appears twice",
                    diff[inc[0]].edge
                )));
            }
        }
    }

    let mut used = vec![false; diff.len()];
    let mut components = Vec::new();

    let walk = |start: VertexId, first: usize, used: &mut Vec<bool>| -> (Vec<VertexId>, Vec<TaggedEdge>) {
        let mut vertices = vec![start];
        let mut edges = Vec::new();
        let (mut at, mut via) = (start, Some(first));
        while let Some(idx) = via {
            used[idx] = true;
            let t = diff[idx];
            edges.push(t);
            at = t.edge.other(at);
            via = incident[at].iter().copied().find(|&j| !used[j]);
            if at != start || via.is_some() {
                vertices.push(at);
            }
        }
        if vertices.len() > 1 && *vertices.last().unwrap() == start {
            vertices.pop();
        }
        (vertices, edges)
    };

    // Paths first, walked from their smaller endpoint (found first by the scan).
    for v in 1..=n {
        if incident[v].len() == 1 && !used[incident[v][0]] {
            let (vertices, edges) = walk(v, incident[v][0], &mut used);
            let kind = if edges.len() % 2 == 0 {
                ComponentKind::EvenPath
            } else {
                ComponentKind::OddPath
            };
            components.push(DiffComponent { kind, vertices, edges });
        }
    }
    for v in 1..=n {
        if incident[v].len() == 2 && !used[incident[v][0]] {
            let first = incident[v]
                .iter()
                .copied()
                .find(|&j| diff[j].origin == Origin::First)
                .expect("alternation checked above");
            let (vertices, edges) = walk(v, first, &mut used);
            components.push(DiffComponent {
                kind: ComponentKind::Cycle,
                vertices,
                edges,
            });
        }
    }
    components.sort_by_key(DiffComponent::min_vertex);
    Ok(components)
}
