//! Instances of the pairwise kidney exchange game and matchings on them.
//!
//! Vertices are patient-donor pairs numbered `1..=n`; agents (hospitals) are
//! numbered `1..=m`. Every vertex is owned by exactly one agent.

mod diff;
mod hide;
mod kex;

pub use diff::{decompose_components, symmetric_difference, ComponentKind, DiffComponent, Origin, TaggedEdge};
pub use hide::{hide_vertices, SubInstance};
pub use kex::{parse_instance, serialize_instance};

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// 1-based vertex identifier.
pub type VertexId = usize;
/// 1-based agent identifier.
pub type AgentId = usize;

/// An undirected edge, stored with the smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(VertexId, VertexId);

impl Edge {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    #[inline]
    pub fn u(self) -> VertexId {
        self.0
    }

    #[inline]
    pub fn v(self) -> VertexId {
        self.1
    }

    #[inline]
    pub fn touches(self, x: VertexId) -> bool {
        self.0 == x || self.1 == x
    }

    /// The endpoint opposite to `x`. `x` must be an endpoint.
    #[inline]
    pub fn other(self, x: VertexId) -> VertexId {
        debug_assert!(self.touches(x));
        if self.0 == x {
            self.1
        } else {
            self.0
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

/// Compatibility graph plus the partition of its vertices among agents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instance {
    agents: usize,
    /// `owners[v - 1]` is the agent owning vertex `v`.
    owners: Vec<AgentId>,
    /// Sorted, deduplicated.
    edges: Vec<Edge>,
    adjacency: Vec<Vec<VertexId>>,
}

impl Instance {
    /// Builds an instance in which every agent owns at least one vertex.
    pub fn new(agents: usize, owners: Vec<AgentId>, edges: Vec<Edge>) -> Result<Self> {
        let inst = Self::with_empty_agents(agents, owners, edges)?;
        let sizes = inst.agent_sizes();
        if let Some(idx) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidInstance(format!("agent {} owns no vertices", idx + 1)));
        }
        Ok(inst)
    }

    /// Like [`Instance::new`] but tolerates agents owning no vertex, which
    /// happens once an agent hides everything it has.
    pub fn with_empty_agents(agents: usize, owners: Vec<AgentId>, mut edges: Vec<Edge>) -> Result<Self> {
        if agents == 0 {
            return Err(Error::InvalidInstance("at least one agent is required".into()));
        }
        let n = owners.len();
        for (idx, &a) in owners.iter().enumerate() {
            if a == 0 || a > agents {
                return Err(Error::InvalidInstance(format!(
                    "vertex {} has owner {a} outside 1..={agents}",
                    idx + 1
                )));
            }
        }
        for e in &edges {
            if e.u() == e.v() {
                return Err(Error::InvalidInstance(format!("self-loop at vertex {}", e.u())));
            }
            if e.u() == 0 || e.v() > n {
                return Err(Error::InvalidInstance(format!(
                    "edge {e} has an endpoint outside 1..={n}"
                )));
            }
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidInstance(format!("duplicate edge {}", w[0])));
        }
        let mut adjacency = vec![Vec::new(); n + 1];
        for e in &edges {
            adjacency[e.u()].push(e.v());
            adjacency[e.v()].push(e.u());
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Instance {
            agents,
            owners,
            edges,
            adjacency,
        })
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.owners.len()
    }

    #[inline]
    pub fn agent_count(&self) -> usize {
        self.agents
    }

    #[inline]
    pub fn owner(&self, v: VertexId) -> AgentId {
        self.owners[v - 1]
    }

    pub fn owners(&self) -> &[AgentId] {
        &self.owners
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbours of `v` in ascending order.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        a >= 1 && a <= self.vertex_count() && self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Whether both endpoints belong to the same agent.
    #[inline]
    pub fn is_internal(&self, e: Edge) -> bool {
        self.owner(e.u()) == self.owner(e.v())
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        1..=self.vertex_count()
    }

    /// Vertices owned by `agent`, ascending.
    pub fn agent_vertices(&self, agent: AgentId) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.owner(v) == agent).collect()
    }

    /// `sizes[i - 1] = |V_i|`.
    pub fn agent_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.agents];
        for &a in &self.owners {
            sizes[a - 1] += 1;
        }
        sizes
    }

    pub fn check_agent(&self, agent: AgentId) -> Result<()> {
        if agent == 0 || agent > self.agents {
            Err(Error::UnknownAgent {
                agent,
                agents: self.agents,
            })
        } else {
            Ok(())
        }
    }

    /// Induced subgraph on `keep` (original ids), as a plain edge list.
    pub(crate) fn induced_edges(&self, keep: &BTreeSet<VertexId>) -> Vec<Edge> {
        self.edges
            .iter()
            .copied()
            .filter(|e| keep.contains(&e.u()) && keep.contains(&e.v()))
            .collect()
    }
}

/// A set of vertex-disjoint edges, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching {
    edges: Vec<Edge>,
}

impl Matching {
    pub fn empty() -> Self {
        Matching { edges: Vec::new() }
    }

    /// Validates `edges` as a matching of `inst`.
    pub fn new(inst: &Instance, edges: Vec<Edge>) -> Result<Self> {
        let m = Self::from_edges_unchecked(edges);
        m.validate(inst)?;
        Ok(m)
    }

    pub(crate) fn from_edges_unchecked(mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        Matching { edges }
    }

    /// Builds a matching from a mate array indexed by 1-based vertex id.
    pub(crate) fn from_mates(mates: &[Option<VertexId>]) -> Self {
        let edges = mates
            .iter()
            .enumerate()
            .filter_map(|(v, &w)| match w {
                Some(w) if v < w => Some(Edge(v, w)),
                _ => None,
            })
            .collect();
        Matching { edges }
    }

    pub fn validate(&self, inst: &Instance) -> Result<()> {
        let mut seen = vec![false; inst.vertex_count() + 1];
        for (i, &e) in self.edges.iter().enumerate() {
            if i > 0 && self.edges[i - 1] == e {
                return Err(Error::InvalidMatching(format!("edge {e} listed twice")));
            }
            if !inst.has_edge(e.u(), e.v()) {
                return Err(Error::InvalidMatching(format!("edge {e} is not in the instance")));
            }
            for x in [e.u(), e.v()] {
                if seen[x] {
                    return Err(Error::InvalidMatching(format!("vertex {x} is matched twice")));
                }
                seen[x] = true;
            }
        }
        Ok(())
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// `covered[v]` for `v` in `0..=n` (index 0 unused).
    pub fn covered(&self, n: usize) -> Vec<bool> {
        let mut covered = vec![false; n + 1];
        for e in &self.edges {
            covered[e.u()] = true;
            covered[e.v()] = true;
        }
        covered
    }

    /// Number of matched vertices, i.e. the social welfare of the matching.
    pub fn welfare(&self) -> usize {
        2 * self.edges.len()
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Number of `agent`'s vertices matched by `matching`.
pub fn utility(inst: &Instance, matching: &Matching, agent: AgentId) -> Result<usize> {
    inst.check_agent(agent)?;
    matching.validate(inst)?;
    Ok(utilities(inst, matching)[agent - 1])
}

/// Per-agent utilities, `result[i - 1] = u_i(M)`. Does not validate.
pub fn utilities(inst: &Instance, matching: &Matching) -> Vec<usize> {
    let mut out = vec![0; inst.agent_count()];
    for e in matching.edges() {
        out[inst.owner(e.u()) - 1] += 1;
        out[inst.owner(e.v()) - 1] += 1;
    }
    out
}
