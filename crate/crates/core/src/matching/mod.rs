//! Exact maximum matching and the tiered matching used by Mix-and-Match.
//!
//! After labeling, cross edges between distinct agents that share a label
//! are dropped. Among the remaining matchings the engine picks one that
//!
//! 1. contains a maximum matching of every agent's internal subgraph,
//! 2. then has maximum cardinality,
//! 3. then lexicographically maximizes matched-vertex counts in the serial
//!    priority order (label-1 agents by id, then label-0 agents by id).
//!
//! Tier 1 only depends on the total number of internal edges, because the
//! internal subgraphs of different agents are vertex-disjoint. The three
//! tiers are folded into one integer weight per edge using a mixed radix
//! and solved with an exact maximum-weight matching.

mod blossom;
mod brute;
mod weighted;

pub use brute::{brute_force_matching, BruteObjective, BRUTE_FORCE_MAX_VERTICES};

use crate::error::{Error, Result};
use crate::graph::{AgentId, Edge, Instance, Matching, VertexId};

/// One bit per agent. `true` is label 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelVector(Vec<bool>);

impl LabelVector {
    pub fn new(labels: Vec<bool>) -> Self {
        LabelVector(labels)
    }

    /// Agent `i` gets bit `i - 1` of `bits`.
    pub fn from_bits(agents: usize, bits: u64) -> Self {
        LabelVector((0..agents).map(|i| (bits >> i) & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn label(&self, agent: AgentId) -> bool {
        self.0[agent - 1]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    /// Serial tie-breaking order: label-1 agents ascending, then label-0.
    pub fn priority(&self) -> Vec<AgentId> {
        let ones = (1..=self.len()).filter(|&a| self.label(a));
        let zeros = (1..=self.len()).filter(|&a| !self.label(a));
        ones.chain(zeros).collect()
    }

    pub(crate) fn check(&self, inst: &Instance) -> Result<()> {
        if self.len() != inst.agent_count() {
            return Err(Error::InvalidLabels(format!(
                "{} labels for {} agents",
                self.len(),
                inst.agent_count()
            )));
        }
        Ok(())
    }
}

/// The tiered objective of a matching, ordered lexicographically by
/// (`internal_edges`, `cardinality`, `priority_counts`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatchingObjective {
    pub internal_edges: usize,
    pub cardinality: usize,
    /// Matched-vertex count of each agent, listed in `priority` order.
    pub priority_counts: Vec<usize>,
    pub priority: Vec<AgentId>,
}

impl MatchingObjective {
    pub fn of(inst: &Instance, labels: &LabelVector, m: &Matching) -> Self {
        let priority = labels.priority();
        let util = crate::graph::utilities(inst, m);
        MatchingObjective {
            internal_edges: m.edges().iter().filter(|&&e| inst.is_internal(e)).count(),
            cardinality: m.len(),
            priority_counts: priority.iter().map(|&a| util[a - 1]).collect(),
            priority,
        }
    }
}

/// Edges that survive labeling: every internal edge and every cross edge
/// between agents with different labels.
pub fn retained_edges(inst: &Instance, labels: &LabelVector) -> Vec<Edge> {
    inst.edges()
        .iter()
        .copied()
        .filter(|&e| {
            let (a, b) = (inst.owner(e.u()), inst.owner(e.v()));
            a == b || labels.label(a) != labels.label(b)
        })
        .collect()
}

/// Maximum-cardinality matching on vertices `1..=n` using only `edges`.
pub(crate) fn max_matching_on(n: usize, edges: &[Edge]) -> Matching {
    let mut adj = vec![Vec::new(); n + 1];
    for e in edges {
        adj[e.u()].push(e.v());
        adj[e.v()].push(e.u());
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    Matching::from_mates(&blossom::maximum_cardinality(&adj))
}

/// Exact maximum-cardinality matching of the whole instance.
pub fn max_matching(inst: &Instance) -> Matching {
    max_matching_on(inst.vertex_count(), inst.edges())
}

// Edge weights stay far below i128::MAX so the solver's doubled duals and
// slack sums cannot overflow.
const WEIGHT_LIMIT: i128 = 1 << 100;

/// Folds the three tiers into integer edge weights.
fn tiered_weights(inst: &Instance, labels: &LabelVector, edges: &[Edge]) -> Result<Vec<(usize, usize, i128)>> {
    let too_large = || Error::TooLarge {
        what: "tiered matching weight",
        size: u128::MAX,
        limit: WEIGHT_LIMIT as u128,
    };
    let sizes = inst.agent_sizes();
    let priority = labels.priority();
    let m = priority.len();
    // place[p] is the radix weight of one matched vertex of the agent at
    // priority position p; an agent's count never exceeds its size.
    let mut place = vec![1i128; m];
    for p in (0..m.saturating_sub(1)).rev() {
        let radix = sizes[priority[p + 1] - 1] as i128 + 1;
        place[p] = place[p + 1].checked_mul(radix).ok_or_else(too_large)?;
    }
    let tier3_span = match priority.first() {
        Some(&a) => place[0].checked_mul(sizes[a - 1] as i128 + 1).ok_or_else(too_large)?,
        None => 1,
    };
    let per_edge = tier3_span;
    let per_internal = per_edge
        .checked_mul(inst.vertex_count() as i128 / 2 + 1)
        .ok_or_else(too_large)?;
    if per_internal.checked_add(per_edge).is_none_or(|w| w >= WEIGHT_LIMIT / 4) {
        return Err(too_large());
    }
    let mut position = vec![0usize; m + 1];
    for (p, &a) in priority.iter().enumerate() {
        position[a] = p;
    }
    Ok(edges
        .iter()
        .map(|&e| {
            let (a, b) = (inst.owner(e.u()), inst.owner(e.v()));
            let internal = if a == b { per_internal } else { 0 };
            let w = internal + per_edge + place[position[a]] + place[position[b]];
            (e.u() - 1, e.v() - 1, w)
        })
        .collect())
}

/// The Mix-and-Match matching for a fixed labeling (see module docs).
pub fn constrained_max_matching(inst: &Instance, labels: &LabelVector) -> Result<Matching> {
    labels.check(inst)?;
    let edges = retained_edges(inst, labels);
    let weighted = tiered_weights(inst, labels, &edges)?;
    Ok(max_weight_matching_on(inst.vertex_count(), &weighted))
}

/// Maximum-weight matching on vertices `1..=n`; `edges` hold 0-based endpoints.
pub(crate) fn max_weight_matching_on(n: usize, edges: &[(usize, usize, i128)]) -> Matching {
    let mates = weighted::max_weight_matching(n, edges);
    let mut shifted: Vec<Option<VertexId>> = vec![None];
    shifted.extend(mates.into_iter().map(|m| m.map(|w| w + 1)));
    Matching::from_mates(&shifted)
}

/// Maximum matching among the internal edges of `agent` restricted to `vertices`.
pub(crate) fn internal_max_matching(inst: &Instance, agent: AgentId, vertices: &[VertexId]) -> Matching {
    let keep: std::collections::BTreeSet<VertexId> =
        vertices.iter().copied().filter(|&v| inst.owner(v) == agent).collect();
    max_matching_on(inst.vertex_count(), &inst.induced_edges(&keep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{fixtures, utilities};

    fn labels(bits: &[u8]) -> LabelVector {
        LabelVector::new(bits.iter().map(|&b| b == 1).collect())
    }

    #[test]
    fn max_matching_examples() {
        assert_eq!(max_matching(&fixtures::figure1()).len(), 3);
        let empty = Instance::new(1, vec![1, 1, 1], vec![]).unwrap();
        assert!(max_matching(&empty).is_empty());
        // triangle 1-2-3 with pendant 3-4
        let tri = Instance::new(
            1,
            vec![1; 4],
            vec![Edge::new(1, 2), Edge::new(2, 3), Edge::new(1, 3), Edge::new(3, 4)],
        )
        .unwrap();
        let m = max_matching(&tri);
        assert_eq!(m.len(), 2);
        m.validate(&tri).unwrap();
    }

    #[test]
    fn example1_labelings() {
        let inst = fixtures::example1(12);
        let m = constrained_max_matching(&inst, &labels(&[1, 0, 0])).unwrap();
        assert_eq!(m.len(), 4);
        assert_eq!(utilities(&inst, &m)[0], 4);
        assert!(constrained_max_matching(&inst, &labels(&[1, 1, 0])).unwrap().is_empty());
        assert!(constrained_max_matching(&inst, &labels(&[1, 1, 1])).unwrap().is_empty());
    }

    #[test]
    fn internal_matching_takes_precedence() {
        // agent 1 owns {1,2} with internal edge (1,2); agent 2 owns {3}
        let inst = Instance::new(
            2,
            vec![1, 1, 2],
            vec![Edge::new(1, 2), Edge::new(2, 3), Edge::new(1, 3)],
        )
        .unwrap();
        let l = labels(&[1, 0]);
        let m = constrained_max_matching(&inst, &l).unwrap();
        assert_eq!(m.edges(), &[Edge::new(1, 2)]);
        let oracle = brute_force_matching(&inst, &BruteObjective::Tiered(l.clone())).unwrap();
        assert_eq!(
            MatchingObjective::of(&inst, &l, &m),
            MatchingObjective::of(&inst, &l, &oracle)
        );
    }

    #[test]
    fn serial_priority_prefers_label_one() {
        // vertex 1 (agent 1, label 0) and vertex 3 (agent 3, label 1) compete for vertex 2 (agent 2).
        let inst = Instance::new(3, vec![1, 2, 3], vec![Edge::new(1, 2), Edge::new(2, 3)]).unwrap();
        let l = labels(&[0, 0, 1]);
        // agents 1 and 2 share label 0, so (1,2) is dropped anyway; use labels where both survive
        assert_eq!(constrained_max_matching(&inst, &l).unwrap().edges(), &[Edge::new(2, 3)]);
        let l = labels(&[1, 0, 1]);
        assert_eq!(l.priority(), vec![1, 3, 2]);
        assert_eq!(constrained_max_matching(&inst, &l).unwrap().edges(), &[Edge::new(1, 2)]);
    }

    #[test]
    fn wrong_label_count() {
        assert!(constrained_max_matching(&fixtures::figure1(), &labels(&[1])).is_err());
    }
}
