//! Re-splitting two matchings into a balanced pair.
//!
//! Given matchings `M1`, `M2`, the components of `M1 ⊕ M2` are distributed
//! between `N'1` and `N'2`, and the common edges go to both sides:
//!
//! * cycles: the `M1` edges go to `N'1`, the `M2` edges to `N'2`; both cover
//!   the same vertices, so no agent notices.
//! * even paths: each path is an edge of a contraction multigraph between the
//!   owners of its endpoints, oriented along Euler circuits. An edge directed
//!   `i -> j` sends the half covering `i`'s endpoint to `N'1`.
//! * odd paths: likewise, but colored alternately along Euler circuits. Red
//!   sends the half covering both endpoints to `N'1`.
//!
//! If an agent ends up three apart, the colors of its odd component are
//! flipped. Paths whose endpoints share an owner are handled outside the
//! contraction graphs: even ones are neutral, odd ones are paired off with
//! opposite signs and a leftover goes against the agent's residual imbalance.

mod contraction;

pub use contraction::{
    build_contraction, color_odd, orient_even, Color, ContractionEdge, ContractionMultigraph, Direction,
};

use crate::error::{Error, Result};
use crate::graph::{
    decompose_components, symmetric_difference, utilities, ComponentKind, DiffComponent, Edge, Instance, Matching,
};

/// Two matchings whose per-agent utilities differ by at most two and sum
/// to the utilities of the pair they were built from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BalancedPair {
    pub n1: Matching,
    pub n2: Matching,
}

impl BalancedPair {
    /// The member with more edges; `n1` on ties.
    pub fn larger(&self) -> &Matching {
        if self.n2.len() > self.n1.len() {
            &self.n2
        } else {
            &self.n1
        }
    }
}

#[derive(Default)]
struct Split {
    first: Vec<Edge>,
    second: Vec<Edge>,
}

impl Split {
    /// Even-indexed edges of `path` to the first side when `lead_first`.
    fn assign(&mut self, path: &DiffComponent, lead_first: bool) {
        let (lead, rest): (Vec<Edge>, Vec<Edge>) =
            (path.even_indexed_edges().collect(), path.odd_indexed_edges().collect());
        if lead_first {
            self.first.extend(lead);
            self.second.extend(rest);
        } else {
            self.first.extend(rest);
            self.second.extend(lead);
        }
    }
}

pub fn balanced_pair(inst: &Instance, m1: &Matching, m2: &Matching) -> Result<BalancedPair> {
    let diff = symmetric_difference(inst, m1, m2)?;
    let components = decompose_components(inst, &diff)?;
    let agents = inst.agent_count();
    let mut split = Split::default();

    let mut even = Vec::new();
    let mut odd = Vec::new();
    let mut odd_loops = Vec::new();
    for c in components {
        match c.kind {
            ComponentKind::Cycle => {
                for t in &c.edges {
                    match t.origin {
                        crate::graph::Origin::First => split.first.push(t.edge),
                        crate::graph::Origin::Second => split.second.push(t.edge),
                    }
                }
            }
            ComponentKind::EvenPath => {
                let (s, e) = c.endpoints();
                if inst.owner(s) == inst.owner(e) {
                    // Each side misses one of the owner's endpoints either way.
                    split.assign(&c, true);
                } else {
                    even.push(c);
                }
            }
            ComponentKind::OddPath => {
                let (s, e) = c.endpoints();
                if inst.owner(s) == inst.owner(e) {
                    odd_loops.push(c);
                } else {
                    odd.push(c);
                }
            }
        }
    }

    // imbalance[i] tracks u_i(N'1) - u_i(N'2) over everything placed so far
    // through the contraction graphs.
    let mut imbalance = vec![0i64; agents + 1];

    let even_graph = build_contraction(inst, &even, ComponentKind::EvenPath)?;
    let directions = orient_even(&even_graph);
    for ((path, edge), dir) in even.iter().zip(&even_graph.edges).zip(&directions) {
        // even-indexed edges cover the start vertex, owned by from_agent
        let forward = matches!(dir, Some(Direction::Forward));
        split.assign(path, forward);
        let (plus, minus) = if forward {
            (edge.from_agent, edge.to_agent)
        } else {
            (edge.to_agent, edge.from_agent)
        };
        imbalance[plus] += 1;
        imbalance[minus] -= 1;
    }

    let odd_graph = build_contraction(inst, &odd, ComponentKind::OddPath)?;
    let (mut colors, component_of) = contraction::color_odd_with_components(&odd_graph);
    let odd_imbalance = |colors: &[Option<Color>]| {
        let mut d = vec![0i64; agents + 1];
        for (e, c) in odd_graph.edges.iter().zip(colors) {
            let s = if *c == Some(Color::Red) { 1 } else { -1 };
            d[e.from_agent] += s;
            d[e.to_agent] += s;
        }
        d
    };
    let mut odd_diff = odd_imbalance(&colors);

    let components: usize = component_of.iter().flatten().map(|&c| c + 1).max().unwrap_or(0);
    for comp in 0..components {
        let members: Vec<usize> = (1..=agents)
            .filter(|&a| {
                odd_graph
                    .edges
                    .iter()
                    .zip(&component_of)
                    .any(|(e, &c)| c == Some(comp) && (e.from_agent == a || e.to_agent == a))
            })
            .collect();
        let unbalanced = members.iter().filter(|&&a| odd_diff[a].abs() == 2).count();
        if unbalanced > 1 {
            return Err(Error::Invariant(format!(
                "odd component {comp} has {unbalanced} agents with color imbalance 2"
            )));
        }
    }
    for a in 1..=agents {
        if (imbalance[a] + odd_diff[a]).abs() >= 3 {
            let comp = odd_graph
                .edges
                .iter()
                .zip(&component_of)
                .find(|(e, _)| e.from_agent == a || e.to_agent == a)
                .and_then(|(_, &c)| c)
                .ok_or_else(|| Error::Invariant(format!("agent {a} is unbalanced without odd paths")))?;
            for (c, &ci) in colors.iter_mut().zip(&component_of) {
                if ci == Some(comp) {
                    *c = c.map(Color::flipped);
                }
            }
            odd_diff = odd_imbalance(&colors);
        }
    }
    for (path, color) in odd.iter().zip(&colors) {
        split.assign(path, *color == Some(Color::Red));
    }
    for a in 1..=agents {
        imbalance[a] += odd_diff[a];
    }

    // Odd paths with both endpoints at one agent move that agent by ±2.
    let mut loops_by_agent: Vec<Vec<&DiffComponent>> = vec![Vec::new(); agents + 1];
    for p in &odd_loops {
        loops_by_agent[inst.owner(p.endpoints().0)].push(p);
    }
    for (a, loops) in loops_by_agent.iter().enumerate().skip(1) {
        for pair in loops.chunks(2) {
            if let [x, y] = pair {
                split.assign(x, true);
                split.assign(y, false);
            } else {
                let to_first = imbalance[a] <= 0;
                split.assign(pair[0], to_first);
                imbalance[a] += if to_first { 2 } else { -2 };
            }
        }
    }

    let common: Vec<Edge> = m1.edges().iter().copied().filter(|&e| m2.contains(e)).collect();
    split.first.extend(&common);
    split.second.extend(&common);
    let pair = BalancedPair {
        n1: Matching::from_edges_unchecked(split.first),
        n2: Matching::from_edges_unchecked(split.second),
    };
    check_pair(inst, m1, m2, &pair)?;
    Ok(pair)
}

/// Verifies the balanced-pair guarantees.
fn check_pair(inst: &Instance, m1: &Matching, m2: &Matching, pair: &BalancedPair) -> Result<()> {
    pair.n1
        .validate(inst)
        .and_then(|_| pair.n2.validate(inst))
        .map_err(|e| Error::Invariant(format!("balanced pair is not a pair of matchings: {e}")))?;
    let (u1, u2) = (utilities(inst, m1), utilities(inst, m2));
    let (v1, v2) = (utilities(inst, &pair.n1), utilities(inst, &pair.n2));
    for a in 0..inst.agent_count() {
        if u1[a] + u2[a] != v1[a] + v2[a] {
            return Err(Error::Invariant(format!("utility sum of agent {} changed", a + 1)));
        }
        if v1[a].abs_diff(v2[a]) > 2 {
            return Err(Error::Invariant(format!(
                "agent {} differs by {} between the balanced matchings",
                a + 1,
                v1[a].abs_diff(v2[a])
            )));
        }
    }
    if pair.n1.len() + pair.n2.len() != m1.len() + m2.len() {
        return Err(Error::Invariant("edge multiset changed".into()));
    }
    Ok(())
}
