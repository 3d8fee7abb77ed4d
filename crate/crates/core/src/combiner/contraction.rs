//! Contraction multigraphs and their Euler-tour balancing.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{AgentId, ComponentKind, DiffComponent, Instance};

/// One multigraph edge per path, joining the owners of the path endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ContractionEdge {
    /// Owner of the path's start vertex (its smaller-id endpoint).
    pub from_agent: AgentId,
    /// Owner of the path's end vertex.
    pub to_agent: AgentId,
    /// Index of the path in the slice given to [`build_contraction`].
    pub path: usize,
}

impl ContractionEdge {
    pub fn is_loop(&self) -> bool {
        self.from_agent == self.to_agent
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionMultigraph {
    pub agents: usize,
    pub kind: ComponentKind,
    pub edges: Vec<ContractionEdge>,
}

impl ContractionMultigraph {
    /// Degree with self-loops counted twice.
    pub fn degree(&self, agent: AgentId) -> usize {
        self.edges
            .iter()
            .map(|e| (e.from_agent == agent) as usize + (e.to_agent == agent) as usize)
            .sum()
    }

    /// `agent_u agent_v path_id kind` per edge.
    pub fn dump(&self) -> String {
        let kind = match self.kind {
            ComponentKind::EvenPath => "even",
            ComponentKind::OddPath => "odd",
            ComponentKind::Cycle => "cycle",
        };
        let mut out = String::new();
        for e in &self.edges {
            let _ = writeln!(out, "{} {} {} {kind}", e.from_agent, e.to_agent, e.path);
        }
        out
    }
}

pub fn build_contraction(
    inst: &Instance,
    paths: &[DiffComponent],
    kind: ComponentKind,
) -> Result<ContractionMultigraph> {
    if kind == ComponentKind::Cycle {
        return Err(Error::InvalidComponent("cycles have no contraction graph".into()));
    }
    let mut edges = Vec::with_capacity(paths.len());
    for (idx, p) in paths.iter().enumerate() {
        if p.kind != kind {
            return Err(Error::InvalidComponent(format!(
                "component {idx} is {:?}, expected {kind:?}",
                p.kind
            )));
        }
        let (start, end) = p.endpoints();
        edges.push(ContractionEdge {
            from_agent: inst.owner(start),
            to_agent: inst.owner(end),
            path: idx,
        });
    }
    Ok(ContractionMultigraph {
        agents: inst.agent_count(),
        kind,
        edges,
    })
}

/// Traversal direction of a contraction edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `from_agent -> to_agent`.
    Forward,
    Backward,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn flipped(self) -> Self {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }
}

/// Undirected multigraph over agents with the dummy edges added by the
/// Euler procedure. Real edges keep their index in the contraction graph.
struct Augmented {
    /// `(a, b, real index or None for dummies)`.
    edges: Vec<(AgentId, AgentId, Option<usize>)>,
    incident: Vec<Vec<usize>>,
    /// Connected components of agents touching at least one edge, each sorted.
    components: Vec<Vec<AgentId>>,
    has_dummy: Vec<Option<usize>>,
}

impl Augmented {
    /// Non-loop edges of `h` plus, per component, a dummy matching that pairs
    /// its odd-degree agents in ascending order.
    fn new(h: &ContractionMultigraph) -> Self {
        let m = h.agents;
        let mut edges: Vec<(AgentId, AgentId, Option<usize>)> = h
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_loop())
            .map(|(i, e)| (e.from_agent, e.to_agent, Some(i)))
            .collect();
        let mut incident = vec![Vec::new(); m + 1];
        for (i, &(a, b, _)) in edges.iter().enumerate() {
            incident[a].push(i);
            incident[b].push(i);
        }
        let mut seen = vec![false; m + 1];
        let mut components = Vec::new();
        for start in 1..=m {
            if seen[start] || incident[start].is_empty() {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for &ei in &incident[x] {
                    let (a, b, _) = edges[ei];
                    let y = if a == x { b } else { a };
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        let mut has_dummy = vec![None; m + 1];
        for comp in &components {
            let odd: Vec<AgentId> = comp.iter().copied().filter(|&a| incident[a].len() % 2 == 1).collect();
            for pair in odd.chunks(2) {
                let idx = edges.len();
                edges.push((pair[0], pair[1], None));
                incident[pair[0]].push(idx);
                incident[pair[1]].push(idx);
                has_dummy[pair[0]] = Some(idx);
                has_dummy[pair[1]] = Some(idx);
            }
        }
        Augmented {
            edges,
            incident,
            components,
            has_dummy,
        }
    }

    /// Hierholzer's algorithm. Returns the closed walk as `(edge, tail, head)`
    /// steps; when `first` is given the walk leaves `start` along it.
    fn circuit(&self, start: AgentId, first: Option<usize>, used: &mut [bool]) -> Vec<(usize, AgentId, AgentId)> {
        let mut cursor = vec![0usize; self.incident.len()];
        let mut stack: Vec<(AgentId, Option<(usize, AgentId)>)> = vec![(start, None)];
        let mut out = Vec::new();
        let mut pending_first = first;
        while let Some(&(v, _)) = stack.last() {
            let next = match pending_first.take() {
                Some(e) => Some(e),
                None => loop {
                    match self.incident[v].get(cursor[v]) {
                        Some(&e) if used[e] => cursor[v] += 1,
                        Some(&e) => break Some(e),
                        None => break None,
                    }
                },
            };
            match next {
                Some(e) => {
                    used[e] = true;
                    let (a, b, _) = self.edges[e];
                    let w = if a == v { b } else { a };
                    stack.push((w, Some((e, v))));
                }
                None => {
                    let (v, via) = stack.pop().unwrap();
                    if let Some((e, tail)) = via {
                        out.push((e, tail, v));
                    }
                }
            }
        }
        out.reverse();
        debug_assert!(out.windows(2).all(|w| w[0].2 == w[1].1));
        debug_assert!(out.first().is_none_or(|s| s.1 == start) && out.last().is_none_or(|s| s.2 == start));
        out
    }
}

/// Orients every non-loop edge so that each agent has |out - in| <= 1.
/// Self-loops get `None`.
pub fn orient_even(h: &ContractionMultigraph) -> Vec<Option<Direction>> {
    let aug = Augmented::new(h);
    let mut used = vec![false; aug.edges.len()];
    let mut out = vec![None; h.edges.len()];
    for comp in &aug.components {
        for (e, tail, _) in aug.circuit(comp[0], None, &mut used) {
            if let (_, _, Some(real)) = aug.edges[e] {
                out[real] = Some(if tail == h.edges[real].from_agent {
                    Direction::Forward
                } else {
                    Direction::Backward
                });
            }
        }
    }
    out
}

/// Colors non-loop edges alternately along Euler circuits so that each agent
/// has |red - blue| <= 2, with at most one agent per component reaching 2.
/// Self-loops get `None`.
pub fn color_odd(h: &ContractionMultigraph) -> Vec<Option<Color>> {
    color_odd_with_components(h).0
}

/// Also returns, per non-loop edge, the index of its connected component.
pub(crate) fn color_odd_with_components(h: &ContractionMultigraph) -> (Vec<Option<Color>>, Vec<Option<usize>>) {
    let aug = Augmented::new(h);
    let mut used = vec![false; aug.edges.len()];
    let mut colors = vec![None; h.edges.len()];
    let mut component_of = vec![None; h.edges.len()];
    for (ci, comp) in aug.components.iter().enumerate() {
        // Start on a dummy edge when the component has one.
        let start = comp.iter().copied().find(|&a| aug.has_dummy[a].is_some());
        let (start, first) = match start {
            Some(a) => (a, aug.has_dummy[a]),
            None => (comp[0], None),
        };
        for (step, (e, _, _)) in aug.circuit(start, first, &mut used).into_iter().enumerate() {
            if let (_, _, Some(real)) = aug.edges[e] {
                colors[real] = Some(if step % 2 == 0 { Color::Red } else { Color::Blue });
                component_of[real] = Some(ci);
            }
        }
    }
    (colors, component_of)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(agents: usize, pairs: &[(usize, usize)]) -> ContractionMultigraph {
        ContractionMultigraph {
            agents,
            kind: ComponentKind::EvenPath,
            edges: pairs
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| ContractionEdge {
                    from_agent: a,
                    to_agent: b,
                    path: i,
                })
                .collect(),
        }
    }

    pub(crate) fn out_minus_in(h: &ContractionMultigraph, dirs: &[Option<Direction>]) -> Vec<i64> {
        let mut d = vec![0i64; h.agents + 1];
        for (e, dir) in h.edges.iter().zip(dirs) {
            match dir {
                Some(Direction::Forward) => {
                    d[e.from_agent] += 1;
                    d[e.to_agent] -= 1;
                }
                Some(Direction::Backward) => {
                    d[e.from_agent] -= 1;
                    d[e.to_agent] += 1;
                }
                None => assert!(e.is_loop()),
            }
        }
        d
    }

    pub(crate) fn red_minus_blue(h: &ContractionMultigraph, colors: &[Option<Color>]) -> Vec<i64> {
        let mut d = vec![0i64; h.agents + 1];
        for (e, c) in h.edges.iter().zip(colors) {
            let s = match c {
                Some(Color::Red) => 1,
                Some(Color::Blue) => -1,
                None => {
                    assert!(e.is_loop());
                    0
                }
            };
            d[e.from_agent] += s;
            d[e.to_agent] += s;
        }
        d
    }

    #[test]
    fn orient_single_edge() {
        let h = graph(2, &[(1, 2)]);
        let d = out_minus_in(&h, &orient_even(&h));
        assert_eq!(d[1].abs(), 1);
        assert_eq!(d[2].abs(), 1);
    }

    #[test]
    fn orient_four_cycle_is_a_circulation() {
        let h = graph(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]);
        let d = out_minus_in(&h, &orient_even(&h));
        assert!(d.iter().all(|&x| x == 0));
    }

    #[test]
    fn orient_star() {
        // Center 1 with leaves 2,3,4. Odd agents 1,2,3,4 get dummies (1,2),(3,4);
        // the augmented graph has a circuit, and removing dummies leaves the
        // center one edge out of balance.
        let h = graph(4, &[(1, 2), (1, 3), (1, 4)]);
        let d = out_minus_in(&h, &orient_even(&h));
        assert_eq!(d[1].abs(), 1);
        assert!(d[2..].iter().all(|x| x.abs() == 1));
    }

    #[test]
    fn loops_are_left_unoriented() {
        let h = graph(2, &[(1, 1), (1, 2)]);
        let dirs = orient_even(&h);
        assert_eq!(dirs[0], None);
        assert!(dirs[1].is_some());
    }

    #[test]
    fn color_single_edge() {
        let h = graph(2, &[(1, 2)]);
        let colors = color_odd(&h);
        assert!(colors[0].is_some());
        let d = red_minus_blue(&h, &colors);
        assert_eq!((d[1].abs(), d[2].abs()), (1, 1));
    }

    #[test]
    fn color_even_cycle_alternates() {
        let h = graph(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]);
        let d = red_minus_blue(&h, &color_odd(&h));
        assert!(d.iter().all(|&x| x == 0));
    }

    #[test]
    fn color_triangle_has_one_unbalanced_start() {
        let h = graph(3, &[(1, 2), (2, 3), (3, 1)]);
        let d = red_minus_blue(&h, &color_odd(&h));
        let twos = d[1..].iter().filter(|x| x.abs() == 2).count();
        let zeros = d[1..].iter().filter(|&&x| x == 0).count();
        assert_eq!((twos, zeros), (1, 2));
        // the start is agent 1
        assert_eq!(d[1], 2);
    }

    #[test]
    fn dump_format() {
        let h = graph(3, &[(1, 2), (3, 3)]);
        assert_eq!(h.dump(), "1 2 0 even\n3 3 1 even\n");
        assert_eq!(h.degree(3), 2);
    }
}
