//! Exhaustive matching enumeration, used as a test oracle.

use super::{retained_edges, LabelVector, MatchingObjective};
use crate::error::{Error, Result};
use crate::graph::{Edge, Instance, Matching};

pub const BRUTE_FORCE_MAX_VERTICES: usize = 14;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruteObjective {
    /// Plain maximum cardinality over all edges.
    Cardinality,
    /// The Mix-and-Match tiered objective under the given labels.
    Tiered(LabelVector),
}

struct Enumerator<'a> {
    inst: &'a Instance,
    edges: Vec<Edge>,
    labels: Option<&'a LabelVector>,
    used: Vec<bool>,
    chosen: Vec<Edge>,
    best: Option<(Key, Vec<Edge>)>,
}

type Key = (usize, usize, Vec<usize>);

impl Enumerator<'_> {
    fn key(&self) -> Key {
        match self.labels {
            None => (0, self.chosen.len(), Vec::new()),
            Some(labels) => {
                let m = Matching::from_edges_unchecked(self.chosen.clone());
                let obj = MatchingObjective::of(self.inst, labels, &m);
                (obj.internal_edges, obj.cardinality, obj.priority_counts)
            }
        }
    }

    fn visit(&mut self, next: usize) {
        if next == self.edges.len() {
            let key = self.key();
            let mut sorted = self.chosen.clone();
            sorted.sort_unstable();
            let better = match &self.best {
                None => true,
                Some((k, e)) => key > *k || (key == *k && sorted < *e),
            };
            if better {
                self.best = Some((key, sorted));
            }
            return;
        }
        let e = self.edges[next];
        if !self.used[e.u()] && !self.used[e.v()] {
            self.used[e.u()] = true;
            self.used[e.v()] = true;
            self.chosen.push(e);
            self.visit(next + 1);
            self.chosen.pop();
            self.used[e.u()] = false;
            self.used[e.v()] = false;
        }
        self.visit(next + 1);
    }
}

/// Optimum over every matching of the (labeled) instance; ties go to the
/// lexicographically smallest sorted edge list.
pub fn brute_force_matching(inst: &Instance, objective: &BruteObjective) -> Result<Matching> {
    if inst.vertex_count() > BRUTE_FORCE_MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "brute-force instance",
            size: inst.vertex_count() as u128,
            limit: BRUTE_FORCE_MAX_VERTICES as u128,
        });
    }
    let (edges, labels) = match objective {
        BruteObjective::Cardinality => (inst.edges().to_vec(), None),
        BruteObjective::Tiered(labels) => {
            labels.check(inst)?;
            (retained_edges(inst, labels), Some(labels))
        }
    };
    let mut en = Enumerator {
        inst,
        edges,
        labels,
        used: vec![false; inst.vertex_count() + 1],
        chosen: Vec::new(),
        best: None,
    };
    en.visit(0);
    let (_, edges) = en.best.expect("the empty matching is always enumerated");
    Ok(Matching::from_edges_unchecked(edges))
}
