use std::collections::BTreeSet;

use super::{AgentId, Edge, Instance, Matching, VertexId};
use crate::error::{Error, Result};

/// An induced subgraph with canonical ids `1..=n'` and the map back to the
/// ids of the instance it was cut from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubInstance {
    pub instance: Instance,
    /// `original[v - 1]` is the original id of sub-instance vertex `v`.
    pub original: Vec<VertexId>,
}

impl SubInstance {
    pub fn to_original(&self, v: VertexId) -> VertexId {
        self.original[v - 1]
    }

    /// Rewrites a matching of the sub-instance in original vertex ids.
    pub fn lift_matching(&self, m: &Matching) -> Matching {
        Matching::from_edges_unchecked(
            m.edges()
                .iter()
                .map(|e| Edge::new(self.to_original(e.u()), self.to_original(e.v())))
                .collect(),
        )
    }
}

/// Removes `hidden` (all owned by `agent`) from the instance. Agents keep
/// their ids even when left without vertices.
pub fn hide_vertices(inst: &Instance, agent: AgentId, hidden: &[VertexId]) -> Result<SubInstance> {
    inst.check_agent(agent)?;
    let hidden: BTreeSet<VertexId> = hidden.iter().copied().collect();
    for &v in &hidden {
        if v == 0 || v > inst.vertex_count() {
            return Err(Error::InvalidHiddenSet(format!("vertex {v} does not exist")));
        }
        if inst.owner(v) != agent {
            return Err(Error::InvalidHiddenSet(format!(
                "vertex {v} belongs to agent {}, not {agent}",
                inst.owner(v)
            )));
        }
    }
    let original: Vec<VertexId> = inst.vertices().filter(|v| !hidden.contains(v)).collect();
    let mut new_id = vec![0; inst.vertex_count() + 1];
    for (i, &v) in original.iter().enumerate() {
        new_id[v] = i + 1;
    }
    let owners = original.iter().map(|&v| inst.owner(v)).collect();
    let edges = inst
        .edges()
        .iter()
        .filter(|e| new_id[e.u()] != 0 && new_id[e.v()] != 0)
        .map(|e| Edge::new(new_id[e.u()], new_id[e.v()]))
        .collect();
    let instance = Instance::with_empty_agents(inst.agent_count(), owners, edges)?;
    Ok(SubInstance { instance, original })
}
