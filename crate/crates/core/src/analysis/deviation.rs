use num_bigint::BigInt;
use num_rational::BigRational;

use super::distribution::exact_matching_distribution;
use super::moments::trial_seeds;
use super::Expectation;
use crate::error::{Error, Result};
use crate::graph::{hide_vertices, utility, AgentId, Instance, Matching, SubInstance, VertexId};
use crate::matching::internal_max_matching;
use crate::mechanisms::{MechanismConfig, Sampler};

pub const DEFAULT_SUBSET_CAP: usize = 10;

/// Vertices agent `agent` matches on its own after the mechanism ran: a
/// maximum matching on the agent's internal edges among its hidden vertices
/// and the vertices `m` left unmatched. Counted in matched vertices.
///
/// `m` uses the vertex ids of `inst` and must avoid `hidden`.
pub fn private_residual_utility(inst: &Instance, agent: AgentId, m: &Matching, hidden: &[VertexId]) -> Result<usize> {
    check_hidden(inst, agent, hidden)?;
    m.validate(inst)?;
    let covered = m.covered(inst.vertex_count());
    if let Some(h) = hidden.iter().find(|&&h| covered[h]) {
        return Err(Error::InvalidMatching(format!(
            "hidden vertex {h} is matched by the mechanism"
        )));
    }
    // hidden vertices are uncovered, so this is hidden ∪ unmatched
    let pool: Vec<VertexId> = inst
        .agent_vertices(agent)
        .into_iter()
        .filter(|&v| !covered[v])
        .collect();
    Ok(internal_max_matching(inst, agent, &pool).welfare())
}

fn check_hidden(inst: &Instance, agent: AgentId, hidden: &[VertexId]) -> Result<()> {
    inst.check_agent(agent)?;
    let mut seen = vec![false; inst.vertex_count() + 1];
    for &h in hidden {
        if h == 0 || h > inst.vertex_count() || inst.owner(h) != agent {
            return Err(Error::InvalidHiddenSet(format!(
                "vertex {h} is not owned by agent {agent}"
            )));
        }
        if std::mem::replace(&mut seen[h], true) {
            return Err(Error::InvalidHiddenSet(format!("vertex {h} listed twice")));
        }
    }
    Ok(())
}

/// The best hiding strategy found for one agent.
#[derive(Clone, Debug, PartialEq)]
pub struct DeviationReport {
    pub agent: AgentId,
    /// Original vertex ids, ascending. Empty when no subset beats truth.
    pub hidden: Vec<VertexId>,
    pub truthful: Expectation,
    /// Mechanism utility plus private residual under `hidden`.
    pub deviating: Expectation,
    pub gain: Expectation,
}

/// Every subset of the agent's vertices, as masks in ascending order.
fn subsets(inst: &Instance, agent: AgentId, cap: usize) -> Result<(Vec<VertexId>, u64)> {
    inst.check_agent(agent)?;
    let own = inst.agent_vertices(agent);
    if own.len() > cap || own.len() > 63 {
        return Err(Error::TooLarge {
            what: "agent vertex count for subset search",
            size: own.len() as u128,
            limit: cap.min(63) as u128,
        });
    }
    let count = 1u64 << own.len();
    Ok((own, count))
}

fn pick(own: &[VertexId], mask: u64) -> Vec<VertexId> {
    own.iter()
        .enumerate()
        .filter(|(j, _)| mask >> j & 1 == 1)
        .map(|(_, &v)| v)
        .collect()
}

/// Utility of `agent` when `m` is the mechanism's matching on the hidden instance.
fn total_utility(
    inst: &Instance,
    sub: &SubInstance,
    agent: AgentId,
    hidden: &[VertexId],
    m: &Matching,
) -> Result<usize> {
    let lifted = sub.lift_matching(m);
    Ok(utility(inst, &lifted, agent)? + private_residual_utility(inst, agent, &lifted, hidden)?)
}

/// Exact expected utility of `agent` when hiding `hidden` and matching the
/// residue privately.
pub fn deviating_utility(
    inst: &Instance,
    agent: AgentId,
    config: &MechanismConfig,
    hidden: &[VertexId],
) -> Result<BigRational> {
    let sub = hide_vertices(inst, agent, hidden)?;
    let dist = exact_matching_distribution(&sub.instance, config)?;
    let mut total = BigRational::from_integer(BigInt::from(0));
    for (m, p) in dist.outcomes() {
        let u = total_utility(inst, &sub, agent, hidden, m)?;
        total += BigRational::from_integer(BigInt::from(u)) * p;
    }
    Ok(total)
}

/// Exhaustive search over hidden subsets with exact expectations.
pub fn deviation_gain(
    inst: &Instance,
    agent: AgentId,
    config: &MechanismConfig,
    cap: usize,
) -> Result<DeviationReport> {
    let (own, count) = subsets(inst, agent, cap)?;
    let truthful = deviating_utility(inst, agent, config, &[])?;
    let mut best = (Vec::new(), truthful.clone());
    for mask in 1..count {
        let hidden = pick(&own, mask);
        let eu = deviating_utility(inst, agent, config, &hidden)?;
        if eu > best.1 {
            best = (hidden, eu);
        }
    }
    let gain = &best.1 - &truthful;
    Ok(DeviationReport {
        agent,
        hidden: best.0,
        truthful: Expectation::Exact(truthful),
        deviating: Expectation::Exact(best.1),
        gain: Expectation::Exact(gain),
    })
}

/// Subset search with Monte Carlo expectations. Every subset is evaluated
/// on the same trial seeds, and the gain is estimated from paired differences.
pub fn deviation_gain_sampled(
    inst: &Instance,
    agent: AgentId,
    config: &MechanismConfig,
    cap: usize,
    trials: u64,
    master: u64,
) -> Result<DeviationReport> {
    if trials < 2 {
        return Err(Error::InvalidConfig(
            "sampled deviation search needs at least two trials".into(),
        ));
    }
    let (own, count) = subsets(inst, agent, cap)?;
    let seeds: Vec<u64> = trial_seeds(master, trials).collect();
    let run = |hidden: &[VertexId]| -> Result<Vec<f64>> {
        let sub = hide_vertices(inst, agent, hidden)?;
        let mut sampler = Sampler::new(&sub.instance, config)?;
        seeds
            .iter()
            .map(|&s| Ok(total_utility(inst, &sub, agent, hidden, sampler.sample(s)?)? as f64))
            .collect()
    };
    let mean_se = |xs: &[f64]| {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    };
    let truthful = run(&[])?;
    let mut best: Option<(Vec<VertexId>, Vec<f64>, f64)> = None;
    for mask in 1..count {
        let hidden = pick(&own, mask);
        let values = run(&hidden)?;
        let diff: Vec<f64> = values.iter().zip(&truthful).map(|(a, b)| a - b).collect();
        let (gain, _) = mean_se(&diff);
        if best.as_ref().map_or(gain > 0.0, |b| gain > b.2) {
            best = Some((hidden, values, gain));
        }
    }
    let (hidden, values) = best.map(|b| (b.0, b.1)).unwrap_or((Vec::new(), truthful.clone()));
    let diff: Vec<f64> = values.iter().zip(&truthful).map(|(a, b)| a - b).collect();
    let estimate = |xs: &[f64]| {
        let (mean, se) = mean_se(xs);
        Expectation::Estimate { mean, se }
    };
    Ok(DeviationReport {
        agent,
        hidden,
        truthful: estimate(&truthful),
        deviating: estimate(&values),
        gain: estimate(&diff),
    })
}
