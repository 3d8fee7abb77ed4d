use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combiner::balanced_pair;
use crate::error::{Error, Result};
use crate::graph::{utilities, Instance, Matching};
use crate::matching::{constrained_max_matching, LabelVector};
use crate::mechanisms::{check_layers, labels_from_seed, run, LabelSeed, MechanismConfig, MechanismKind, MAX_LAYERS};

/// Largest agent count whose `2^m` labelings are enumerated.
pub const MAX_ENUMERATED_AGENTS: usize = 20;

/// Largest number of matching pairs combined in one multilayer level.
pub const MAX_LAYER_PAIRS: u128 = 1 << 20;

fn pow2_inverse(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

/// The exact output distribution of a mechanism over matchings.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchingDistribution {
    /// Sorted by matching; probabilities are positive and sum to one.
    outcomes: Vec<(Matching, BigRational)>,
}

impl MatchingDistribution {
    fn from_map(map: HashMap<Matching, BigRational>) -> Self {
        let mut outcomes: Vec<_> = map.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        outcomes.sort_by(|a, b| a.0.cmp(&b.0));
        MatchingDistribution { outcomes }
    }

    pub fn point(m: Matching) -> Self {
        MatchingDistribution {
            outcomes: vec![(m, BigRational::one())],
        }
    }

    pub fn outcomes(&self) -> &[(Matching, BigRational)] {
        &self.outcomes
    }

    pub fn support_size(&self) -> usize {
        self.outcomes.len()
    }

    /// `E[f(M)]`.
    pub fn expect(&self, mut f: impl FnMut(&Matching) -> BigRational) -> BigRational {
        self.outcomes.iter().map(|(m, p)| f(m) * p).sum()
    }

    pub fn utilities(&self, inst: &Instance) -> UtilityDistribution {
        let mut agents = vec![BTreeMap::new(); inst.agent_count()];
        let mut welfare = BTreeMap::new();
        for (m, p) in &self.outcomes {
            for (dist, u) in agents.iter_mut().zip(utilities(inst, m)) {
                *dist.entry(u).or_insert_with(BigRational::zero) += p;
            }
            *welfare.entry(m.welfare()).or_insert_with(BigRational::zero) += p;
        }
        UtilityDistribution { agents, welfare }
    }
}

/// Per-agent utility distributions and the welfare distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct UtilityDistribution {
    /// `agents[i - 1]` maps utility to probability.
    pub agents: Vec<BTreeMap<usize, BigRational>>,
    pub welfare: BTreeMap<usize, BigRational>,
}

fn moment(dist: &BTreeMap<usize, BigRational>, power: u32) -> BigRational {
    dist.iter()
        .map(|(&x, p)| BigRational::from_integer(BigInt::from(x).pow(power)) * p)
        .sum()
}

impl UtilityDistribution {
    pub fn mean(&self, agent: usize) -> BigRational {
        moment(&self.agents[agent - 1], 1)
    }

    pub fn variance(&self, agent: usize) -> BigRational {
        let mean = self.mean(agent);
        moment(&self.agents[agent - 1], 2) - &mean * &mean
    }

    pub fn welfare_mean(&self) -> BigRational {
        moment(&self.welfare, 1)
    }

    pub fn welfare_variance(&self) -> BigRational {
        let mean = self.welfare_mean();
        moment(&self.welfare, 2) - &mean * &mean
    }
}

fn labelings(inst: &Instance) -> Result<MatchingDistribution> {
    let m = inst.agent_count();
    if m > MAX_ENUMERATED_AGENTS {
        return Err(Error::TooLarge {
            what: "labelings to enumerate",
            size: 1u128 << m.min(127),
            limit: 1 << MAX_ENUMERATED_AGENTS,
        });
    }
    let p = pow2_inverse(m as u32);
    let mut map = HashMap::new();
    for bits in 0..1u64 << m {
        let matching = constrained_max_matching(inst, &LabelVector::from_bits(m, bits))?;
        *map.entry(matching).or_insert_with(BigRational::zero) += &p;
    }
    Ok(MatchingDistribution::from_map(map))
}

fn seeds(inst: &Instance) -> Result<MatchingDistribution> {
    let m = inst.agent_count();
    let p = pow2_inverse(LabelSeed::width_for(m));
    let mut map = HashMap::new();
    for s in LabelSeed::all(m) {
        let matching = constrained_max_matching(inst, &labels_from_seed(m, &s)?)?;
        *map.entry(matching).or_insert_with(BigRational::zero) += &p;
    }
    Ok(MatchingDistribution::from_map(map))
}

/// One combination level: two independent draws, balanced, then a fair coin.
fn combine_level(inst: &Instance, below: &MatchingDistribution) -> Result<MatchingDistribution> {
    let s = below.support_size() as u128;
    if s * s > MAX_LAYER_PAIRS {
        return Err(Error::TooLarge {
            what: "multilayer matching pairs per level",
            size: s * s,
            limit: MAX_LAYER_PAIRS,
        });
    }
    let half = pow2_inverse(1);
    let mut map = HashMap::new();
    for (a, pa) in below.outcomes() {
        for (b, pb) in below.outcomes() {
            let pair = balanced_pair(inst, a, b)?;
            let p = pa * pb * &half;
            *map.entry(pair.n1).or_insert_with(BigRational::zero) += &p;
            *map.entry(pair.n2).or_insert_with(BigRational::zero) += p;
        }
    }
    Ok(MatchingDistribution::from_map(map))
}

/// Exact output distribution of `config` on `inst`, by full enumeration of
/// the mechanism's randomness. Multilayer levels are enumerated over the
/// support of the level below, which is exact because the two subtrees of a
/// node are independent and identically distributed.
pub fn exact_matching_distribution(inst: &Instance, config: &MechanismConfig) -> Result<MatchingDistribution> {
    config.validate()?;
    match config.kind {
        MechanismKind::Mix => labelings(inst),
        MechanismKind::Modified => seeds(inst),
        MechanismKind::Multilayer => {
            let k = config.layers_for(inst);
            check_layers(k, MAX_LAYERS)?;
            let mut dist = labelings(inst)?;
            for _ in 0..k {
                dist = combine_level(inst, &dist)?;
            }
            Ok(dist)
        }
        MechanismKind::Deterministic | MechanismKind::Baseline { .. } => {
            Ok(MatchingDistribution::point(run(inst, config)?))
        }
    }
}

pub fn exact_distribution(inst: &Instance, config: &MechanismConfig) -> Result<UtilityDistribution> {
    Ok(exact_matching_distribution(inst, config)?.utilities(inst))
}
