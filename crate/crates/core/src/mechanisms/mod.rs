//! The mechanisms: Mix-and-Match, its pairwise-independent variant, the
//! multilayer combination `F^k`, and the deterministic layered mechanism.
//!
//! Randomness is addressed by tree node. `F^k` is a complete binary tree
//! with `2^k` leaves numbered heap-style (root 1, children `2x` and `2x+1`);
//! node `x` draws from [`node_rng`]`(master, x)`. A leaf draws `m` label
//! bits and runs Mix-and-Match; an internal node combines its children with
//! [`balanced_pair`] and draws one coin to pick `N1` (false) or `N2` (true).
//! The single-run mechanisms use the root stream, so `F^0` and
//! Mix-and-Match agree for the same master seed.

mod sampler;
mod seed;

pub use sampler::Sampler;
pub use seed::{labels_from_seed, LabelSeed};

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::combiner::balanced_pair;
use crate::error::{Error, Result};
use crate::graph::{AgentId, Instance, Matching};
use crate::matching::{constrained_max_matching, max_weight_matching_on, LabelVector};

/// Upper bound on `k` unless a caller passes its own cap.
pub const MAX_LAYERS: u32 = 20;

pub const DEFAULT_EPSILON: f64 = 0.5;

pub type NodeRng = Xoshiro256PlusPlus;

fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The random stream of tree node `node` under `master`. Distinct
/// `(master, node)` pairs get distinct generator states.
pub fn node_rng(master: u64, node: u64) -> NodeRng {
    let a = mix64(master);
    let b = mix64(node ^ 0x6A09_E667_F3BC_C909);
    let c = mix64(a ^ b.rotate_left(17));
    let d = mix64(c);
    let mut seed = [0u8; 32];
    for (chunk, w) in seed.chunks_exact_mut(8).zip([a, b, c, d]) {
        chunk.copy_from_slice(&w.to_le_bytes());
    }
    NodeRng::from_seed(seed)
}

pub(crate) fn draw_labels<R: Rng + ?Sized>(agents: usize, rng: &mut R) -> LabelVector {
    LabelVector::new((0..agents).map(|_| rng.gen::<bool>()).collect())
}

pub(crate) fn draw_seed<R: Rng + ?Sized>(agents: usize, rng: &mut R) -> LabelSeed {
    let width = LabelSeed::width_for(agents);
    let bits = rng.gen::<u64>() & ((1u64 << width) - 1);
    LabelSeed::new(width, bits).expect("masked to width")
}

/// Labels every agent with an independent fair bit and returns the tiered
/// matching of the surviving graph.
pub fn mix_and_match<R: Rng + ?Sized>(inst: &Instance, rng: &mut R) -> Result<Matching> {
    let labels = draw_labels(inst.agent_count(), rng);
    constrained_max_matching(inst, &labels)
}

/// Mix-and-Match with labels derived from `⌈log₂ m⌉` seed bits.
pub fn modified_mix_and_match(inst: &Instance, seed: &LabelSeed) -> Result<Matching> {
    let labels = labels_from_seed(inst.agent_count(), seed)?;
    constrained_max_matching(inst, &labels)
}

/// `k = ⌈2 log₂ n + log₂(1/ε)⌉`, clamped at 0.
pub fn default_layers(n: usize, epsilon: f64) -> u32 {
    let k = 2.0 * (n.max(1) as f64).log2() + (1.0 / epsilon).log2();
    k.ceil().max(0.0) as u32
}

pub(crate) fn check_layers(k: u32, max_layers: u32) -> Result<()> {
    if k > max_layers {
        return Err(Error::TooLarge {
            what: "multilayer leaf count",
            size: 1u128 << k.min(127),
            limit: 1u128 << max_layers.min(127),
        });
    }
    Ok(())
}

/// `F^k` under `master`, refusing `k > MAX_LAYERS`.
pub fn multilayer(inst: &Instance, k: u32, master: u64) -> Result<Matching> {
    multilayer_capped(inst, k, master, MAX_LAYERS)
}

pub fn multilayer_capped(inst: &Instance, k: u32, master: u64, max_layers: u32) -> Result<Matching> {
    check_layers(k, max_layers)?;
    subtree(inst, k, 1, master)
}

fn subtree(inst: &Instance, depth: u32, node: u64, master: u64) -> Result<Matching> {
    let mut rng = node_rng(master, node);
    if depth == 0 {
        return mix_and_match(inst, &mut rng);
    }
    let left = subtree(inst, depth - 1, 2 * node, master)?;
    let right = subtree(inst, depth - 1, 2 * node + 1, master)?;
    let pair = balanced_pair(inst, &left, &right)?;
    Ok(if rng.gen::<bool>() { pair.n2 } else { pair.n1 })
}

/// Runs the modified mechanism for every seed, then repeatedly pairs up
/// consecutive matchings and keeps the larger side of their balanced pair.
pub fn deterministic_mechanism(inst: &Instance) -> Result<Matching> {
    let mut layer = LabelSeed::all(inst.agent_count())
        .map(|s| modified_mix_and_match(inst, &s))
        .collect::<Result<Vec<_>>>()?;
    while layer.len() > 1 {
        layer = layer
            .chunks(2)
            .map(|pair| Ok(balanced_pair(inst, &pair[0], &pair[1])?.larger().clone()))
            .collect::<Result<Vec<_>>>()?;
    }
    Ok(layer.pop().expect("at least one seed"))
}

/// A maximum matching that leaves as many of `against`'s vertices unmatched
/// as possible. Not truthful; it is the adversarial reference point for
/// deviation experiments.
pub fn baseline_matching(inst: &Instance, against: AgentId) -> Result<Matching> {
    inst.check_agent(against)?;
    let big = inst.vertex_count() as i128 + 1;
    let weighted: Vec<(usize, usize, i128)> = inst
        .edges()
        .iter()
        .map(|e| {
            let others = [e.u(), e.v()].iter().filter(|&&x| inst.owner(x) != against).count();
            (e.u() - 1, e.v() - 1, big + others as i128)
        })
        .collect();
    Ok(max_weight_matching_on(inst.vertex_count(), &weighted))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MechanismKind {
    Mix,
    Modified,
    Multilayer,
    Deterministic,
    /// [`baseline_matching`] against the given agent.
    Baseline {
        against: AgentId,
    },
}

impl MechanismKind {
    pub fn is_randomized(self) -> bool {
        matches!(
            self,
            MechanismKind::Mix | MechanismKind::Modified | MechanismKind::Multilayer
        )
    }
}

impl fmt::Display for MechanismKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MechanismKind::Mix => f.write_str("mix"),
            MechanismKind::Modified => f.write_str("modified"),
            MechanismKind::Multilayer => f.write_str("multilayer"),
            MechanismKind::Deterministic => f.write_str("det"),
            MechanismKind::Baseline { against } => write!(f, "baseline:{against}"),
        }
    }
}

impl FromStr for MechanismKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "mix" => MechanismKind::Mix,
            "modified" => MechanismKind::Modified,
            "multilayer" => MechanismKind::Multilayer,
            "det" | "deterministic" => MechanismKind::Deterministic,
            _ => {
                let against = s
                    .strip_prefix("baseline:")
                    .and_then(|a| a.parse().ok())
                    .ok_or_else(|| Error::InvalidConfig(format!("unknown mechanism {s:?}")))?;
                MechanismKind::Baseline { against }
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MechanismConfig {
    pub kind: MechanismKind,
    /// Multilayer depth; `None` derives it from `epsilon`.
    pub layers: Option<u32>,
    pub epsilon: f64,
    /// Master seed. Ignored by the deterministic kinds.
    pub seed: u64,
}

impl MechanismConfig {
    pub fn new(kind: MechanismKind) -> Self {
        MechanismConfig {
            kind,
            layers: None,
            epsilon: DEFAULT_EPSILON,
            seed: 0,
        }
    }

    pub fn with_layers(mut self, k: u32) -> Self {
        self.layers = Some(k);
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }

    /// The multilayer depth used on `inst`.
    pub fn layers_for(&self, inst: &Instance) -> u32 {
        self.layers
            .unwrap_or_else(|| default_layers(inst.vertex_count(), self.epsilon))
    }
}

/// Runs the configured mechanism once with the configured seed.
pub fn run(inst: &Instance, config: &MechanismConfig) -> Result<Matching> {
    run_with_seed(inst, config, config.seed)
}

pub fn run_with_seed(inst: &Instance, config: &MechanismConfig, seed: u64) -> Result<Matching> {
    config.validate()?;
    match config.kind {
        MechanismKind::Mix => mix_and_match(inst, &mut node_rng(seed, 1)),
        MechanismKind::Modified => {
            let s = draw_seed(inst.agent_count(), &mut node_rng(seed, 1));
            modified_mix_and_match(inst, &s)
        }
        MechanismKind::Multilayer => multilayer(inst, config.layers_for(inst), seed),
        MechanismKind::Deterministic => deterministic_mechanism(inst),
        MechanismKind::Baseline { against } => baseline_matching(inst, against),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{fixtures, utilities, Edge};
    use crate::matching::max_matching;

    #[test]
    fn k0_is_mix_and_match() {
        let inst = fixtures::example1(12);
        for seed in 0..50 {
            let a = multilayer(&inst, 0, seed).unwrap();
            let b = mix_and_match(&inst, &mut node_rng(seed, 1)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn all_same_label_is_empty_on_example1() {
        let inst = fixtures::example1(12);
        let m = constrained_max_matching(&inst, &LabelVector::new(vec![true; 3])).unwrap();
        assert!(m.is_empty());
    }

    #[test]
    fn single_agent_gets_maximum_matching() {
        let inst = fixtures::figure1();
        let one = Instance::new(1, vec![1; 7], inst.edges().to_vec()).unwrap();
        for seed in 0..8 {
            assert_eq!(mix_and_match(&one, &mut node_rng(seed, 1)).unwrap().len(), 3);
        }
        assert_eq!(deterministic_mechanism(&one).unwrap().len(), max_matching(&one).len());
    }

    #[test]
    fn modified_matches_shared_core() {
        let inst = fixtures::example1(12);
        for s in LabelSeed::all(3) {
            let labels = labels_from_seed(3, &s).unwrap();
            assert_eq!(
                modified_mix_and_match(&inst, &s).unwrap(),
                constrained_max_matching(&inst, &labels).unwrap()
            );
        }
    }

    #[test]
    fn example1_modified_mean() {
        let inst = fixtures::example1(12);
        let total: usize = LabelSeed::all(3)
            .map(|s| utilities(&inst, &modified_mix_and_match(&inst, &s).unwrap())[0])
            .sum();
        assert_eq!(total, 8); // mean 2 over 4 seeds
    }

    #[test]
    fn deterministic_welfare_at_least_average() {
        let inst = fixtures::example1(12);
        let m = deterministic_mechanism(&inst).unwrap();
        assert!(m.len() >= 2);
        assert_eq!(m, deterministic_mechanism(&inst).unwrap());
    }

    #[test]
    fn default_k() {
        assert_eq!(default_layers(12, 0.5), 9);
        assert_eq!(default_layers(16, 0.5), 9);
        assert_eq!(default_layers(16, 1.0), 8);
        assert_eq!(default_layers(1, 2.0), 0);
    }

    #[test]
    fn layer_cap() {
        let inst = fixtures::path4();
        assert!(matches!(multilayer(&inst, 21, 0), Err(Error::TooLarge { .. })));
        assert!(multilayer_capped(&inst, 3, 0, 2).is_err());
    }

    #[test]
    fn baseline_on_figure1() {
        let inst = fixtures::figure1();
        let m = baseline_matching(&inst, 1).unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(utilities(&inst, &m)[0], 2);
        let m = baseline_matching(&inst, 2).unwrap();
        assert_eq!(utilities(&inst, &m)[1], 3);
        assert_eq!(m.edges().first(), Some(&Edge::new(1, 2)));
    }

    #[test]
    fn kind_names_round_trip() {
        for k in [
            MechanismKind::Mix,
            MechanismKind::Modified,
            MechanismKind::Multilayer,
            MechanismKind::Deterministic,
            MechanismKind::Baseline { against: 2 },
        ] {
            assert_eq!(k.to_string().parse::<MechanismKind>().unwrap(), k);
        }
        assert!("random".parse::<MechanismKind>().is_err());
    }

    #[test]
    fn node_streams_differ() {
        let a: u64 = node_rng(7, 2).gen();
        let b: u64 = node_rng(7, 3).gen();
        let c: u64 = node_rng(8, 2).gen();
        assert!(a != b && a != c);
    }
}
