use std::collections::HashMap;

use rand::Rng;

use super::{
    check_layers, draw_labels, draw_seed, labels_from_seed, node_rng, run_with_seed, MechanismConfig, MechanismKind,
    MAX_LAYERS,
};
use crate::combiner::balanced_pair;
use crate::error::Result;
use crate::graph::{Instance, Matching};
use crate::matching::{constrained_max_matching, LabelVector};

/// Repeated runs of one mechanism on one instance.
///
/// Leaf matchings are memoized per labeling and balanced pairs per pair of
/// inputs, so sampling `F^k` costs a few hash lookups per tree node once
/// the caches are warm. `sample(seed)` always equals
/// [`run_with_seed`](super::run_with_seed) for the same seed.
pub struct Sampler<'a> {
    inst: &'a Instance,
    kind: MechanismKind,
    layers: u32,
    pool: Vec<Matching>,
    ids: HashMap<Matching, usize>,
    leaves: HashMap<LabelVector, usize>,
    pairs: HashMap<(usize, usize), (usize, usize)>,
    fixed: Option<usize>,
}

impl<'a> Sampler<'a> {
    pub fn new(inst: &'a Instance, config: &MechanismConfig) -> Result<Self> {
        config.validate()?;
        let layers = config.layers_for(inst);
        if config.kind == MechanismKind::Multilayer {
            check_layers(layers, MAX_LAYERS)?;
        }
        let mut s = Sampler {
            inst,
            kind: config.kind,
            layers,
            pool: Vec::new(),
            ids: HashMap::new(),
            leaves: HashMap::new(),
            pairs: HashMap::new(),
            fixed: None,
        };
        if !config.kind.is_randomized() {
            let m = run_with_seed(inst, config, 0)?;
            s.fixed = Some(s.intern(m));
        }
        Ok(s)
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    fn intern(&mut self, m: Matching) -> usize {
        if let Some(&id) = self.ids.get(&m) {
            return id;
        }
        self.pool.push(m.clone());
        self.ids.insert(m, self.pool.len() - 1);
        self.pool.len() - 1
    }

    fn leaf(&mut self, labels: LabelVector) -> Result<usize> {
        if let Some(&id) = self.leaves.get(&labels) {
            return Ok(id);
        }
        let m = constrained_max_matching(self.inst, &labels)?;
        let id = self.intern(m);
        self.leaves.insert(labels, id);
        Ok(id)
    }

    fn combine(&mut self, a: usize, b: usize) -> Result<(usize, usize)> {
        if let Some(&p) = self.pairs.get(&(a, b)) {
            return Ok(p);
        }
        let pair = balanced_pair(self.inst, &self.pool[a], &self.pool[b])?;
        let p = (self.intern(pair.n1), self.intern(pair.n2));
        self.pairs.insert((a, b), p);
        Ok(p)
    }

    fn subtree(&mut self, depth: u32, node: u64, master: u64) -> Result<usize> {
        let mut rng = node_rng(master, node);
        if depth == 0 {
            let labels = draw_labels(self.inst.agent_count(), &mut rng);
            return self.leaf(labels);
        }
        let left = self.subtree(depth - 1, 2 * node, master)?;
        let right = self.subtree(depth - 1, 2 * node + 1, master)?;
        let (n1, n2) = self.combine(left, right)?;
        Ok(if rng.gen::<bool>() { n2 } else { n1 })
    }

    pub fn sample(&mut self, seed: u64) -> Result<&Matching> {
        let id = match (self.fixed, self.kind) {
            (Some(id), _) => id,
            (None, MechanismKind::Mix) => self.subtree(0, 1, seed)?,
            (None, MechanismKind::Multilayer) => self.subtree(self.layers, 1, seed)?,
            (None, MechanismKind::Modified) => {
                let agents = self.inst.agent_count();
                let s = draw_seed(agents, &mut node_rng(seed, 1));
                self.leaf(labels_from_seed(agents, &s)?)?
            }
            (None, _) => unreachable!("deterministic kinds have a fixed outcome"),
        };
        Ok(&self.pool[id])
    }
}
