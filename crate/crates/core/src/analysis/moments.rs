use rand::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::graph::{utilities, Instance};
use crate::mechanisms::{MechanismConfig, Sampler};

/// Seeds for `trials` independent runs derived from one master seed.
pub fn trial_seeds(master: u64, trials: u64) -> impl Iterator<Item = u64> {
    let mut sm = SplitMix64::seed_from_u64(master);
    (0..trials).map(move |_| sm.next_u64())
}

/// Running power sums of an integer sample.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PowerSums {
    count: u64,
    sums: [u128; 4],
}

impl PowerSums {
    pub fn push(&mut self, x: u64) {
        let x = x as u128;
        self.count += 1;
        self.sums[0] += x;
        self.sums[1] += x * x;
        self.sums[2] += x * x * x;
        self.sums[3] += x * x * x * x;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn moments(&self) -> Moments {
        let n = self.count as f64;
        let [s1, s2, s3, s4] = self.sums.map(|s| s as f64);
        let mean = s1 / n;
        if self.count < 2 {
            return Moments {
                mean,
                variance: None,
                se_mean: None,
                se_var: None,
                trials: self.count,
            };
        }
        let variance = ((s2 - s1 * mean) / (n - 1.0)).max(0.0);
        let central4 = (s4 - 4.0 * mean * s3 + 6.0 * mean * mean * s2 - 3.0 * mean.powi(3) * s1) / n;
        let se_var = if self.count > 3 {
            Some(
                ((central4 - (n - 3.0) / (n - 1.0) * variance * variance) / n)
                    .max(0.0)
                    .sqrt(),
            )
        } else {
            None
        };
        Moments {
            mean,
            variance: Some(variance),
            se_mean: Some((variance / n).sqrt()),
            se_var,
            trials: self.count,
        }
    }
}

/// Sample statistics of one quantity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments {
    pub mean: f64,
    /// Unbiased sample variance; absent for a single trial.
    pub variance: Option<f64>,
    pub se_mean: Option<f64>,
    pub se_var: Option<f64>,
    pub trials: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentReport {
    /// `agents[i - 1]` describes `u_i`.
    pub agents: Vec<Moments>,
    pub welfare: Moments,
}

/// Monte Carlo moments of every agent's utility and of the welfare.
pub fn estimate_moments(inst: &Instance, config: &MechanismConfig, trials: u64, master: u64) -> Result<MomentReport> {
    if trials == 0 {
        return Err(Error::InvalidConfig("at least one trial is required".into()));
    }
    let mut sampler = Sampler::new(inst, config)?;
    let mut agents = vec![PowerSums::default(); inst.agent_count()];
    let mut welfare = PowerSums::default();
    for seed in trial_seeds(master, trials) {
        let m = sampler.sample(seed)?;
        for (acc, u) in agents.iter_mut().zip(utilities(inst, m)) {
            acc.push(u as u64);
        }
        welfare.push(m.welfare() as u64);
    }
    Ok(MomentReport {
        agents: agents.iter().map(PowerSums::moments).collect(),
        welfare: welfare.moments(),
    })
}
