use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::distribution::exact_matching_distribution;
use super::moments::estimate_moments;
use super::Expectation;
use crate::error::Result;
use crate::graph::Instance;
use crate::matching::max_matching;
use crate::mechanisms::MechanismConfig;

/// `|Opt| / E[|F|]` for one mechanism on one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxReport {
    pub optimum_edges: usize,
    pub expected_edges: Expectation,
    /// 1 for an edgeless graph, infinite when `F` never matches anything
    /// but `Opt` does.
    pub ratio: f64,
    /// Set when `expected_edges` is exact and positive.
    pub exact_ratio: Option<BigRational>,
    /// Delta-method standard error of a sampled ratio.
    pub ratio_se: Option<f64>,
}

fn ratio_of(opt: usize, expected: f64) -> f64 {
    match (opt, expected > 0.0) {
        (0, _) => 1.0,
        (_, false) => f64::INFINITY,
        (_, true) => opt as f64 / expected,
    }
}

pub fn approx_ratio(inst: &Instance, config: &MechanismConfig) -> Result<ApproxReport> {
    let opt = max_matching(inst).len();
    let dist = exact_matching_distribution(inst, config)?;
    let expected = dist.expect(|m| BigRational::from_integer(BigInt::from(m.len())));
    let exact_ratio = match (opt, expected.is_zero()) {
        (0, _) => Some(BigRational::from_integer(BigInt::from(1))),
        (_, true) => None,
        (_, false) => Some(BigRational::from_integer(BigInt::from(opt)) / &expected),
    };
    Ok(ApproxReport {
        optimum_edges: opt,
        ratio: ratio_of(opt, expected.to_f64().unwrap_or(0.0)),
        expected_edges: Expectation::Exact(expected),
        exact_ratio,
        ratio_se: None,
    })
}

pub fn approx_ratio_sampled(
    inst: &Instance,
    config: &MechanismConfig,
    trials: u64,
    master: u64,
) -> Result<ApproxReport> {
    let opt = max_matching(inst).len();
    let welfare = estimate_moments(inst, config, trials, master)?.welfare;
    let mean = welfare.mean / 2.0;
    let se = welfare.se_mean.map_or(0.0, |s| s / 2.0);
    let ratio = ratio_of(opt, mean);
    Ok(ApproxReport {
        optimum_edges: opt,
        expected_edges: Expectation::Estimate { mean, se },
        ratio,
        exact_ratio: None,
        ratio_se: (opt > 0 && mean > 0.0).then(|| ratio * se / mean),
    })
}
