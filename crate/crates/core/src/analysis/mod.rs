//! Exact and sampled evaluation of the mechanisms: utility distributions,
//! Monte Carlo moments, deviation search and the approximation ratio.

mod approx;
mod deviation;
mod distribution;
mod moments;

pub use approx::{approx_ratio, approx_ratio_sampled, ApproxReport};
pub use deviation::{
    deviating_utility, deviation_gain, deviation_gain_sampled, private_residual_utility, DeviationReport,
    DEFAULT_SUBSET_CAP,
};
pub use distribution::{
    exact_distribution, exact_matching_distribution, MatchingDistribution, UtilityDistribution, MAX_ENUMERATED_AGENTS,
    MAX_LAYER_PAIRS,
};
pub use moments::{estimate_moments, trial_seeds, MomentReport, Moments, PowerSums};

use std::fmt;

use num_rational::BigRational;
use num_traits::ToPrimitive;

/// An expected value, either exact or a Monte Carlo estimate.
#[derive(Clone, Debug, PartialEq)]
pub enum Expectation {
    Exact(BigRational),
    Estimate { mean: f64, se: f64 },
}

impl Expectation {
    pub fn value(&self) -> f64 {
        match self {
            Expectation::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Expectation::Estimate { mean, .. } => *mean,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Expectation::Exact(r) => Some(r),
            Expectation::Estimate { .. } => None,
        }
    }

    /// Zero for exact values.
    pub fn standard_error(&self) -> f64 {
        match self {
            Expectation::Exact(_) => 0.0,
            Expectation::Estimate { se, .. } => *se,
        }
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}
