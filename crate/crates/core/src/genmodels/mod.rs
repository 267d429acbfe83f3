//! Random graph models and the exact counting functions for random matchings.

mod constants;
mod counting;
mod samplers;

pub use constants::{giant_constants, GiantConstants};
pub use counting::{
    crossing_prob, crossing_prob_exact, ln_matchings_count, matchings_count, EXACT_CROSSING_MAX_POINTS,
};
pub use samplers::{
    random_ordered_assignment, sample_cnm, sample_cnm_mindeg, sample_cnm_mindeg_with_limit, sample_gnm,
    sample_gnp, sample_kernel_degrees, sample_kernel_degrees_with_limit, sample_pairing,
    truncated_poisson_rate, DEFAULT_RETRY_LIMIT,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters shared by the samplers. Each sampler reads either `p` or `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub m: Option<usize>,
    pub p: Option<f64>,
    pub c: f64,
    pub seed: u64,
}

impl ModelParams {
    /// `G(n, m)`-style parameters with `m = round(c n / 2)`.
    pub fn with_average_degree(n: usize, c: f64, seed: u64) -> Self {
        ModelParams {
            n,
            m: Some((c * n as f64 / 2.0).round() as usize),
            p: None,
            c,
            seed,
        }
    }
}

/// One degree per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSequence(pub Vec<usize>);

impl DegreeSequence {
    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&d| d as u64).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> Option<usize> {
        self.0.iter().copied().min()
    }

    pub fn check_even(&self) -> Result<()> {
        let s = self.sum();
        if s % 2 == 1 {
            Err(Error::OddDegreeSum(s))
        } else {
            Ok(())
        }
    }
}
