//! Seeded Monte-Carlo estimators for outage and ergodic sum rate.
//!
//! These are the empirical cross-checks for the closed forms, so they go out
//! of their way to be reproducible: sampling is chunked, each chunk draws
//! from its own ChaCha stream keyed by `(seed, chunk index)`, chunks are
//! reduced in index order with exact `(count, mean, M2)` merging, and the
//! result is therefore byte-identical for any rayon thread count.

use crate::dependence::{self, DependenceModel};
use crate::error::{Error, Result};
use crate::fading::{AvgSnrPair, Geometry};
use crate::outage::OutageQuery;
use rayon::prelude::*;
use std::f64::consts::LN_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation divided by sqrt(n).
    pub std_error: f64,
    pub n: u64,
    pub seed: u64,
}

/// Chan et al. combinable running moments.
#[derive(Debug, Clone, Copy, Default)]
struct Acc {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Acc {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Acc) -> Acc {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        Acc {
            n,
            mean: self.mean + d * (other.n as f64 / n as f64),
            m2: self.m2 + other.m2 + d * d * (self.n as f64 * other.n as f64 / n as f64),
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 1000 {
        return Err(Error::InvalidParameter(format!(
            "Monte-Carlo needs n >= 1000 for a meaningful standard error, got {n}"
        )));
    }
    Ok(())
}

/// Stream `n` copula samples through `f` and reduce. Chunk boundaries and
/// per-chunk RNG streams make the reduction order fixed regardless of how
/// rayon schedules the chunks.
fn estimate_with(
    model: DependenceModel,
    n: usize,
    seed: u64,
    f: impl Fn(f64, f64) -> f64 + Sync,
) -> McEstimate {
    let chunks: Vec<(u64, usize)> = dependence::chunk_lengths(n).collect();
    let acc = chunks
        .into_par_iter()
        .map(|(idx, len)| {
            let mut rng = dependence::chunk_rng(seed, idx);
            let mut acc = Acc::default();
            dependence::fill_chunk(model, &mut rng, len, |u1, u2| acc.push(f(u1, u2)));
            acc
        })
        .collect::<Vec<Acc>>()
        .into_iter()
        .fold(Acc::default(), Acc::merge);
    let variance = if acc.n > 1 {
        acc.m2 / (acc.n - 1) as f64
    } else {
        0.0
    };
    McEstimate {
        mean: acc.mean,
        std_error: (variance / acc.n as f64).sqrt(),
        n: acc.n,
        seed,
    }
}

/// Empirical outage probability: draw SNR pairs, count threshold violations.
pub fn estimate_outage(
    model: DependenceModel,
    snrs: AvgSnrPair,
    q: OutageQuery,
    n: usize,
    seed: u64,
) -> Result<McEstimate> {
    check_n(n)?;
    let (gbar1, gbar2) = (snrs.gbar1(), snrs.gbar2());
    let (beta1, beta2) = (q.beta1(), q.beta2());
    Ok(estimate_with(model, n, seed, move |u1, u2| {
        let g1 = -gbar1 * (-u1).ln_1p();
        let g2 = -gbar2 * (-u2).ln_1p();
        if g1 <= beta1 || g2 <= beta2 {
            1.0
        } else {
            0.0
        }
    }))
}

/// Empirical ergodic sum rate `E[(1/2) log2(1 + min(G1/d1^a, G2/d2^a))]`.
///
/// Note the estimand: the bottleneck is chosen by the *attenuated* SNRs.
/// The analytic routes in `coverage` split at the raw diagonal instead, so
/// this estimator validates them where the two coincide, `d1 = d2`.
pub fn estimate_sum_rate(
    model: DependenceModel,
    snrs: AvgSnrPair,
    geom: Geometry,
    n: usize,
    seed: u64,
) -> Result<McEstimate> {
    check_n(n)?;
    let (gbar1, gbar2) = (snrs.gbar1(), snrs.gbar2());
    let (att1, att2) = (geom.attenuation1(), geom.attenuation2());
    Ok(estimate_with(model, n, seed, move |u1, u2| {
        let g1 = -gbar1 * (-u1).ln_1p();
        let g2 = -gbar2 * (-u2).ln_1p();
        0.5 * (g1 / att1).min(g2 / att2).ln_1p() / LN_2
    }))
}
