//! Outage probability of the sum-rate target.
//!
//! With both interferences cancelled by dirty-paper coding, the target rate
//! `Ro` per user is in outage as soon as either faded link falls below its
//! threshold `beta_i = d_i^alpha (2^{2 Ro} - 1)`, so
//! `P_out = 1 - P(G1 > beta1, G2 > beta2) = 1 - Chat(s1, s2)` with
//! `s_i = e^{-beta_i / gbar_i}`. [`outage_generic`] evaluates exactly that
//! through the survival copula and is the reference every family-specific
//! closed form must reproduce.

use crate::dependence::{DependenceModel, FRANK_INDEPENDENCE_CUTOFF};
use crate::error::{Error, Result};
use crate::fading::{joint_survival, AvgSnrPair, Geometry};

/// A sum-rate target together with its derived SNR thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageQuery {
    ro: f64,
    beta1: f64,
    beta2: f64,
}

/// beta_i = d_i^alpha (2^{2 Ro} - 1) for a per-user target rate `Ro > 0`.
pub fn beta_thresholds(geom: Geometry, ro: f64) -> Result<(f64, f64)> {
    if !(ro.is_finite() && ro > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "target rate must be positive and finite, got {ro}"
        )));
    }
    let snr_gap = (2.0 * ro).exp2() - 1.0;
    Ok((geom.attenuation1() * snr_gap, geom.attenuation2() * snr_gap))
}

impl OutageQuery {
    pub fn new(geom: Geometry, ro: f64) -> Result<Self> {
        let (beta1, beta2) = beta_thresholds(geom, ro)?;
        Ok(Self { ro, beta1, beta2 })
    }

    pub fn ro(&self) -> f64 {
        self.ro
    }

    pub fn beta1(&self) -> f64 {
        self.beta1
    }

    pub fn beta2(&self) -> f64 {
        self.beta2
    }

    /// Marginal survival probabilities (s1, s2) at the thresholds.
    fn survivals(&self, snrs: AvgSnrPair) -> (f64, f64) {
        (
            (-self.beta1 / snrs.gbar1()).exp(),
            (-self.beta2 / snrs.gbar2()).exp(),
        )
    }
}

fn finish(raw: f64) -> f64 {
    debug_assert!(
        (-1e-12..=1.0 + 1e-12).contains(&raw),
        "outage probability {raw} far outside [0, 1]"
    );
    raw.clamp(0.0, 1.0)
}

/// Outage probability for any dependence model, via the survival copula.
pub fn outage_generic(model: DependenceModel, snrs: AvgSnrPair, q: OutageQuery) -> f64 {
    let s = joint_survival(model, snrs, q.beta1, q.beta2)
        .expect("thresholds are nonnegative and snrs validated");
    finish(1.0 - s)
}

/// Countermonotone (lower Frechet-Hoeffding) fading: the worst case,
/// `P_out = 1 - max(s1 + s2 - 1, 0)`.
pub fn outage_lower_fh(snrs: AvgSnrPair, q: OutageQuery) -> f64 {
    let (s1, s2) = q.survivals(snrs);
    finish(1.0 - (s1 + s2 - 1.0).max(0.0))
}

/// Comonotone (upper Frechet-Hoeffding) fading: the best case,
/// `P_out = 1 - min(s1, s2)`.
pub fn outage_upper_fh(snrs: AvgSnrPair, q: OutageQuery) -> f64 {
    let (s1, s2) = q.survivals(snrs);
    finish(1.0 - s1.min(s2))
}

/// Frank-coupled fading:
/// `P_out = (1-s1) + (1-s2) + (1/t) ln[1 + (e^{-t(1-s1)}-1)(e^{-t(1-s2)}-1)/(e^{-t}-1)]`.
///
/// Evaluated through the grouped same-sign form (see the dependence module)
/// so large `|theta|` keeps full precision. `|theta|` below the Frank
/// independence cutoff degrades to the independence expression.
pub fn outage_frank(snrs: AvgSnrPair, q: OutageQuery, theta: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "frank theta must be finite, got {theta}"
        )));
    }
    let (s1, s2) = q.survivals(snrs);
    // t_i = 1 - s_i, from expm1 so small thresholds stay exact.
    let t1 = -(-q.beta1 / snrs.gbar1()).exp_m1();
    let t2 = -(-q.beta2 / snrs.gbar2()).exp_m1();
    if theta.abs() < FRANK_INDEPENDENCE_CUTOFF {
        return Ok(finish(1.0 - s1 * s2));
    }
    let x = (-theta * t1).exp();
    let y = (-theta * t2).exp();
    let n = x * (-theta * (1.0 - t1)).exp_m1() + y * (-theta * t1).exp_m1();
    let log_term = if n == 0.0 {
        // Reachable only when t1 or t2 rounds to 0; the copula term vanishes.
        0.0
    } else {
        (n.abs().ln() - (-theta).exp_m1().abs().ln()) / theta
    };
    Ok(finish(t1 + t2 + log_term))
}

/// FGM-coupled fading: `P_out = 1 - s1 s2 [1 + theta (1-s1)(1-s2)]`.
pub fn outage_fgm(snrs: AvgSnrPair, q: OutageQuery, theta: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&theta) {
        return Err(Error::InvalidParameter(format!(
            "fgm theta must lie in [-1, 1], got {theta}"
        )));
    }
    let (s1, s2) = q.survivals(snrs);
    Ok(finish(1.0 - s1 * s2 * (1.0 + theta * (1.0 - s1) * (1.0 - s2))))
}
