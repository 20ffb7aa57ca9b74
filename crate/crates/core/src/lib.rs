//! Outage probability and coverage regions for a two-user dirty multiple-access
//! channel over Rayleigh fading, where the dependence between the two links'
//! SNRs is described by a bivariate copula.
//!
//! Both encoders know their own additive interference non-causally and cancel
//! it by dirty-paper coding, so the achievable sum rate is what it would be on
//! an interference-free MAC; with per-user decoding the bottleneck is the
//! weaker link. The channel-dependent quantities exposed here are
//!
//! * the outage probability of the sum-rate constraint, in closed form per
//!   copula family and through a generic survival-copula route,
//! * the ergodic sum rate (exact exponential-integral forms for the FGM
//!   family, adaptive quadrature for any absolutely continuous family, and a
//!   cheap closed approximation), and
//! * coverage regions in the plane of the two user distances.
//!
//! Every closed form is cross-checked in the test suite against independent
//! quadrature and Monte-Carlo routes; the `montecarlo` module provides the
//! seeded, thread-count-independent estimators used for that.
//!
//! ```
//! use dirtymac::{
//!     outage_frank, sum_rate, AvgSnrPair, DependenceModel, Geometry, OutageQuery, RateMethod,
//! };
//!
//! # fn main() -> dirtymac::Result<()> {
//! let snrs = AvgSnrPair::new(10.0, 5.0)?; // linear mean SNRs at unit distance
//! let geom = Geometry::new(1.0, 1.5, 3.5)?; // d1, d2, path-loss exponent
//!
//! let q = OutageQuery::new(geom, 0.8)?; // per-user target rate, bits/use
//! let p = outage_frank(snrs, q, 30.0)?;
//! assert!(p > 0.0 && p < 1.0);
//!
//! let model = DependenceModel::fgm(0.5)?;
//! let r = sum_rate(model, snrs, geom, RateMethod::Exact)?;
//! assert!(r > 0.0);
//! # Ok(())
//! # }
//! ```

pub mod coverage;
pub mod dependence;
mod error;
pub mod fading;
pub mod montecarlo;
pub mod outage;
pub mod quad;
pub mod specfun;

pub use coverage::{
    coverage_region, sum_rate, sum_rate_fgm_approx, sum_rate_fgm_exact, sum_rate_quadrature,
    wedge_rate_term, wedge_rate_term_quadrature, BottleneckUser, CoverageResult, GridSpec,
    RateMethod,
};
pub use dependence::{
    conditional_cdf, conditional_quantile, copula_cdf, copula_density, sample_pairs,
    survival_copula, DependenceModel, UnitSquarePoint,
};
pub use error::{Error, Result};
pub use fading::{
    joint_pdf, joint_survival, marginal_cdf, marginal_pdf, marginal_quantile, marginal_survival,
    sample_snr_pairs, AvgSnrPair, Geometry,
};
pub use montecarlo::{estimate_outage, estimate_sum_rate, McEstimate};
pub use outage::{
    beta_thresholds, outage_fgm, outage_frank, outage_generic, outage_lower_fh, outage_upper_fh,
    OutageQuery,
};
pub use quad::{adaptive_quadrature, QuadResult};
pub use specfun::{ei_neg, ei_neg_approx, exp_ei_neg, exp_ei_neg_approx};
