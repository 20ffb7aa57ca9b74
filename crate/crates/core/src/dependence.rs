//! Bivariate copula families and seeded sampling on the unit square.
//!
//! Five families cover the dependence structures of interest: independence,
//! the two Frechet-Hoeffding bounds (perfect positive/negative dependence,
//! singular, no density), Frank (radially symmetric, full-range dependence
//! through `theta` in R \ {0}) and FGM (light dependence, `theta` in [-1, 1],
//! analytically convenient downstream).
//!
//! Frank evaluations are arranged around the grouped quantity
//! `N = e^{-t*u1} expm1(-t*(1-u1)) + e^{-t*u2} expm1(-t*u1)`,
//! which equals `(e^{-t}-1) + (e^{-t*u1}-1)(e^{-t*u2}-1)` but sums two
//! same-sign terms, so large `|theta|` loses no precision to cancellation.
//! The exponential `e^{-t*u}` and `expm1(-t*u)` are always computed
//! independently; reconstructing one from the other costs ~all precision
//! once `e^{-t*u}` is tiny.

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Below this magnitude the Frank constructor degrades to `Independence`:
/// the family converges to it pointwise and the closed forms lose precision
/// as O(eps / theta).
pub const FRANK_INDEPENDENCE_CUTOFF: f64 = 1e-8;

/// A point of [0,1]^2, validated at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSquarePoint {
    u1: f64,
    u2: f64,
}

impl UnitSquarePoint {
    pub fn new(u1: f64, u2: f64) -> Result<Self> {
        for (name, u) in [("u1", u1), ("u2", u2)] {
            if !(0.0..=1.0).contains(&u) {
                return Err(Error::Domain(format!("{name} = {u} outside [0, 1]")));
            }
        }
        Ok(Self { u1, u2 })
    }

    pub fn u1(&self) -> f64 {
        self.u1
    }

    pub fn u2(&self) -> f64 {
        self.u2
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DependenceModel {
    Independence,
    /// Countermonotone bound W(u1,u2) = max(u1+u2-1, 0); mass on u2 = 1-u1.
    LowerFrechet,
    /// Comonotone bound M(u1,u2) = min(u1,u2); mass on u2 = u1.
    UpperFrechet,
    Frank(f64),
    Fgm(f64),
}

impl DependenceModel {
    /// Frank copula with parameter `theta` in R \ {0}. Near-zero `theta`
    /// collapses to `Independence` (see [`FRANK_INDEPENDENCE_CUTOFF`]).
    pub fn frank(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "frank theta must be finite, got {theta}"
            )));
        }
        if theta.abs() < FRANK_INDEPENDENCE_CUTOFF {
            return Ok(Self::Independence);
        }
        Ok(Self::Frank(theta))
    }

    /// Farlie-Gumbel-Morgenstern copula, `theta` in [-1, 1].
    pub fn fgm(theta: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&theta) {
            return Err(Error::InvalidParameter(format!(
                "fgm theta must lie in [-1, 1], got {theta}"
            )));
        }
        Ok(Self::Fgm(theta))
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Self::Independence => "independence",
            Self::LowerFrechet => "lower",
            Self::UpperFrechet => "upper",
            Self::Frank(_) => "frank",
            Self::Fgm(_) => "fgm",
        }
    }

    pub fn theta(&self) -> Option<f64> {
        match self {
            Self::Frank(t) | Self::Fgm(t) => Some(*t),
            _ => None,
        }
    }

    /// True for families that admit a density on (0,1)^2.
    pub fn has_density(&self) -> bool {
        !matches!(self, Self::LowerFrechet | Self::UpperFrechet)
    }
}

fn frank_cdf(theta: f64, u1: f64, u2: f64) -> f64 {
    let x = (-theta * u1).exp();
    let y = (-theta * u2).exp();
    let n = x * (-theta * (1.0 - u1)).exp_m1() + y * (-theta * u1).exp_m1();
    if n == 0.0 {
        // Only reachable at u1 = 0 or u2 = 0 up to rounding.
        return 0.0;
    }
    let c = -(n.abs().ln() - (-theta).exp_m1().abs().ln()) / theta;
    c.clamp(0.0, 1.0)
}

fn fgm_cdf(theta: f64, u1: f64, u2: f64) -> f64 {
    u1 * u2 * (1.0 + theta * (1.0 - u1) * (1.0 - u2))
}

/// C(u1, u2) for the chosen family.
pub fn copula_cdf(model: DependenceModel, p: UnitSquarePoint) -> f64 {
    let (u1, u2) = (p.u1, p.u2);
    match model {
        DependenceModel::Independence => u1 * u2,
        DependenceModel::LowerFrechet => (u1 + u2 - 1.0).max(0.0),
        DependenceModel::UpperFrechet => u1.min(u2),
        DependenceModel::Frank(t) => frank_cdf(t, u1, u2),
        DependenceModel::Fgm(t) => fgm_cdf(t, u1, u2),
    }
}

/// Survival copula, written once for all families through the reflection
/// identity `Chat(u1,u2) = u1 + u2 - 1 + C(1-u1, 1-u2)`.
///
/// `Chat(F1bar(g1), F2bar(g2))` is the joint survival probability
/// `P(G1 > g1, G2 > g2)`; that route is the single source of truth for the
/// generic outage expression.
pub fn survival_copula(model: DependenceModel, p: UnitSquarePoint) -> f64 {
    let reflected = UnitSquarePoint {
        u1: 1.0 - p.u1,
        u2: 1.0 - p.u2,
    };
    let v = p.u1 + p.u2 - 1.0 + copula_cdf(model, reflected);
    v.clamp(0.0, 1.0)
}

/// Copula density c(u1, u2) = d2C/du1du2. The Frechet-Hoeffding bounds are
/// singular and report [`Error::NoDensity`].
pub fn copula_density(model: DependenceModel, p: UnitSquarePoint) -> Result<f64> {
    let (u1, u2) = (p.u1, p.u2);
    match model {
        DependenceModel::Independence => Ok(1.0),
        DependenceModel::LowerFrechet | DependenceModel::UpperFrechet => Err(Error::NoDensity),
        DependenceModel::Frank(t) => {
            let x = (-t * u1).exp();
            let y = (-t * u2).exp();
            let n = x * (-t * (1.0 - u1)).exp_m1() + y * (-t * u1).exp_m1();
            Ok(-t * (-t).exp_m1() * x * y / (n * n))
        }
        DependenceModel::Fgm(t) => Ok(1.0 + t * (1.0 - 2.0 * u1) * (1.0 - 2.0 * u2)),
    }
}

fn conditional_cdf_unchecked(model: DependenceModel, u1: f64, u2: f64) -> f64 {
    match model {
        DependenceModel::Independence => u2,
        // Given U1 = u1 the bounds put all mass on one point of u2.
        DependenceModel::LowerFrechet => {
            if u2 >= 1.0 - u1 {
                1.0
            } else {
                0.0
            }
        }
        DependenceModel::UpperFrechet => {
            if u2 >= u1 {
                1.0
            } else {
                0.0
            }
        }
        DependenceModel::Frank(t) => {
            let x = (-t * u1).exp();
            let y = (-t * u2).exp();
            let n = x * (-t * (1.0 - u1)).exp_m1() + y * (-t * u1).exp_m1();
            (x * (-t * u2).exp_m1() / n).clamp(0.0, 1.0)
        }
        DependenceModel::Fgm(t) => {
            let a = t * (1.0 - 2.0 * u1);
            u2 * (1.0 + a * (1.0 - u2))
        }
    }
}

fn conditional_quantile_unchecked(model: DependenceModel, u1: f64, v: f64) -> f64 {
    match model {
        DependenceModel::Independence => v,
        DependenceModel::LowerFrechet => 1.0 - u1,
        DependenceModel::UpperFrechet => u1,
        DependenceModel::Frank(t) => {
            let x = (-t * u1).exp();
            let q = (-t).exp();
            // Both log arguments are sums of nonnegative terms.
            let u2 = -((x * (1.0 - v) + v * q).ln() - (x * (1.0 - v) + v).ln()) / t;
            u2.clamp(0.0, 1.0)
        }
        DependenceModel::Fgm(t) => {
            let a = t * (1.0 - 2.0 * u1);
            let b = 1.0 + a;
            // Smaller root of a*u2^2 - b*u2 + v = 0 in conjugate form, so
            // a -> 0 degrades gracefully to u2 = v.
            let disc = (b * b - 4.0 * a * v).max(0.0);
            (2.0 * v / (b + disc.sqrt())).clamp(0.0, 1.0)
        }
    }
}

fn check_unit(name: &str, u: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::Domain(format!("{name} = {u} outside [0, 1]")));
    }
    Ok(())
}

/// Conditional distribution `P(U2 <= u2 | U1 = u1) = dC/du1`. For the
/// singular bounds this is the degenerate step at the support curve.
pub fn conditional_cdf(model: DependenceModel, u1: f64, u2: f64) -> Result<f64> {
    check_unit("u1", u1)?;
    check_unit("u2", u2)?;
    Ok(conditional_cdf_unchecked(model, u1, u2))
}

/// Inverse of [`conditional_cdf`] in its second argument; the workhorse of
/// conditional-inversion sampling. Exact closed-form inverses exist for every
/// family here, so no root finding is involved.
pub fn conditional_quantile(model: DependenceModel, u1: f64, v: f64) -> Result<f64> {
    check_unit("u1", u1)?;
    check_unit("v", v)?;
    Ok(conditional_quantile_unchecked(model, u1, v))
}

/// Chunk length for seeded sampling. Estimators consume the same chunks, so
/// sample n via `sample_pairs` and via the streaming reducers see identical
/// draws.
pub(crate) const SAMPLE_CHUNK: usize = 1 << 16;

pub(crate) fn chunk_rng(seed: u64, chunk_index: u64) -> ChaCha8Rng {
    // One independent ChaCha stream per chunk: parallel generation stays
    // deterministic for any thread count, keyed only by (seed, chunk).
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk_index);
    rng
}

pub(crate) fn fill_chunk(
    model: DependenceModel,
    rng: &mut ChaCha8Rng,
    len: usize,
    mut sink: impl FnMut(f64, f64),
) {
    for _ in 0..len {
        let u1: f64 = rng.gen();
        let v: f64 = rng.gen();
        sink(u1, conditional_quantile_unchecked(model, u1, v));
    }
}

pub(crate) fn chunk_lengths(n: usize) -> impl Iterator<Item = (u64, usize)> {
    let chunks = n.div_ceil(SAMPLE_CHUNK);
    (0..chunks).map(move |i| {
        let start = i * SAMPLE_CHUNK;
        (i as u64, SAMPLE_CHUNK.min(n - start))
    })
}

/// Draw `n` dependent uniform pairs. Deterministic in `(seed, n)` and
/// independent of thread count; for fixed seed, growing `n` only appends.
pub fn sample_pairs(model: DependenceModel, n: usize, seed: u64) -> Vec<UnitSquarePoint> {
    let chunks: Vec<(u64, usize)> = chunk_lengths(n).collect();
    chunks
        .into_par_iter()
        .map(|(idx, len)| {
            let mut rng = chunk_rng(seed, idx);
            let mut out = Vec::with_capacity(len);
            fill_chunk(model, &mut rng, len, |u1, u2| {
                out.push(UnitSquarePoint { u1, u2 });
            });
            out
        })
        .collect::<Vec<_>>()
        .concat()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn families() -> Vec<DependenceModel> {
        vec![
            DependenceModel::Independence,
            DependenceModel::LowerFrechet,
            DependenceModel::UpperFrechet,
            DependenceModel::frank(-30.0).unwrap(),
            DependenceModel::frank(-1.0).unwrap(),
            DependenceModel::frank(0.6).unwrap(),
            DependenceModel::frank(30.0).unwrap(),
            DependenceModel::fgm(-1.0).unwrap(),
            DependenceModel::fgm(0.3).unwrap(),
            DependenceModel::fgm(1.0).unwrap(),
        ]
    }

    #[test]
    fn constructors_reject_bad_parameters() {
        assert!(DependenceModel::frank(f64::NAN).is_err());
        assert!(DependenceModel::frank(f64::INFINITY).is_err());
        assert!(DependenceModel::fgm(1.0 + 1e-12).is_err());
        assert!(DependenceModel::fgm(-1.5).is_err());
        assert!(DependenceModel::fgm(f64::NAN).is_err());
        assert!(UnitSquarePoint::new(-0.1, 0.5).is_err());
        assert!(UnitSquarePoint::new(0.1, 1.5).is_err());
        assert!(UnitSquarePoint::new(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn tiny_frank_theta_collapses_to_independence() {
        assert_eq!(
            DependenceModel::frank(1e-9).unwrap(),
            DependenceModel::Independence
        );
        assert!(matches!(
            DependenceModel::frank(1e-6).unwrap(),
            DependenceModel::Frank(_)
        ));
    }

    #[test]
    fn frank_reference_value() {
        // C(1/2, 1/2; theta = 1) from 40-digit arithmetic.
        let m = DependenceModel::frank(1.0).unwrap();
        let p = UnitSquarePoint::new(0.5, 0.5).unwrap();
        assert_relative_eq!(
            copula_cdf(m, p),
            0.280_929_803_620_161_34,
            epsilon = 1e-15
        );
    }

    #[test]
    fn boundary_axioms_on_grid() {
        for m in families() {
            for i in 0..=40 {
                let u = i as f64 / 40.0;
                let on_zero1 = copula_cdf(m, UnitSquarePoint::new(0.0, u).unwrap());
                let on_zero2 = copula_cdf(m, UnitSquarePoint::new(u, 0.0).unwrap());
                let on_one1 = copula_cdf(m, UnitSquarePoint::new(1.0, u).unwrap());
                let on_one2 = copula_cdf(m, UnitSquarePoint::new(u, 1.0).unwrap());
                assert!(on_zero1.abs() < 1e-13, "{m:?} C(0,{u})={on_zero1}");
                assert!(on_zero2.abs() < 1e-13);
                assert!((on_one1 - u).abs() < 1e-13, "{m:?} C(1,{u})={on_one1}");
                assert!((on_one2 - u).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn frank_conditional_matches_finite_difference() {
        let m = DependenceModel::frank(13.0).unwrap();
        let h = 1e-6;
        for &(u1, u2) in &[(0.3, 0.7), (0.9, 0.2), (0.05, 0.6), (0.5, 0.5)] {
            let fd = (copula_cdf(m, UnitSquarePoint::new(u1 + h, u2).unwrap())
                - copula_cdf(m, UnitSquarePoint::new(u1 - h, u2).unwrap()))
                / (2.0 * h);
            assert_relative_eq!(conditional_cdf(m, u1, u2).unwrap(), fd, epsilon = 1e-6);
        }
    }

    #[test]
    fn density_integrates_to_cdf_midpoint_rule() {
        // Double midpoint rule on [0,u1]x[0,u2]; O(h^2) with h = 1/400.
        for m in [
            DependenceModel::frank(5.0).unwrap(),
            DependenceModel::frank(-10.0).unwrap(),
            DependenceModel::fgm(0.8).unwrap(),
        ] {
            for &(a, b) in &[(0.7, 0.4), (0.3, 0.9), (1.0, 1.0)] {
                let n = 400;
                let (ha, hb) = (a / n as f64, b / n as f64);
                let mut acc = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        let p = UnitSquarePoint::new(
                            (i as f64 + 0.5) * ha,
                            (j as f64 + 0.5) * hb,
                        )
                        .unwrap();
                        acc += copula_density(m, p).unwrap();
                    }
                }
                acc *= ha * hb;
                let cdf = copula_cdf(m, UnitSquarePoint::new(a, b).unwrap());
                assert_relative_eq!(acc, cdf, epsilon = 1e-4);
            }
        }
    }

    #[test]
    fn bounds_have_no_density() {
        let p = UnitSquarePoint::new(0.4, 0.6).unwrap();
        assert!(matches!(
            copula_density(DependenceModel::LowerFrechet, p),
            Err(Error::NoDensity)
        ));
        assert!(matches!(
            copula_density(DependenceModel::UpperFrechet, p),
            Err(Error::NoDensity)
        ));
    }

    #[test]
    fn singular_bound_quantiles() {
        assert_eq!(
            conditional_quantile(DependenceModel::UpperFrechet, 0.3, 0.99).unwrap(),
            0.3
        );
        assert_eq!(
            conditional_quantile(DependenceModel::LowerFrechet, 0.3, 0.01).unwrap(),
            0.7
        );
    }

    #[test]
    fn sample_growth_is_prefix_stable() {
        let m = DependenceModel::frank(4.0).unwrap();
        let small = sample_pairs(m, 1000, 7);
        let big = sample_pairs(m, 70_000, 7);
        assert_eq!(&big[..1000], &small[..]);
    }

    #[test]
    fn sampling_is_reproducible() {
        let m = DependenceModel::fgm(-0.7).unwrap();
        assert_eq!(sample_pairs(m, 200_000, 11), sample_pairs(m, 200_000, 11));
    }

    proptest! {
        #[test]
        fn cdf_respects_frechet_sandwich(
            fam in 0usize..10,
            u1 in 0.0f64..=1.0,
            u2 in 0.0f64..=1.0,
        ) {
            let m = families()[fam];
            let p = UnitSquarePoint::new(u1, u2).unwrap();
            let c = copula_cdf(m, p);
            let lower = (u1 + u2 - 1.0).max(0.0);
            let upper = u1.min(u2);
            prop_assert!(c >= lower - 1e-12);
            prop_assert!(c <= upper + 1e-12);
        }

        #[test]
        fn radial_symmetry_of_all_families(
            fam in 0usize..10,
            u1 in 0.0f64..=1.0,
            u2 in 0.0f64..=1.0,
        ) {
            // Every family here is radially symmetric, so the survival copula
            // coincides with the copula itself.
            let m = families()[fam];
            let p = UnitSquarePoint::new(u1, u2).unwrap();
            prop_assert!((survival_copula(m, p) - copula_cdf(m, p)).abs() <= 1e-12);
        }

        #[test]
        fn two_increasing_on_random_rectangles(
            fam in 0usize..10,
            a1 in 0.0f64..=1.0, b1 in 0.0f64..=1.0,
            a2 in 0.0f64..=1.0, b2 in 0.0f64..=1.0,
        ) {
            let m = families()[fam];
            let (lo1, hi1) = if a1 <= b1 { (a1, b1) } else { (b1, a1) };
            let (lo2, hi2) = if a2 <= b2 { (a2, b2) } else { (b2, a2) };
            let c = |x, y| copula_cdf(m, UnitSquarePoint::new(x, y).unwrap());
            let mass = c(hi1, hi2) - c(lo1, hi2) - c(hi1, lo2) + c(lo1, lo2);
            prop_assert!(mass >= -1e-12, "negative rectangle mass {mass}");
        }

        #[test]
        fn conditional_roundtrip(
            fam in prop_oneof![Just(0usize), 3usize..10],
            u1 in 1e-9f64..=1.0,
            v in 0.0f64..=1.0,
        ) {
            // Skip the singular bounds: their conditional law is degenerate.
            let m = families()[fam];
            let u2 = conditional_quantile(m, u1, v).unwrap();
            let back = conditional_cdf(m, u1, u2).unwrap();
            prop_assert!((back - v).abs() <= 1e-10, "v={v} back={back}");
        }

        #[test]
        fn density_is_nonnegative(
            fam in prop_oneof![Just(0usize), 3usize..10],
            u1 in 0.0f64..=1.0,
            u2 in 0.0f64..=1.0,
        ) {
            let m = families()[fam];
            let p = UnitSquarePoint::new(u1, u2).unwrap();
            prop_assert!(copula_density(m, p).unwrap() >= -1e-12);
        }
    }
}
