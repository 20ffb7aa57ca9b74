//! The `validate` command: a self-auditing battery of numerical checks.
//!
//! Every check reduces to a single `measured <= tolerance` comparison so the
//! report is mechanically judgeable. Checks phrased as "strictly greater"
//! report the worst shortfall against the required margin (0 when satisfied).
//! All randomness is seeded; two runs with the same seed produce identical
//! bytes on stdout and in the CSV report.

use crate::csvout::CsvDoc;
use crate::numfmt::{fmt_bool, fmt_num};
use crate::params::ValidateArgs;
use anyhow::{bail, Result};
use dirtymac::{
    adaptive_quadrature, conditional_cdf, conditional_quantile, copula_cdf, copula_density,
    coverage_region, ei_neg, estimate_outage, estimate_sum_rate, exp_ei_neg, outage_fgm,
    outage_frank, outage_generic, outage_lower_fh, outage_upper_fh, sample_pairs,
    sum_rate_fgm_approx, sum_rate_fgm_exact, sum_rate_quadrature, survival_copula,
    wedge_rate_term, wedge_rate_term_quadrature, AvgSnrPair, BottleneckUser, DependenceModel,
    Geometry, GridSpec, OutageQuery, RateMethod, UnitSquarePoint,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::LN_2;

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub tolerance: f64,
    pub measured: f64,
}

impl CheckResult {
    pub fn pass(&self) -> bool {
        self.measured <= self.tolerance
    }
}

fn check(suite: &'static str, name: &'static str, tolerance: f64, measured: f64) -> CheckResult {
    CheckResult {
        suite,
        name,
        tolerance,
        measured,
    }
}

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

fn grid21() -> Vec<f64> {
    (0..=20).map(|i| i as f64 / 20.0).collect()
}

fn pt(u1: f64, u2: f64) -> UnitSquarePoint {
    UnitSquarePoint::new(u1, u2).expect("grid point inside the unit square")
}

// ---------------------------------------------------------------------------
// copula suite

fn axiom_models() -> Vec<DependenceModel> {
    let mut out = vec![
        DependenceModel::Independence,
        DependenceModel::LowerFrechet,
        DependenceModel::UpperFrechet,
    ];
    for t in [-30.0, -2.0, 2.0, 30.0] {
        out.push(DependenceModel::frank(t).unwrap());
    }
    for t in [-1.0, -0.3, 1.0] {
        out.push(DependenceModel::fgm(t).unwrap());
    }
    out
}

fn density_models() -> Vec<DependenceModel> {
    axiom_models().into_iter().filter(|m| m.has_density()).collect()
}

fn sampler_models() -> Vec<DependenceModel> {
    vec![
        DependenceModel::LowerFrechet,
        DependenceModel::UpperFrechet,
        DependenceModel::Independence,
        DependenceModel::frank(-30.0).unwrap(),
        DependenceModel::frank(-1.0).unwrap(),
        DependenceModel::frank(8.0).unwrap(),
        DependenceModel::fgm(-1.0).unwrap(),
        DependenceModel::fgm(1.0).unwrap(),
    ]
}

pub fn copula_checks(seed: u64) -> Vec<CheckResult> {
    let s = "copula";
    let grid = grid21();
    let n = grid.len();

    let mut boundary: f64 = 0.0;
    let mut volume_deficit: f64 = 0.0;
    let mut sandwich: f64 = 0.0;
    let mut symmetry: f64 = 0.0;
    for model in axiom_models() {
        let mut c = vec![vec![0.0; n]; n];
        for (i, &u1) in grid.iter().enumerate() {
            for (j, &u2) in grid.iter().enumerate() {
                c[i][j] = copula_cdf(model, pt(u1, u2));
            }
        }
        for (i, &u) in grid.iter().enumerate() {
            boundary = boundary
                .max(c[i][0].abs())
                .max(c[0][i].abs())
                .max((c[i][n - 1] - u).abs())
                .max((c[n - 1][i] - u).abs());
        }
        // Adjacent-cell volumes; 2-increasingness over all rectangles follows
        // by additivity.
        for i in 1..n {
            for j in 1..n {
                let vol = c[i][j] - c[i - 1][j] - c[i][j - 1] + c[i - 1][j - 1];
                volume_deficit = volume_deficit.max(-vol);
            }
        }
        for (i, &u1) in grid.iter().enumerate() {
            for (j, &u2) in grid.iter().enumerate() {
                let lower = (u1 + u2 - 1.0).max(0.0);
                let upper = u1.min(u2);
                sandwich = sandwich.max(lower - c[i][j]).max(c[i][j] - upper);
                symmetry = symmetry.max((survival_copula(model, pt(u1, u2)) - c[i][j]).abs());
            }
        }
    }

    let mut frank_indep: f64 = 0.0;
    let mut frank_upper: f64 = 0.0;
    let mut frank_lower: f64 = 0.0;
    let near_indep = DependenceModel::frank(1e-6).unwrap();
    let near_upper = DependenceModel::frank(50.0).unwrap();
    let near_lower = DependenceModel::frank(-50.0).unwrap();
    for &u1 in &grid {
        for &u2 in &grid {
            let p = pt(u1, u2);
            frank_indep = frank_indep.max((copula_cdf(near_indep, p) - u1 * u2).abs());
            frank_upper = frank_upper.max((copula_cdf(near_upper, p) - u1.min(u2)).abs());
            frank_lower =
                frank_lower.max((copula_cdf(near_lower, p) - (u1 + u2 - 1.0).max(0.0)).abs());
        }
    }

    let interior: Vec<f64> = (1..20).map(|i| i as f64 / 20.0).collect();
    let mut roundtrip: f64 = 0.0;
    let mut slope: f64 = 0.0;
    let eps = 1e-5;
    for model in density_models() {
        for &u1 in &interior {
            for &v in &interior {
                let u2 = conditional_quantile(model, u1, v).unwrap();
                let back = conditional_cdf(model, u1, u2).unwrap();
                roundtrip = roundtrip.max((back - v).abs());
            }
            for &u2 in &interior {
                let h = conditional_cdf(model, u1, u2).unwrap();
                let fd = (copula_cdf(model, pt(u1 + eps, u2)) - copula_cdf(model, pt(u1 - eps, u2)))
                    / (2.0 * eps);
                slope = slope.max((h - fd).abs());
            }
        }
    }

    let mut mass_err: f64 = 0.0;
    for theta in [(5.0, true), (-12.0, true), (0.7, false), (-1.0, false)] {
        let model = if theta.1 {
            DependenceModel::frank(theta.0).unwrap()
        } else {
            DependenceModel::fgm(theta.0).unwrap()
        };
        let m = 400;
        let mut total = 0.0;
        for i in 0..m {
            let u1 = (i as f64 + 0.5) / m as f64;
            for j in 0..m {
                let u2 = (j as f64 + 0.5) / m as f64;
                total += copula_density(model, pt(u1, u2)).unwrap();
            }
        }
        mass_err = mass_err.max((total / (m * m) as f64 - 1.0).abs());
    }

    let mut sup_dist: f64 = 0.0;
    for (k, model) in sampler_models().into_iter().enumerate() {
        sup_dist = sup_dist.max(empirical_sup_distance(model, 1_000_000, seed + k as u64));
    }

    vec![
        check(s, "boundary_axioms", 1e-12, boundary),
        check(s, "two_increasing", 1e-12, volume_deficit),
        check(s, "frechet_sandwich", 1e-12, sandwich),
        check(s, "survival_symmetry", 1e-12, symmetry),
        check(s, "frank_independence_limit", 1e-4, frank_indep),
        check(s, "frank_upper_limit", 0.02, frank_upper),
        check(s, "frank_lower_limit", 0.02, frank_lower),
        check(s, "conditional_roundtrip", 1e-10, roundtrip),
        check(s, "conditional_matches_cdf_slope", 1e-6, slope),
        check(s, "density_mass", 1e-4, mass_err),
        check(s, "empirical_copula", 0.005, sup_dist),
    ]
}

/// Sup distance between the empirical copula of `n` samples and the analytic
/// CDF, evaluated on the 10x10 threshold lattice (i/10, j/10).
fn empirical_sup_distance(model: DependenceModel, n: usize, seed: u64) -> f64 {
    const B: usize = 10;
    let mut bins = [[0u64; B]; B];
    for p in sample_pairs(model, n, seed) {
        let i = ((p.u1() * B as f64) as usize).min(B - 1);
        let j = ((p.u2() * B as f64) as usize).min(B - 1);
        bins[i][j] += 1;
    }
    let mut worst: f64 = 0.0;
    let mut cum = [[0u64; B]; B];
    for i in 0..B {
        for j in 0..B {
            let above = if i > 0 { cum[i - 1][j] } else { 0 };
            let left = if j > 0 { cum[i][j - 1] } else { 0 };
            let diag = if i > 0 && j > 0 { cum[i - 1][j - 1] } else { 0 };
            cum[i][j] = bins[i][j] + above + left - diag;
            let emp = cum[i][j] as f64 / n as f64;
            let t1 = (i + 1) as f64 / B as f64;
            let t2 = (j + 1) as f64 / B as f64;
            worst = worst.max((emp - copula_cdf(model, pt(t1, t2))).abs());
        }
    }
    worst
}

// ---------------------------------------------------------------------------
// outage suite

enum OutageForm {
    Lower,
    Upper,
    Frank(f64),
    Fgm(f64),
}

impl OutageForm {
    fn closed(&self, snrs: AvgSnrPair, q: OutageQuery) -> f64 {
        match self {
            Self::Lower => outage_lower_fh(snrs, q),
            Self::Upper => outage_upper_fh(snrs, q),
            Self::Frank(t) => outage_frank(snrs, q, *t).unwrap(),
            Self::Fgm(t) => outage_fgm(snrs, q, *t).unwrap(),
        }
    }

    fn model(&self) -> DependenceModel {
        match self {
            Self::Lower => DependenceModel::LowerFrechet,
            Self::Upper => DependenceModel::UpperFrechet,
            Self::Frank(t) => DependenceModel::frank(*t).unwrap(),
            Self::Fgm(t) => DependenceModel::fgm(*t).unwrap(),
        }
    }
}

fn outage_forms() -> Vec<OutageForm> {
    let mut out = vec![OutageForm::Lower, OutageForm::Upper];
    out.extend([-30.0, -5.0, -0.7, 0.7, 5.0, 30.0].map(OutageForm::Frank));
    out.extend([-1.0, -0.4, 0.0, 0.4, 1.0].map(OutageForm::Fgm));
    out
}

pub fn outage_checks() -> Vec<CheckResult> {
    let s = "outage";
    let forms = outage_forms();
    let margin = 1e-9;

    let mut closed_err: f64 = 0.0;
    let mut fgm_shortfall: f64 = 0.0;
    let mut frechet_violation: f64 = 0.0;
    let mut frechet_shortfall: f64 = 0.0;
    let mut points = 0usize;
    for gbar1 in [0.8, 2.0, 10.0, 50.0] {
        for mu in [0.5, 1.0, 2.0] {
            let snrs = AvgSnrPair::new(gbar1, mu * gbar1).unwrap();
            for ro in [0.2, 1.0, 3.0] {
                for d1 in [0.7, 1.3] {
                    let geom = Geometry::new(d1, 1.0, 3.5).unwrap();
                    let q = OutageQuery::new(geom, ro).unwrap();
                    let mut strict_ops = Vec::new();
                    let mut weak_ops = Vec::new();
                    for form in &forms {
                        let closed = form.closed(snrs, q);
                        let generic = outage_generic(form.model(), snrs, q);
                        closed_err = closed_err.max((closed - generic).abs());
                        points += 1;
                        match form {
                            OutageForm::Lower | OutageForm::Upper => {}
                            // Frank at theta = +-30 tracks the bounds to well
                            // below 1e-9 at asymmetric survivals, so it only
                            // joins the non-strict sandwich.
                            OutageForm::Frank(t) if t.abs() >= 29.0 => weak_ops.push(closed),
                            _ => {
                                strict_ops.push(closed);
                                weak_ops.push(closed);
                            }
                        }
                    }
                    let op = |f: OutageForm| f.closed(snrs, q);
                    let (p_upper, p_lower) = (op(OutageForm::Upper), op(OutageForm::Lower));
                    for &p_fam in &weak_ops {
                        frechet_violation = frechet_violation
                            .max(p_upper - p_fam)
                            .max(p_fam - p_lower);
                    }
                    // Strict separation holds only at interior points; once a
                    // marginal survival underflows every family saturates at
                    // outage 1 and the gaps legitimately collapse.
                    if p_lower >= 1.0 - 1e-9 || p_upper <= 1e-9 {
                        continue;
                    }
                    let (p_pos, p_zero, p_neg) = (
                        op(OutageForm::Fgm(1.0)),
                        op(OutageForm::Fgm(0.0)),
                        op(OutageForm::Fgm(-1.0)),
                    );
                    fgm_shortfall = fgm_shortfall
                        .max(margin - (p_zero - p_pos))
                        .max(margin - (p_neg - p_zero));
                    for &p_fam in &strict_ops {
                        frechet_shortfall = frechet_shortfall
                            .max(margin - (p_fam - p_upper))
                            .max(margin - (p_lower - p_fam));
                    }
                }
            }
        }
    }
    assert!(points >= 400, "outage grid too small: {points}");

    // Rate limits at 30 dB mean SNR on both links, unit distances.
    let snrs = AvgSnrPair::new(1000.0, 1000.0).unwrap();
    let geom = Geometry::new(1.0, 1.0, 3.5).unwrap();
    let limit_forms: Vec<OutageForm> = vec![
        OutageForm::Lower,
        OutageForm::Upper,
        OutageForm::Frank(30.0),
        OutageForm::Frank(-30.0),
        OutageForm::Fgm(1.0),
        OutageForm::Fgm(-1.0),
    ];
    let q_small = OutageQuery::new(geom, 1e-4).unwrap();
    let op_small = limit_forms
        .iter()
        .map(|f| f.closed(snrs, q_small))
        .fold(0.0_f64, f64::max);
    let q_large = OutageQuery::new(geom, 20.0).unwrap();
    let op_large_gap = limit_forms
        .iter()
        .map(|f| 1.0 - f.closed(snrs, q_large))
        .fold(0.0_f64, f64::max);

    let mut decrease: f64 = 0.0;
    let snrs_m = AvgSnrPair::new(10.0, 20.0).unwrap();
    let geom_m = Geometry::new(1.0, 1.3, 3.5).unwrap();
    for form in &limit_forms {
        let mut prev = 0.0;
        for k in 1..=60 {
            let q = OutageQuery::new(geom_m, 0.1 * k as f64).unwrap();
            let op = form.closed(snrs_m, q);
            decrease = decrease.max(prev - op);
            prev = op;
        }
    }

    vec![
        check(s, "closed_vs_generic", 1e-12, closed_err),
        check(s, "fgm_ordering_margin", 0.0, fgm_shortfall.max(0.0)),
        check(s, "frechet_sandwich_on_outage", 1e-12, frechet_violation.max(0.0)),
        check(s, "frechet_ordering_margin", 0.0, frechet_shortfall.max(0.0)),
        check(s, "outage_vanishes_at_tiny_rate", 1e-6, op_small),
        check(s, "outage_saturates_at_huge_rate", 1e-3, op_large_gap),
        check(s, "monotone_in_rate", 1e-12, decrease),
    ]
}

// ---------------------------------------------------------------------------
// coverage suite

/// (x, Ei(-x)) frozen at 40-digit precision; spans both evaluation branches.
const EI_TABLE: [(f64, f64); 26] = [
    (1e-06, -13.238_295_893_062_49),
    (1e-05, -10.935_719_800_043_696),
    (1e-04, -8.633_224_704_574_705),
    (1e-03, -6.331_539_364_136_149),
    (1e-02, -4.037_929_576_538_114),
    (0.1, -1.822_923_958_419_390_6),
    (0.25, -1.044_282_634_443_738_1),
    (0.5, -0.559_773_594_776_160_8),
    (0.75, -0.340_340_812_911_230_03),
    (1.0, -0.219_383_934_395_520_29),
    (1.5, -0.100_019_582_406_632_65),
    (2.0, -0.048_900_510_708_061_12),
    (3.0, -0.013_048_381_094_197_037),
    (4.0, -0.003_779_352_409_848_906_7),
    (5.0, -0.001_148_295_591_275_325_7),
    (6.0, -0.000_360_082_452_162_658_7),
    (7.0, -0.000_115_481_731_610_338_22),
    (8.0, -0.000_037_665_622_843_924_9),
    (10.0, -0.000_004_156_968_929_685_325),
    (13.0, -1.621_866_218_801_432_8e-7),
    (17.0, -2.306_431_989_821_654_3e-9),
    (22.0, -1.214_937_895_620_437_3e-11),
    (28.0, -2.386_941_511_933_733_3e-14),
    (35.0, -1.752_705_938_994_737e-17),
    (42.0, -1.337_790_881_001_177_5e-20),
    (50.0, -3.783_264_029_550_459e-24),
];

fn rand_in(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.gen::<f64>()
}

pub fn coverage_checks(seed: u64) -> Vec<CheckResult> {
    let s = "coverage";

    let mut ei_err: f64 = 0.0;
    for &(x, want) in &EI_TABLE {
        ei_err = ei_err.max(rel_err(ei_neg(x).unwrap(), want));
        ei_err = ei_err.max(rel_err(exp_ei_neg(x).unwrap(), want * x.exp()));
    }

    // Closed wedge terms against direct quadrature of their defining double
    // integrals at seeded random parameter points.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut wedge_err: f64 = 0.0;
    for _ in 0..20 {
        let snrs = AvgSnrPair::new(rand_in(&mut rng, 0.8, 12.0), rand_in(&mut rng, 0.8, 12.0))
            .unwrap();
        let geom = Geometry::new(
            rand_in(&mut rng, 0.6, 1.5),
            rand_in(&mut rng, 0.6, 1.5),
            rand_in(&mut rng, 2.5, 4.5),
        )
        .unwrap();
        for weak in [BottleneckUser::User1, BottleneckUser::User2] {
            for (p, q) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                let closed = wedge_rate_term(snrs, geom, weak, p, q).unwrap();
                let direct = wedge_rate_term_quadrature(snrs, geom, weak, p, q).unwrap();
                wedge_err = wedge_err.max(rel_err(closed, direct));
            }
        }
    }

    // The three integral identities the closed forms rest on.
    let mut id_finite: f64 = 0.0;
    let mut id_log: f64 = 0.0;
    let mut id_ei: f64 = 0.0;
    for _ in 0..10 {
        let zeta = rand_in(&mut rng, 0.3, 3.0);
        let eta = rand_in(&mut rng, 0.3, 3.0);
        let kappa = rand_in(&mut rng, 0.3, 3.0);
        let a = rand_in(&mut rng, 0.0, 0.6);
        let b = a + rand_in(&mut rng, 1.0, 4.0);

        // Antiderivative of e^{-zeta x} log2(1 + eta x):
        // F(x) = e^{-zeta x} [e^{zeta x + zeta/eta} Ei(-(zeta/eta + zeta x))
        //        - ln(1 + eta x)] / (zeta ln 2).
        let anti = |x: f64| {
            (-zeta * x).exp() * (exp_ei_neg(zeta / eta + zeta * x).unwrap() - (eta * x).ln_1p())
                / (zeta * LN_2)
        };
        let direct = adaptive_quadrature(
            |x| (-zeta * x).exp() * (eta * x).ln_1p() / LN_2,
            a,
            b,
            1e-13,
            1e-12,
            200,
        )
        .unwrap();
        id_finite = id_finite.max(rel_err(anti(b) - anti(a), direct.value));

        // Half-line log moment: integral = -e^{zeta/eta} Ei(-zeta/eta) / (zeta ln 2).
        let hi = 45.0 / zeta;
        let direct = adaptive_quadrature(
            |x| (-zeta * x).exp() * (eta * x).ln_1p() / LN_2,
            0.0,
            hi,
            1e-13,
            1e-12,
            400,
        )
        .unwrap();
        id_log = id_log.max(rel_err(
            -exp_ei_neg(zeta / eta).unwrap() / (zeta * LN_2),
            direct.value,
        ));

        // Half-line Ei moment: integral of e^{-zeta x} Ei(-(kappa + eta x))
        // = [Ei(-kappa) - e^{zeta kappa / eta} Ei(-kappa (zeta + eta) / eta)] / zeta.
        let direct = adaptive_quadrature(
            |x| (-zeta * x).exp() * ei_neg(kappa + eta * x).unwrap(),
            0.0,
            hi,
            1e-13,
            1e-12,
            400,
        )
        .unwrap();
        let closed = (ei_neg(kappa).unwrap()
            - (zeta * kappa / eta).exp() * ei_neg(kappa * (zeta + eta) / eta).unwrap())
            / zeta;
        id_ei = id_ei.max(rel_err(closed, direct.value));
    }

    // Exact FGM sum rate against nested quadrature over a parameter grid.
    let snr_levels = [0.5, 2.0, 10.0];
    let geoms = [
        Geometry::new(1.0, 1.0, 3.5).unwrap(),
        Geometry::new(1.0, 2.0, 3.5).unwrap(),
    ];
    let thetas = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let mut exact_err: f64 = 0.0;
    let mut approx_sign: f64 = 0.0;
    let mut exact_mono: f64 = 0.0;
    let mut approx_mono: f64 = 0.0;
    let mut wrong_way: f64 = 0.0;
    let mut approx_swap: f64 = 0.0;
    let mut approx_rel: f64 = 0.0;
    for &g1 in &snr_levels {
        for &g2 in &snr_levels {
            let snrs = AvgSnrPair::new(g1, g2).unwrap();
            for geom in geoms {
                let mut r_exact = Vec::new();
                let mut r_approx = Vec::new();
                for &theta in &thetas {
                    let model = DependenceModel::fgm(theta).unwrap();
                    let exact = sum_rate_fgm_exact(snrs, geom, theta).unwrap();
                    let quad = sum_rate_quadrature(model, snrs, geom).unwrap();
                    exact_err = exact_err.max(rel_err(exact, quad));

                    let approx = sum_rate_fgm_approx(snrs, geom, theta).unwrap();
                    approx_sign = approx_sign.max(-approx);
                    approx_rel = approx_rel.max(rel_err(approx, exact));
                    r_exact.push(exact);
                    r_approx.push(approx);

                    let swapped = sum_rate_fgm_approx(
                        AvgSnrPair::new(g2, g1).unwrap(),
                        Geometry::new(geom.d2(), geom.d1(), geom.alpha()).unwrap(),
                        theta,
                    )
                    .unwrap();
                    approx_swap = approx_swap.max((approx - swapped).abs());
                }
                for i in 1..thetas.len() {
                    let gap_e = r_exact[i] - r_exact[i - 1];
                    let gap_a = r_approx[i] - r_approx[i - 1];
                    // Monotone growth in theta is a theorem only for equal
                    // distances, where the bottleneck split coincides with
                    // the true per-user minimum; under unequal distances the
                    // closed form may decrease with theta, and the surrogate
                    // is held to following the exact direction instead.
                    if geom.d1() == geom.d2() {
                        exact_mono = exact_mono.max(-gap_e);
                        approx_mono = approx_mono.max(-gap_a);
                    }
                    if gap_e.abs() > 1e-10 && gap_e.signum() != gap_a.signum() {
                        wrong_way = wrong_way.max(gap_a.abs());
                    }
                }
            }
        }
    }

    let sym = sum_rate_fgm_exact(
        AvgSnrPair::new(2.0, 2.0).unwrap(),
        Geometry::new(1.0, 1.0, 3.5).unwrap(),
        0.0,
    )
    .unwrap();
    let sym_err = rel_err(sym, 0.430_173_691_135_442_96);

    // Region nesting and growth on the full-size grid.
    let grid = GridSpec::new(2.0, 2.0, 50, 50).unwrap();
    let region = |gbar1: f64, theta: f64| {
        let snrs = AvgSnrPair::new(gbar1, gbar1).unwrap();
        let model = DependenceModel::fgm(theta).unwrap();
        coverage_region(model, snrs, 3.5, 0.5, grid, RateMethod::Exact).unwrap()
    };
    let (r_neg, r_zero, r_pos) = (region(10.0, -1.0), region(10.0, 0.0), region(10.0, 1.0));
    let mut nest_violations = 0usize;
    for i in 0..r_neg.in_region.len() {
        if r_neg.in_region[i] && !r_zero.in_region[i] {
            nest_violations += 1;
        }
        if r_zero.in_region[i] && !r_pos.in_region[i] {
            nest_violations += 1;
        }
    }
    if !(r_pos.area >= r_zero.area && r_zero.area >= r_neg.area) {
        nest_violations += 1;
    }
    let r_hi = region(20.0, 0.0);
    let mut growth_violations = 0usize;
    for i in 0..r_zero.in_region.len() {
        if r_zero.in_region[i] && !r_hi.in_region[i] {
            growth_violations += 1;
        }
    }
    if r_hi.area <= r_zero.area {
        growth_violations += 1;
    }

    vec![
        check(s, "specfun_ei_reference", 1e-10, ei_err),
        check(s, "wedge_terms_vs_quadrature", 1e-6, wedge_err),
        check(s, "identity_finite_log_moment", 1e-8, id_finite),
        check(s, "identity_halfline_log_moment", 1e-8, id_log),
        check(s, "identity_halfline_ei_moment", 1e-8, id_ei),
        check(s, "exact_rate_vs_quadrature", 1e-6, exact_err),
        check(s, "exact_rate_symmetric_reference", 1e-6, sym_err),
        check(s, "approx_rate_positive", 0.0, approx_sign.max(0.0)),
        check(s, "exact_rate_theta_monotone_equal_d", 1e-12, exact_mono.max(0.0)),
        check(s, "approx_rate_theta_monotone_equal_d", 1e-12, approx_mono.max(0.0)),
        check(s, "approx_follows_exact_theta_trend", 1e-12, wrong_way),
        check(s, "approx_rate_swap_symmetry", 1e-12, approx_swap),
        // Report-only: the surrogate's measured error is an output, not a
        // promise. It fails only if the approximation exceeds 100 percent.
        check(s, "approx_rate_relative_error", 1.0, approx_rel),
        check(s, "region_nesting", 0.0, nest_violations as f64),
        check(s, "region_grows_with_snr", 0.0, growth_violations as f64),
    ]
}

// ---------------------------------------------------------------------------
// mc suite

fn cell_seed(base: u64, idx: u64) -> u64 {
    base.wrapping_add(idx.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn mc_checks(seed: u64) -> Vec<CheckResult> {
    let s = "mc";
    let geom = Geometry::new(1.0, 1.0, 3.5).unwrap();
    let forms: Vec<OutageForm> = vec![
        OutageForm::Lower,
        OutageForm::Upper,
        OutageForm::Frank(30.0),
        OutageForm::Frank(-30.0),
        OutageForm::Fgm(1.0),
        OutageForm::Fgm(-1.0),
    ];

    // Outage estimates across the SNR sweep configuration: each deviation is
    // scored against max(4 standard errors, 5e-3).
    let mut dev_ratio: f64 = 0.0;
    let mut idx = 0u64;
    for mu in [1.0, 2.0] {
        for gbar1 in [1.0, 10.0, 100.0] {
            let snrs = AvgSnrPair::new(gbar1, mu * gbar1).unwrap();
            let q = OutageQuery::new(geom, 1.0).unwrap();
            for form in &forms {
                let closed = form.closed(snrs, q);
                let est =
                    estimate_outage(form.model(), snrs, q, 1_000_000, cell_seed(seed, idx))
                        .unwrap();
                idx += 1;
                let budget = (4.0 * est.std_error).max(5e-3);
                dev_ratio = dev_ratio.max((est.mean - closed).abs() / budget);
            }
        }
    }

    let mut rate_ratio: f64 = 0.0;
    let snrs = AvgSnrPair::new(4.0, 1.5).unwrap();
    let geom_r = Geometry::new(1.2, 1.2, 3.5).unwrap();
    for (k, theta) in [-1.0, 0.0, 1.0].into_iter().enumerate() {
        let model = DependenceModel::fgm(theta).unwrap();
        let exact = sum_rate_fgm_exact(snrs, geom_r, theta).unwrap();
        let est =
            estimate_sum_rate(model, snrs, geom_r, 400_000, cell_seed(seed, 100 + k as u64))
                .unwrap();
        rate_ratio = rate_ratio.max((est.mean - exact).abs() / (4.0 * est.std_error));
    }

    let det_model = DependenceModel::frank(10.0).unwrap();
    let det_snrs = AvgSnrPair::new(5.0, 5.0).unwrap();
    let det_q = OutageQuery::new(geom, 1.0).unwrap();
    let a = estimate_outage(det_model, det_snrs, det_q, 100_000, seed).unwrap();
    let b = estimate_outage(det_model, det_snrs, det_q, 100_000, seed).unwrap();
    let det_diff = (a.mean - b.mean).abs() + (a.std_error - b.std_error).abs();

    // Error-bar calibration: the truth should sit inside two standard errors
    // for at least 90 of 100 independent seeds.
    let cal_snrs = AvgSnrPair::new(5.0, 10.0).unwrap();
    let cal_q = OutageQuery::new(geom, 1.0).unwrap();
    let truth = outage_generic(DependenceModel::Independence, cal_snrs, cal_q);
    let mut covered = 0usize;
    for k in 0..100 {
        let est = estimate_outage(
            DependenceModel::Independence,
            cal_snrs,
            cal_q,
            10_000,
            cell_seed(seed, 200 + k),
        )
        .unwrap();
        if (est.mean - truth).abs() <= 2.0 * est.std_error {
            covered += 1;
        }
    }
    let coverage_gap = (0.90 - covered as f64 / 100.0).max(0.0);

    vec![
        check(s, "outage_estimates_within_budget", 1.0, dev_ratio),
        check(s, "sum_rate_estimates_within_4se", 1.0, rate_ratio),
        check(s, "same_seed_same_estimate", 0.0, det_diff),
        check(s, "error_bars_cover_truth", 0.0, coverage_gap),
    ]
}

// ---------------------------------------------------------------------------
// driver

pub fn suite_checks(suite: &str, seed: u64) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    match suite {
        "copula" => out.extend(copula_checks(seed)),
        "outage" => out.extend(outage_checks()),
        "coverage" => out.extend(coverage_checks(seed)),
        "mc" => out.extend(mc_checks(seed)),
        "all" => {
            out.extend(copula_checks(seed));
            out.extend(outage_checks());
            out.extend(coverage_checks(seed));
            out.extend(mc_checks(seed));
        }
        other => bail!("unknown suite {other:?}; choose copula, outage, coverage, mc or all"),
    }
    Ok(out)
}

pub fn report(results: &[CheckResult]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<9} {:<34} {:>12} {:>12}   {}\n",
        "suite", "check", "tolerance", "measured", "status"
    ));
    for r in results {
        out.push_str(&format!(
            "{:<9} {:<34} {:>12} {:>12}   {}\n",
            r.suite,
            r.name,
            format!("{:.3e}", r.tolerance),
            format!("{:.3e}", r.measured),
            if r.pass() { "PASS" } else { "FAIL" }
        ));
    }
    let passed = results.iter().filter(|r| r.pass()).count();
    out.push_str(&format!("validate: {passed}/{} checks passed\n", results.len()));
    out
}

pub fn run(args: &ValidateArgs) -> Result<()> {
    let results = suite_checks(&args.suite, args.seed)?;
    print!("{}", report(&results));
    if let Some(path) = &args.out {
        let mut doc = CsvDoc::new("validate");
        doc.meta("suite", &args.suite);
        doc.meta("seed", args.seed);
        doc.header(
            ["suite", "check", "tolerance", "measured", "pass"]
                .map(String::from)
                .to_vec(),
        );
        for r in &results {
            doc.row(vec![
                r.suite.to_string(),
                r.name.to_string(),
                fmt_num(r.tolerance),
                fmt_num(r.measured),
                fmt_bool(r.pass()),
            ]);
        }
        doc.save(path)?;
    }
    let failed: Vec<&CheckResult> = results.iter().filter(|r| !r.pass()).collect();
    if !failed.is_empty() {
        bail!(
            "{} check(s) failed: {}",
            failed.len(),
            failed.iter().map(|r| r.name).collect::<Vec<_>>().join(", ")
        );
    }
    Ok(())
}
