//! The verification suite: one function per acceptance criterion, each
//! producing exactly one [`CheckRecord`], plus the report builders behind
//! the CLI subcommands.

use std::time::Instant;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use serde_json::json;

use crate::contact_local::{
    local_area_dynamical, local_area_geometric, odd_area_relation, ClosedSurface, ContactChart, SearchOptions,
    SecondFundamentalPair, Surface, SurfaceSpec,
};
use crate::crofton_flat::{crofton_fit, gauss_crofton_integral, singular_constant, OffsetSign};
use crate::grassmann_mc::{adjudicate_moment, moment_integral, stream_rng, test_uniform_simplex, Normalization};
use crate::matnum::{pfaffian, skew_canonical, standard_j, SkewMatrix, SymMatrix};
use crate::report::{CheckKind, CheckRecord, ExperimentConfig, ReportDocument};
use crate::sphere_contact::{
    crofton_coefficients_by_solve, crofton_coefficients_closed_form, phi_table, psi_table, relation_holds,
    convexity_gap, SphereTables,
};
use crate::tolerances::{Thresholds, GAMMA_REL};
use crate::{Error, Result};

/// Record names in criterion order.
pub const CRITERIA: [&str; 12] = [
    "sphere_tables",
    "euler_closed_form",
    "sphere_radius_law",
    "local_area_equivalence",
    "euler_index_sum",
    "pfaffian_canonical_form",
    "uniform_simplex",
    "moment_normalization",
    "symplectic_crofton",
    "gauss_crofton",
    "convexity_inequality",
    "determinism_and_runtime",
];

const MAX_TABLE_N: usize = 6;
const RADII: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
const RANDOM_CASES: usize = 1000;
const SIMPLEX_PAIRS: [(usize, usize); 3] = [(2, 1), (3, 1), (4, 2)];
const SIMPLEX_SAMPLES: usize = 100_000;
const MOMENT_SAMPLES: usize = 1_000_000;
const CROFTON_SAMPLES: usize = 200_000;
const CROFTON_EXPONENTS: [f64; 4] = [0.0, 1.0, 2.0, 3.0];
const GAUSS_EXPONENTS: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 5.0];
const WISHART_SAMPLES: usize = 10_000;

/// Fixed stream offsets so every criterion draws from its own generator.
const STREAM_HESSIANS: u64 = 1 << 40;
const STREAM_SKEW: u64 = 2 << 40;
const STREAM_WISHART: u64 = 3 << 40;

fn elapsed(start: Instant) -> f64 {
    start.elapsed().as_secs_f64()
}

fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Criterion 1: exact sphere tables and `psi = c phi` for `n <= 6`, with
/// the table build timed separately.
pub fn sphere_tables(t: &Thresholds) -> (CheckRecord, f64) {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in 0..=MAX_TABLE_N {
        let phi = phi_table(n);
        for (k, row) in phi.iter().enumerate() {
            for (m, v) in row.iter().enumerate() {
                let expected = crate::matnum::binomial(2 * m as u64, 2 * k as u64) * 2;
                if v != &num_rational::BigRational::from_integer(expected) {
                    failures.push(format!("phi[{k}][{m}] at n = {n}"));
                }
            }
        }
        for norm in [Normalization::Factorial, Normalization::Mass] {
            let c = crofton_coefficients_by_solve(n, norm);
            if !relation_holds(&c, &phi, &psi_table(n, norm)) {
                failures.push(format!("psi = c phi at n = {n}, {}", norm.label()));
            }
        }
    }
    let seconds = elapsed(start);
    let fast = seconds < t.tables_seconds;
    let record = CheckRecord::new(
        CRITERIA[0],
        CheckKind::Exact,
        "valuations of equatorial even spheres and the Crofton change of basis on the contact sphere",
    )
    .expected(json!({ "phi": "2 C(2m, 2k)", "relation": "psi = c phi", "n_max": MAX_TABLE_N, "under_seconds": t.tables_seconds }))
    .observed(json!({ "failures": failures, "within_time_budget": fast }))
    .passed(failures.is_empty() && fast);
    (record, seconds)
}

/// Criterion 2: triangular solve against the Euler secant closed form.
pub fn euler_closed_form() -> CheckRecord {
    let mut failures = Vec::new();
    for n in 0..=MAX_TABLE_N {
        for norm in [Normalization::Factorial, Normalization::Mass] {
            let solved = crofton_coefficients_by_solve(n, norm);
            let closed = crofton_coefficients_closed_form(n, norm);
            if solved != closed {
                failures.push(format!("n = {n}, {}", norm.label()));
            }
        }
    }
    CheckRecord::new(
        CRITERIA[1],
        CheckKind::Exact,
        "Crofton coefficients of the contact sphere in terms of Euler secant numbers",
    )
    .expected("c[k][j] = b_k sum_m C(2j, 2m) E_{2j-2m}, n <= 6")
    .observed(json!({ "mismatches": failures }))
    .passed(failures.is_empty())
}

fn radius_law(r: f64) -> f64 {
    8.0 / (1.0 + 0.25 / (r * r))
}

/// Criterion 3: round spheres in the symmetric chart, two polar contact
/// points and the printed radius law for the degree-two valuation.
pub fn sphere_radius_law(t: &Thresholds) -> CheckRecord {
    const PROVENANCE: &str = "degree-two contact valuation of the round sphere as a function of its radius";
    let chart = ContactChart::Symmetric { scale: 1.0 };
    let mut rows = Vec::new();
    let mut passed = true;
    for r in RADII {
        let outcome = ClosedSurface::sphere(r, [0.0; 3], chart)
            .and_then(|s| s.contact_points(SearchOptions::for_dimension(1)));
        match outcome {
            Ok(points) => {
                let at_poles = points.len() == 2
                    && points.iter().all(|p| {
                        p.chart_point[0].abs() < 1e-8 && p.chart_point[1].abs() < 1e-8 && (p.chart_point[2].abs() - r).abs() < 1e-8
                    });
                let phi2: f64 = points.iter().map(|p| p.local_areas[2]).sum();
                let ok = at_poles && (phi2 - radius_law(r)).abs() <= t.radius_law_abs;
                passed &= ok;
                rows.push(json!({
                    "radius": r,
                    "points": points.len(),
                    "at_poles": at_poles,
                    "phi2": phi2,
                    "printed_law": radius_law(r),
                    "difference": phi2 - radius_law(r),
                    "unit_scale_law": 8.0 / (1.0 + 1.0 / (r * r)),
                    "passed": ok,
                }));
            }
            Err(e) => return CheckRecord::errored(CRITERIA[2], CheckKind::Exact, PROVENANCE, &e),
        }
    }
    CheckRecord::new(CRITERIA[2], CheckKind::Exact, PROVENANCE)
        .expected("two polar points, phi_2 = 8 / (1 + R^-2 / 4)")
        .observed(rows)
        .tolerance(t.radius_law_abs)
        .passed(passed)
}

fn random_symmetric<R: Rng + ?Sized>(size: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(size, size, |_, _| rng.sample::<f64, _>(StandardNormal));
    (&g + g.transpose()) * 0.5
}

/// `[[I, 0], [0, 0]] + J S`, the linearized characteristic field of a graph
/// with Hessian `S` at a contact point in the Darboux chart.
fn darboux_linearization(s: &DMatrix<f64>) -> DMatrix<f64> {
    let size = s.nrows();
    let mut db = standard_j(size / 2) * s;
    for i in 0..size / 2 {
        db[(i, i)] += 1.0;
    }
    db
}

#[derive(Serialize, Default)]
struct EquivalenceTally {
    cases: usize,
    even_comparisons: usize,
    odd_comparisons: usize,
    worst_even: f64,
    worst_odd: f64,
    worst_odd_reference_normalization: f64,
}

/// Criterion 4: dynamical against geometric local areas on random
/// Hessians, and the odd-degree relation.
pub fn local_area_equivalence(seed: u64, t: &Thresholds) -> CheckRecord {
    const PROVENANCE: &str = "local contact areas from the characteristic field and from second fundamental forms";
    let mut rng = stream_rng(seed, STREAM_HESSIANS);
    let mut tally = EquivalenceTally::default();
    let run = |rng: &mut rand_chacha::ChaCha8Rng, tally: &mut EquivalenceTally| -> Result<()> {
        while tally.cases < RANDOM_CASES {
            let n = 1 + tally.cases % 3;
            let size = 2 * n;
            let s = random_symmetric(size, rng);
            let db = darboux_linearization(&s);
            if db.determinant().abs() < 1e-3 {
                continue;
            }
            tally.cases += 1;
            let pair = SecondFundamentalPair::new(SymMatrix::new(s.clone())?, SecondFundamentalPair::contact_form(n))?;
            for k in 0..=size {
                let dynamical = local_area_dynamical(&db, k)?;
                let geometric = local_area_geometric(&pair, k)?;
                if k % 2 == 0 {
                    tally.even_comparisons += 1;
                    tally.worst_even = tally.worst_even.max(relative_gap(dynamical, geometric));
                } else {
                    tally.odd_comparisons += 1;
                    let related = odd_area_relation(&pair, k)?;
                    tally.worst_odd = tally.worst_odd.max(relative_gap(dynamical, related));
                    // Pair whose antisymmetric part is -J.
                    let h = random_symmetric(size, rng) - standard_j(n);
                    let other = SecondFundamentalPair::new(SymMatrix::new(random_symmetric(size, rng))?, h)?;
                    let a = local_area_geometric(&other, k)?;
                    let b = odd_area_relation(&other, k)?;
                    tally.worst_odd_reference_normalization = tally.worst_odd_reference_normalization.max(relative_gap(a, b));
                }
            }
        }
        Ok(())
    };
    if let Err(e) = run(&mut rng, &mut tally) {
        return CheckRecord::errored(CRITERIA[3], CheckKind::Exact, PROVENANCE, &e);
    }
    let passed = tally.worst_even <= t.local_area_rel
        && tally.worst_odd <= t.local_area_rel
        && tally.worst_odd_reference_normalization <= t.local_area_rel;
    CheckRecord::new(CRITERIA[3], CheckKind::Exact, PROVENANCE)
        .expected("relative agreement on 1000 random nonsingular Hessians, n <= 3")
        .observed(tally)
        .tolerance(t.local_area_rel)
        .passed(passed)
}

/// Criterion 5: index sums over closed surfaces.
pub fn euler_index_sum() -> CheckRecord {
    const PROVENANCE: &str = "contact indices of a closed surface sum to its Euler characteristic";
    let cases: [(&str, ContactChart, i64); 6] = [
        ("sphere 1.5", ContactChart::Darboux, 2),
        ("sphere 1.5", ContactChart::Symmetric { scale: 1.0 }, 2),
        ("sphere 0.8 at 0.3 -0.2 0.4", ContactChart::Symmetric { scale: 2.0 }, 2),
        ("ellipsoid 1 2 0.7 at 0.3 -0.2 0.1", ContactChart::Darboux, 2),
        ("ellipsoid 1.2 0.6 0.9", ContactChart::Symmetric { scale: 1.0 }, 2),
        ("torus 2 0.5 at 0.7 0 0", ContactChart::Darboux, 0),
    ];
    let mut rows = Vec::new();
    let mut passed = true;
    for (spec, chart, expected) in cases {
        let outcome = spec
            .parse::<SurfaceSpec>()
            .and_then(|s| s.build(chart))
            .and_then(|s| s.contact_points(SearchOptions::for_dimension(1)));
        match outcome {
            Ok(points) => {
                let sum: i64 = points.iter().map(|p| i64::from(p.index)).sum();
                passed &= sum == expected;
                rows.push(json!({ "surface": spec, "chart": chart, "points": points.len(), "index_sum": sum, "expected": expected }));
            }
            Err(e) => return CheckRecord::errored(CRITERIA[4], CheckKind::Geometric, PROVENANCE, &e),
        }
    }
    CheckRecord::new(CRITERIA[4], CheckKind::Geometric, PROVENANCE)
        .expected("sphere and ellipsoid 2, torus 0")
        .observed(rows)
        .passed(passed)
}

/// Criterion 6: `Pf^2 = det` and canonical form reconstruction.
pub fn pfaffian_canonical_form(seed: u64, t: &Thresholds) -> CheckRecord {
    let mut rng = stream_rng(seed, STREAM_SKEW);
    let mut worst_pfaffian = 0.0f64;
    let mut worst_reconstruction = 0.0f64;
    let mut failures = 0usize;
    for case in 0..RANDOM_CASES {
        let size = 2 * (1 + case % 4);
        let g = DMatrix::from_fn(size, size, |_, _| rng.sample::<f64, _>(StandardNormal));
        let a = SkewMatrix::skew_part(&g).expect("square");
        let pf = pfaffian(&a);
        let det = a.as_matrix().determinant();
        let e1 = relative_gap(pf * pf, det);
        let e2 = (skew_canonical(&a).reconstruct() - a.as_matrix()).amax();
        worst_pfaffian = worst_pfaffian.max(e1);
        worst_reconstruction = worst_reconstruction.max(e2);
        if e1 > t.pfaffian_rel || e2 > t.reconstruction_abs {
            failures += 1;
        }
    }
    CheckRecord::new(CRITERIA[5], CheckKind::Exact, "Pfaffian and canonical form of skew-symmetric matrices")
        .expected(json!({ "pf_squared_vs_det_rel": t.pfaffian_rel, "reconstruction_abs": t.reconstruction_abs, "cases": RANDOM_CASES }))
        .observed(json!({ "worst_pf_squared_vs_det": worst_pfaffian, "worst_reconstruction": worst_reconstruction, "failures": failures }))
        .passed(failures == 0)
}

/// Criterion 7: sorted Kähler cosines against the uniform simplex.
pub fn uniform_simplex(seed: u64, t: &Thresholds) -> CheckRecord {
    const PROVENANCE: &str = "multi-Kähler angle cosines of a Haar-random plane are uniform on the simplex";
    let mut reports = Vec::new();
    let mut passed = true;
    for (i, (n, k)) in SIMPLEX_PAIRS.into_iter().enumerate() {
        match test_uniform_simplex(n, k, SIMPLEX_SAMPLES, seed.wrapping_add(i as u64)) {
            Ok(r) => {
                let ok = r.skipped
                    || (r.marginals.iter().all(|m| m.p_value > t.ks_p_min)
                        && r.product_moment.as_ref().is_some_and(|m| m.sigmas <= t.mc_sigmas));
                passed &= ok;
                reports.push(json!({ "n": n, "k": k, "passed": ok, "report": r }));
            }
            Err(e) => return CheckRecord::errored(CRITERIA[6], CheckKind::Statistical, PROVENANCE, &e),
        }
    }
    CheckRecord::new(CRITERIA[6], CheckKind::Statistical, PROVENANCE)
        .expected(json!({ "ks_p_value_above": t.ks_p_min, "product_moment_within_se": t.mc_sigmas, "samples": SIMPLEX_SAMPLES }))
        .observed(reports)
        .passed(passed)
}

/// Criterion 8: which normalization of `E |sigma_omega|^s` the data support.
pub fn moment_normalization(seed: u64, t: &Thresholds) -> CheckRecord {
    const PROVENANCE: &str = "moments of |sigma_omega| over the Grassmannian";
    let (n, k) = (4, 2);
    let mut rows = Vec::new();
    let mut passed = true;
    for (i, s) in [0.0, 1.0, 2.0].into_iter().enumerate() {
        let estimate = match moment_integral(n, k, s, MOMENT_SAMPLES, seed.wrapping_add(i as u64)) {
            Ok(e) => e,
            Err(e) => return CheckRecord::errored(CRITERIA[7], CheckKind::Statistical, PROVENANCE, &e),
        };
        if s == 0.0 {
            let ok = (estimate.mean - 1.0).abs() <= t.mc_sigmas * estimate.std_error;
            passed &= ok;
            rows.push(json!({ "s": s, "mass_gate": ok, "estimate": estimate }));
        } else {
            let a = adjudicate_moment(estimate, crate::grassmann_mc::kappa(n, k), s);
            passed &= a.conclusive;
            rows.push(json!({ "s": s, "adjudication": a }));
        }
    }
    CheckRecord::new(CRITERIA[7], CheckKind::Statistical, PROVENANCE)
        .expected("s = 0 gives 1; s = 1, 2 conclusively support one of 1/(kappa! (s+1)^kappa) and (s+1)^-kappa")
        .observed(rows)
        .tolerance(t.mc_sigmas)
        .passed(passed)
}

/// Criterion 9: power law of `A_s`, the continued constant and the ratio
/// law, with the substituted offset sign reported alongside.
pub fn symplectic_crofton(seed: u64, offset_sign: OffsetSign, variant: Normalization, t: &Thresholds) -> CheckRecord {
    const PROVENANCE: &str = "symplectic Crofton formula for affine flats by continuation in the exponent";
    let fit = |sign| crofton_fit(2, 1, &CROFTON_EXPONENTS, CROFTON_SAMPLES, seed, sign, variant);
    let primary = match fit(offset_sign) {
        Ok(f) => f,
        Err(e) => return CheckRecord::errored(CRITERIA[8], CheckKind::Statistical, PROVENANCE, &e),
    };
    let other_sign = match offset_sign {
        OffsetSign::Relative => OffsetSign::Substituted,
        OffsetSign::Substituted => OffsetSign::Relative,
    };
    let secondary = fit(other_sign).ok();
    let exponent_ok = (primary.fitted_exponent - primary.kappa as f64).abs() < t.exponent_abs;
    let verdict_ok = primary.conclusive && primary.fit_residual <= t.fit_residual_rel;
    let ratio_ok = primary
        .ratio_law
        .is_some_and(|r| (r.ratio - r.expected).abs() <= t.mc_sigmas * r.std_error);
    CheckRecord::new(CRITERIA[8], CheckKind::Statistical, PROVENANCE)
        .expected(json!({
            "exponent": primary.kappa,
            "exponent_abs": t.exponent_abs,
            "verdict": "conclusive between (2n-1)^kappa and (2n)^kappa",
            "ratio_law": 3f64.powi(primary.kappa as i32),
        }))
        .observed(json!({
            "fitted_exponent": primary.fitted_exponent,
            "fit_residual": primary.fit_residual,
            "supported": primary.supported,
            "nearer": primary.nearer,
            "conclusive": primary.conclusive,
            "ratio_law": primary.ratio_law,
            "exponent_passed": exponent_ok,
        }))
        .detail(json!({ "fit": primary, "other_offset_sign": secondary }))
        .passed(exponent_ok && verdict_ok && ratio_ok)
}

/// Criterion 10: quadrature against the Beta form, and the singular constant.
pub fn gauss_crofton(t: &Thresholds) -> CheckRecord {
    const PROVENANCE: &str = "Crofton integral of Gaussian curvature via the Beta function";
    let mut worst = 0.0f64;
    let mut rows = Vec::new();
    for m in 1..=6 {
        for s in GAUSS_EXPONENTS {
            match gauss_crofton_integral(m, s) {
                Ok(g) => worst = worst.max(g.relative_residual.unwrap_or(f64::INFINITY)),
                Err(e) => return CheckRecord::errored(CRITERIA[9], CheckKind::Exact, PROVENANCE, &e),
            }
        }
    }
    let mut constants_ok = true;
    for n in 1..=2 {
        match singular_constant(n) {
            Ok(c) => {
                let ok = relative_gap(c.continued, c.printed) <= GAMMA_REL && relative_gap(c.continued, c.reflected) <= GAMMA_REL;
                constants_ok &= ok;
                rows.push(json!({ "constant": c, "passed": ok }));
            }
            Err(e) => return CheckRecord::errored(CRITERIA[9], CheckKind::Exact, PROVENANCE, &e),
        }
    }
    CheckRecord::new(CRITERIA[9], CheckKind::Exact, PROVENANCE)
        .expected(json!({ "quadrature_rel": t.quadrature_rel, "singular_constant_rel": GAMMA_REL }))
        .observed(json!({ "worst_quadrature_residual": worst, "singular_constants": rows }))
        .tolerance(t.quadrature_rel)
        .passed(worst < t.quadrature_rel && constants_ok)
}

/// Criterion 11: the convexity inequality on Wishart samples and equality at zero.
pub fn convexity_inequality(seed: u64, t: &Thresholds) -> CheckRecord {
    const PROVENANCE: &str = "matrix inequality behind the convexity of contact sphere valuations";
    let mut rng = stream_rng(seed, STREAM_WISHART);
    let mut worst = f64::INFINITY;
    let mut worst_below_top = f64::INFINITY;
    let mut equality = 0.0f64;
    let run = |rng: &mut rand_chacha::ChaCha8Rng, worst: &mut f64, worst_below_top: &mut f64, equality: &mut f64| -> Result<()> {
        for n in 1..=3 {
            let size = 2 * n;
            for m in (0..=size).step_by(2) {
                *equality = equality.max(convexity_gap(&SymMatrix::new(DMatrix::zeros(size, size))?, m)?.abs());
            }
            for _ in 0..WISHART_SAMPLES {
                let g = DMatrix::from_fn(size, size, |_, _| rng.sample::<f64, _>(StandardNormal));
                let s = SymMatrix::symmetric_part(&(&g * g.transpose() / size as f64));
                for m in (0..=size).step_by(2) {
                    let gap = convexity_gap(&s, m)?;
                    *worst = worst.min(gap);
                    if m < size {
                        *worst_below_top = worst_below_top.min(gap);
                    }
                }
            }
        }
        Ok(())
    };
    if let Err(e) = run(&mut rng, &mut worst, &mut worst_below_top, &mut equality) {
        return CheckRecord::errored(CRITERIA[10], CheckKind::Exact, PROVENANCE, &e);
    }
    CheckRecord::new(CRITERIA[10], CheckKind::Exact, PROVENANCE)
        .expected(json!({ "gap_at_least": t.convexity_gap, "gap_at_zero": 0.0 }))
        .observed(json!({ "smallest_gap": worst, "smallest_gap_below_top_degree": worst_below_top, "largest_gap_at_zero": equality }))
        .tolerance(t.convexity_gap)
        .passed(worst >= t.convexity_gap && equality == 0.0)
}

/// Criteria 1 to 11 with their wall times.
fn primary_records(config: &ExperimentConfig, t: &Thresholds) -> (Vec<CheckRecord>, Vec<(String, f64)>) {
    let seed = config.seed;
    let mut records = Vec::with_capacity(11);
    let mut times = Vec::with_capacity(12);
    let mut timed = |name: &str, f: &mut dyn FnMut() -> CheckRecord, records: &mut Vec<CheckRecord>| {
        let start = Instant::now();
        records.push(f());
        times.push((name.to_owned(), elapsed(start)));
    };
    let (tables, table_seconds) = sphere_tables(t);
    records.push(tables);
    timed(CRITERIA[1], &mut euler_closed_form, &mut records);
    timed(CRITERIA[2], &mut || sphere_radius_law(t), &mut records);
    timed(CRITERIA[3], &mut || local_area_equivalence(seed, t), &mut records);
    timed(CRITERIA[4], &mut euler_index_sum, &mut records);
    timed(CRITERIA[5], &mut || pfaffian_canonical_form(seed, t), &mut records);
    timed(CRITERIA[6], &mut || uniform_simplex(seed, t), &mut records);
    timed(CRITERIA[7], &mut || moment_normalization(seed, t), &mut records);
    timed(CRITERIA[8], &mut || symplectic_crofton(seed, config.offset_sign, config.variant, t), &mut records);
    timed(CRITERIA[9], &mut || gauss_crofton(t), &mut records);
    timed(CRITERIA[10], &mut || convexity_inequality(seed, t), &mut records);
    times.insert(0, (CRITERIA[0].to_owned(), table_seconds));
    (records, times)
}

fn body_hash(config: &ExperimentConfig, records: &[CheckRecord]) -> String {
    let mut doc = ReportDocument::new("check-all", config);
    for r in records {
        doc.push(r.clone());
    }
    doc.body_hash()
}

/// The full acceptance run behind `cval check-all`.
///
/// Criteria 1 to 11 are computed twice with the same configuration; the
/// determinism record compares the two report bodies and checks the first
/// pass against the wall-clock budget.
pub fn check_all(config: &ExperimentConfig) -> Result<ReportDocument> {
    let t = config.thresholds()?;
    let start = Instant::now();
    let (records, times) = primary_records(config, &t);
    let first_pass = elapsed(start);
    let (rerun, _) = primary_records(config, &t);
    let (first_hash, second_hash) = (body_hash(config, &records), body_hash(config, &rerun));
    let mut doc = ReportDocument::new("check-all", config);
    for r in records {
        doc.push(r);
    }
    let deterministic = first_hash == second_hash;
    let within_budget = first_pass < t.check_all_seconds;
    doc.push(
        CheckRecord::new(CRITERIA[11], CheckKind::Statistical, "reproducibility of the full verification run")
            .expected(json!({ "identical_rerun": true, "under_seconds": t.check_all_seconds }))
            .observed(json!({ "identical_rerun": deterministic, "body_hash": first_hash, "within_time_budget": within_budget }))
            .passed(deterministic && within_budget),
    );
    doc.timing = times.into_iter().collect();
    doc.timing.insert("first_pass".into(), first_pass);
    doc.timing.insert("total".into(), elapsed(start));
    Ok(doc)
}

/// `cval tables`: exact tables for one `n` with their consistency checks.
pub fn tables_report(n: usize, variant: Normalization) -> Result<ReportDocument> {
    let start = Instant::now();
    let mut doc = ReportDocument::new("tables", json!({ "n": n, "variant": variant }));
    let solved = crofton_coefficients_by_solve(n, variant);
    let closed = crofton_coefficients_closed_form(n, variant);
    doc.push(
        CheckRecord::new("euler_closed_form", CheckKind::Exact, "Crofton coefficients in terms of Euler secant numbers")
            .expected("triangular solve equals closed form")
            .observed(solved == closed)
            .passed(solved == closed),
    );
    match SphereTables::build(n, variant) {
        Ok(tables) => {
            doc.push(
                CheckRecord::new("relation", CheckKind::Exact, "Crofton change of basis on the contact sphere")
                    .expected("psi = c phi")
                    .observed(tables.relation_holds)
                    .passed(tables.relation_holds),
            );
            doc.output = serde_json::to_value(tables).unwrap_or_default();
        }
        Err(e) => doc.push(CheckRecord::errored("relation", CheckKind::Exact, "Crofton change of basis", &e)),
    }
    doc.timing.insert("total".into(), elapsed(start));
    Ok(doc)
}

/// `cval contact-points`: contact points of a described surface, their
/// local areas and the valuation sums of the requested degrees.
pub fn contact_points_report(
    description: &str,
    spec: &SurfaceSpec,
    surface: &Surface,
    options: SearchOptions,
    degrees: &[usize],
) -> ReportDocument {
    let start = Instant::now();
    let mut doc = ReportDocument::new("contact-points", json!({ "surface": description, "spec": spec, "options": options }));
    const PROVENANCE: &str = "contact valuations as sums of local areas over contact points";
    let points = match surface.contact_points(options) {
        Ok(p) => p,
        Err(e) => {
            doc.push(CheckRecord::errored("contact_point_search", CheckKind::Geometric, PROVENANCE, &e));
            if let Error::DegenerateTangency { point, det } = &e {
                doc.output = json!({ "degenerate_point": point, "det_db": det });
            }
            return doc;
        }
    };
    let size = 2 * surface.n();
    let mut sums = serde_json::Map::new();
    for &k in degrees {
        if k <= size {
            let total: f64 = points.iter().map(|p| p.local_areas[k]).sum();
            sums.insert(format!("phi_{k}"), json!(total));
        }
    }
    let index_sum: i64 = points.iter().map(|p| i64::from(p.index)).sum();
    doc.push(
        CheckRecord::new("contact_point_search", CheckKind::Geometric, PROVENANCE)
            .expected("nondegenerate contact points")
            .observed(json!({ "points": points.len(), "index_sum": index_sum }))
            .passed(true),
    );
    let euler = match spec {
        SurfaceSpec::Sphere { .. } | SurfaceSpec::Ellipsoid { .. } => Some(2),
        SurfaceSpec::Torus { .. } => Some(0),
        _ => None,
    };
    if let Some(chi) = euler {
        doc.push(
            CheckRecord::new("euler_index_sum", CheckKind::Geometric, "contact indices sum to the Euler characteristic")
                .expected(chi)
                .observed(index_sum)
                .passed(index_sum == chi),
        );
    }
    if let SurfaceSpec::Sphere { radius, center } = spec {
        if *center == [0.0; 3] && degrees.contains(&2) {
            let phi2: f64 = points.iter().map(|p| p.local_areas[2]).sum();
            doc.push(
                CheckRecord::new("sphere_radius_law", CheckKind::Exact, "degree-two valuation of the round sphere")
                    .expected(radius_law(*radius))
                    .observed(phi2)
                    .tolerance(crate::tolerances::RADIUS_LAW_ABS)
                    .passed((phi2 - radius_law(*radius)).abs() <= crate::tolerances::RADIUS_LAW_ABS),
            );
        }
    }
    doc.output = json!({ "points": points, "valuations": sums });
    doc.timing.insert("total".into(), elapsed(start));
    doc
}

/// `cval mc`: the sampling experiments at the configured `(n, k)`.
pub fn mc_report(config: &ExperimentConfig) -> Result<ReportDocument> {
    let t = config.thresholds()?;
    let start = Instant::now();
    let mut doc = ReportDocument::new("mc", config);
    let (n, k, seed) = (config.n, config.k, config.seed);

    match test_uniform_simplex(n, k, config.samples, seed) {
        Ok(r) => {
            let ok = r.skipped
                || (r.marginals.iter().all(|m| m.p_value > t.ks_p_min)
                    && r.product_moment.as_ref().is_some_and(|m| m.sigmas <= t.mc_sigmas));
            doc.push(
                CheckRecord::new("uniform_simplex", CheckKind::Statistical, "Kähler angle cosines are uniform on the simplex")
                    .expected(json!({ "ks_p_value_above": t.ks_p_min }))
                    .observed(r)
                    .passed(ok),
            );
        }
        Err(e) => doc.push(CheckRecord::errored("uniform_simplex", CheckKind::Statistical, "", &e)),
    }

    for (i, &s) in config.s_values.iter().enumerate() {
        let name = format!("moment_s{s}");
        match moment_integral(n, k, s, config.samples, seed.wrapping_add(1 + i as u64)) {
            Ok(estimate) if s == 0.0 => doc.push(
                CheckRecord::new(&name, CheckKind::Statistical, "total mass of the Grassmannian")
                    .expected(1.0)
                    .observed(estimate)
                    .tolerance(t.mc_sigmas)
                    .passed((estimate.mean - 1.0).abs() <= t.mc_sigmas * estimate.std_error),
            ),
            Ok(estimate) => {
                let a = adjudicate_moment(estimate, crate::grassmann_mc::kappa(n, k), s);
                let chosen = if config.variant == Normalization::Factorial { a.factorial_value } else { a.mass_value };
                let ok = (estimate.mean - chosen).abs() <= t.mc_sigmas * estimate.std_error;
                doc.push(
                    CheckRecord::new(&name, CheckKind::Statistical, "moments of |sigma_omega| over the Grassmannian")
                        .expected(chosen)
                        .observed(estimate)
                        .tolerance(t.mc_sigmas)
                        .detail(a)
                        .passed(ok),
                );
            }
            Err(e) => doc.push(CheckRecord::errored(&name, CheckKind::Statistical, "", &e)),
        }
    }

    let s_values: Vec<f64> = config.s_values.iter().copied().filter(|&s| s >= 0.0).collect();
    if s_values.len() >= 2 && k <= n {
        match crofton_fit(n, k, &s_values, config.samples, seed, config.offset_sign, config.variant) {
            Ok(fit) => {
                let ratio_ok = fit.ratio_law.is_none_or(|r| (r.ratio - r.expected).abs() <= t.mc_sigmas * r.std_error);
                let exponent_ok = (fit.fitted_exponent - fit.kappa as f64).abs() < t.exponent_abs;
                doc.push(
                    CheckRecord::new("symplectic_crofton", CheckKind::Statistical, "symplectic Crofton formula for affine flats")
                        .expected(json!({ "exponent": fit.kappa, "ratio_law": 3f64.powi(fit.kappa as i32) }))
                        .observed(json!({ "fitted_exponent": fit.fitted_exponent, "ratio_law": fit.ratio_law, "nearer": fit.nearer, "conclusive": fit.conclusive }))
                        .detail(&fit)
                        .passed(exponent_ok && ratio_ok),
                );
            }
            Err(e) => doc.push(CheckRecord::errored("symplectic_crofton", CheckKind::Statistical, "", &e)),
        }
    }
    doc.timing.insert("total".into(), elapsed(start));
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_criteria_pass() {
        let t = Thresholds::default();
        assert!(sphere_tables(&t).0.passed);
        assert!(euler_closed_form().passed);
        assert!(gauss_crofton(&t).passed);
    }

    #[test]
    fn darboux_linearization_matches_pair() {
        let s = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        let db = darboux_linearization(&s);
        assert_eq!(db, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, 1.0, 0.0]));
    }

    #[test]
    fn records_use_criterion_names() {
        let t = Thresholds::default();
        assert_eq!(sphere_tables(&t).0.name, CRITERIA[0]);
        assert_eq!(gauss_crofton(&t).name, CRITERIA[9]);
    }
}
