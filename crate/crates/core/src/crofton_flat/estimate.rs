use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::flat::transversal_frame;
use crate::grassmann_mc::{
    kappa, moment_closed_form, pairwise_reduce, run_batches, sample_subspace, sigma_omega, McEstimate, Normalization,
    RunningMoments,
};
use crate::matnum::{ball_volume, binomial, factorial};
use crate::tolerances::{EXPONENT_ABS, FIT_RESIDUAL_REL, MC_SIGMAS};
use crate::{Error, Result};

const MIN_SAMPLES: usize = 10_000;

/// Sign attached to the offset integral of the intersection index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OffsetSign {
    /// Relative orientation of `E` and `W`, i.e. the sign the index carries.
    #[default]
    Relative,
    /// `sign sigma_omega(E)`, which cancels the sign in the weight.
    Substituted,
}

/// Kubota constant `C(2n, 2k) / C(n, k)`.
pub fn kubota_constant(n: usize, k: usize) -> BigRational {
    BigRational::new(binomial(2 * n as u64, 2 * k as u64), binomial(n as u64, k as u64))
}

/// Closed form `2 c0 pi^k / k! * m(s)` with `m` the angle moment under `norm`.
pub fn a_s_closed_form(n: usize, k: usize, s: f64, norm: Normalization) -> f64 {
    let c0 = kubota_constant(n, k).to_f64().unwrap_or(f64::NAN);
    2.0 * c0 * ball_volume(2 * k) * moment_closed_form(kappa(n, k), s, norm)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsEstimate {
    pub n: usize,
    pub k: usize,
    pub kappa: usize,
    pub s: f64,
    pub offset_sign: OffsetSign,
    pub estimate: McEstimate,
    /// Pairs discarded for failing the transversality margin.
    pub rejected: u64,
    pub rejected_fraction: f64,
    pub closed_form: f64,
    pub closed_form_factorial: f64,
}

/// Monte Carlo estimate of the averaged Crofton integral of unit disks in
/// random `omega`-positive `2k`-planes against the weight
/// `sign sigma_omega(E) |sigma_omega(E)|^s`, with offsets integrated exactly.
pub fn a_s_estimate(n: usize, k: usize, s: f64, samples: usize, seed: u64, offset_sign: OffsetSign) -> Result<AsEstimate> {
    if k == 0 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    if !(s >= 0.0) {
        return Err(Error::Domain(format!("exponent s = {s} must be nonnegative")));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::Domain(format!("{samples} samples, at least {MIN_SAMPLES} required")));
    }
    let disk = ball_volume(2 * k);
    let batches = run_batches(seed, samples, |rng, count| {
        let mut acc = RunningMoments::default();
        let mut rejected = 0u64;
        while acc.count() < count as u64 {
            let mut w = sample_subspace(n, k, rng);
            let sigma_w = sigma_omega(&w).expect("even dimensions");
            if sigma_w == 0.0 {
                rejected += 1;
                continue;
            }
            if sigma_w < 0.0 {
                w = w.reversed();
            }
            let e = sample_subspace(n, n - k, rng);
            let frame = match transversal_frame(&e, &w) {
                Ok(f) => f,
                Err(_) => {
                    rejected += 1;
                    continue;
                }
            };
            let sigma_e = sigma_omega(&e).expect("even dimensions");
            let det = frame.determinant();
            let value = match offset_sign {
                OffsetSign::Relative => sigma_e.signum() * sigma_e.abs().powf(s) * det * disk,
                OffsetSign::Substituted => sigma_e.abs().powf(s) * det.abs() * disk,
            };
            acc.push(value);
        }
        (acc, rejected)
    });
    let (total, rejected) =
        pairwise_reduce(batches, |a, b| (RunningMoments::merge(a.0, b.0), a.1 + b.1)).unwrap_or_default();
    Ok(AsEstimate {
        n,
        k,
        kappa: kappa(n, k),
        s,
        offset_sign,
        estimate: McEstimate::from_moments(&total, seed),
        rejected,
        rejected_fraction: rejected as f64 / (rejected + total.count()) as f64,
        closed_form: a_s_closed_form(n, k, s, Normalization::Mass),
        closed_form_factorial: a_s_closed_form(n, k, s, Normalization::Factorial),
    })
}

/// `E[prod lambda^(t-1)]` at integer `t = s + 1` under `norm`, exactly.
fn moment_at(kappa: usize, t: i64, norm: Normalization) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(t)).pow(-(kappa as i32));
    match norm {
        Normalization::Mass => base,
        Normalization::Factorial => base / BigRational::from_integer(factorial(kappa as u64)),
    }
}

/// Inverse Crofton constant obtained by continuing the angle moment to
/// `s + 1 = -point` and dividing by the first moment.
fn inverse_constant(n: usize, k: usize, point: i64, norm: Normalization) -> BigRational {
    let kap = kappa(n, k);
    let two = BigRational::from_integer(BigInt::from(2));
    moment_at(kap, 2, norm) / (two * kubota_constant(n, k) * moment_at(kap, -point, norm))
}

/// Printed candidates for the inverse symplectic Crofton constant `C^-1`,
/// for `int_F omega^k = C^-1 * int I(E, F) dmu(E)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CroftonConstants {
    pub n: usize,
    pub k: usize,
    pub kappa: usize,
    pub normalization: Normalization,
    /// `(-1)^kappa (2n)^kappa / (2^(kappa+1) c0)`.
    pub derived_inverse: String,
    /// `(-1)^kappa (2n-1)^kappa / (2^(kappa+1) c0)`.
    pub stated_inverse: String,
    pub derived_value: f64,
    pub stated_value: f64,
    pub kubota: String,
}

pub fn symplectic_crofton_constant(n: usize, k: usize, normalization: Normalization) -> Result<CroftonConstants> {
    if k == 0 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    let derived = inverse_constant(n, k, 2 * n as i64, normalization);
    let stated = inverse_constant(n, k, 2 * n as i64 - 1, normalization);
    Ok(CroftonConstants {
        n,
        k,
        kappa: kappa(n, k),
        normalization,
        derived_value: derived.to_f64().unwrap_or(f64::NAN),
        stated_value: stated.to_f64().unwrap_or(f64::NAN),
        derived_inverse: derived.to_string(),
        stated_inverse: stated.to_string(),
        kubota: kubota_constant(n, k).to_string(),
    })
}

/// `(-1)^kappa / 2 * C(n,k) / C(2n,2k) * n^kappa`, the simplified form of the
/// derived constant.
pub fn simplified_derived_inverse(n: usize, k: usize) -> BigRational {
    let kap = kappa(n, k);
    let sign = if kap % 2 == 0 { BigRational::one() } else { -BigRational::one() };
    sign * BigRational::new(binomial(n as u64, k as u64), binomial(2 * n as u64, 2 * k as u64) * BigInt::from(2))
        * BigRational::from_integer(BigInt::from(n).pow(kap as u32))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantVariant {
    /// `(2n)^kappa`, equivalently `n^kappa` after simplification.
    Derived,
    /// `(2n-1)^kappa`.
    Stated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioLaw {
    pub ratio: f64,
    pub std_error: f64,
    pub expected: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CroftonFit {
    pub n: usize,
    pub k: usize,
    pub kappa: usize,
    pub offset_sign: OffsetSign,
    pub estimates: Vec<AsEstimate>,
    /// Free log-log slope of `|A_s|` against `s + 1`, negated.
    pub fitted_exponent: f64,
    pub exponent_passed: bool,
    /// Amplitude `a` of `a (s+1)^-kappa` with `kappa` fixed, under the
    /// probability measures the sampler draws from.
    pub amplitude: f64,
    /// Factor `2 c0^2` converting probability-measure averages to the
    /// measure normalized by the Kubota identity `int vol(Pr B) = c0 vol(B)`
    /// on oriented planes.
    pub measure_scale: f64,
    /// Largest relative deviation of the estimates from the fixed-exponent law.
    pub fit_residual: f64,
    /// `C^-1` from continuing the fitted law to `s + 1 = -2n`.
    pub extrapolated_inverse: f64,
    pub constants: CroftonConstants,
    pub supported: Option<ConstantVariant>,
    pub nearer: ConstantVariant,
    pub conclusive: bool,
    /// Shift `delta` of the best law `a (s + 1 + delta)^-kappa`.
    pub shift: f64,
    pub shift_residual: f64,
    /// `C^-1` from continuing the shifted law to `s = -2n - 1`.
    pub shifted_extrapolated_inverse: f64,
    /// Variant whose continuation point the shifted law reproduces.
    pub shift_nearer: ConstantVariant,
    pub ratio_law: Option<RatioLaw>,
}

fn fixed_exponent_fit(points: &[(f64, f64)], kap: f64, delta: f64) -> (f64, f64) {
    let log_a = points.iter().map(|&(s, v)| v.abs().ln() + kap * (s + 1.0 + delta).ln()).sum::<f64>() / points.len() as f64;
    let a = log_a.exp();
    let residual = points
        .iter()
        .map(|&(s, v)| ((a * (s + 1.0 + delta).powf(-kap) - v.abs()) / v.abs()).abs())
        .fold(0.0, f64::max);
    (a, residual)
}

fn log_slope(points: &[(f64, f64)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|p| (p.0 + 1.0).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.abs().ln()).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Estimates `A_s` at each exponent, fits the power law, continues it to the
/// singular exponent and compares with both printed constants.
pub fn crofton_fit(
    n: usize,
    k: usize,
    s_values: &[f64],
    samples: usize,
    seed: u64,
    offset_sign: OffsetSign,
    normalization: Normalization,
) -> Result<CroftonFit> {
    if s_values.len() < 2 {
        return Err(Error::Domain("the fit needs at least two exponents".into()));
    }
    let estimates = s_values
        .iter()
        .enumerate()
        .map(|(i, &s)| a_s_estimate(n, k, s, samples, seed.wrapping_add(i as u64), offset_sign))
        .collect::<Result<Vec<_>>>()?;
    let kap = kappa(n, k);
    let constants = symplectic_crofton_constant(n, k, normalization)?;
    let points: Vec<(f64, f64)> = estimates.iter().map(|e| (e.s, e.estimate.mean)).collect();
    let sign = points[0].1.signum();
    let one_sign = points.iter().all(|p| p.1 != 0.0 && p.1.signum() == sign);

    let fitted_exponent = if one_sign { -log_slope(&points) } else { f64::NAN };
    let (amplitude, fit_residual) = fixed_exponent_fit(&points, kap as f64, 0.0);
    let amplitude = sign * amplitude;
    let c0 = kubota_constant(n, k).to_f64().unwrap_or(f64::NAN);
    let measure_scale = 2.0 * c0 * c0;
    let first_moment = ball_volume(2 * k) / 2f64.powi(kap as i32);
    let extrapolated_inverse = first_moment * (-2.0 * n as f64).powi(kap as i32) / (measure_scale * amplitude);

    let candidates = [(ConstantVariant::Derived, constants.derived_value), (ConstantVariant::Stated, constants.stated_value)];
    let log_distance = |v: f64| {
        if v.signum() == extrapolated_inverse.signum() {
            (extrapolated_inverse.abs().ln() - v.abs().ln()).abs()
        } else {
            f64::INFINITY
        }
    };
    let nearer = if log_distance(candidates[0].1) <= log_distance(candidates[1].1) { candidates[0].0 } else { candidates[1].0 };
    let gap = (candidates[0].1.abs().ln() - candidates[1].1.abs().ln()).abs();
    let fit_ok = one_sign && fit_residual <= FIT_RESIDUAL_REL;
    let supported = candidates
        .iter()
        .find(|(_, v)| fit_ok && gap > 0.0 && log_distance(*v) < gap / 2.0)
        .map(|c| c.0);
    let conclusive = supported.is_some() && (kap > 0 || gap > 0.0);

    let (shift, shift_residual) = best_shift(&points, kap as f64);
    let shift_nearer = if shift < 0.5 { ConstantVariant::Derived } else { ConstantVariant::Stated };
    let shifted_amplitude = sign * fixed_exponent_fit(&points, kap as f64, shift).0;
    let shifted_extrapolated_inverse =
        first_moment * (-2.0 * n as f64 + shift).powi(kap as i32) / (measure_scale * shifted_amplitude);

    let ratio_law = match (points.iter().position(|p| p.0 == 0.0), points.iter().position(|p| p.0 == 2.0)) {
        (Some(i0), Some(i2)) => {
            let (a0, a2) = (&estimates[i0].estimate, &estimates[i2].estimate);
            let ratio = a0.mean / a2.mean;
            let std_error = ratio.abs() * ((a0.std_error / a0.mean).powi(2) + (a2.std_error / a2.mean).powi(2)).sqrt();
            let expected = 3f64.powi(kap as i32);
            Some(RatioLaw { ratio, std_error, expected, passed: (ratio - expected).abs() <= MC_SIGMAS * std_error })
        }
        _ => None,
    };

    Ok(CroftonFit {
        n,
        k,
        kappa: kap,
        offset_sign,
        fitted_exponent,
        exponent_passed: (fitted_exponent - kap as f64).abs() < EXPONENT_ABS,
        amplitude,
        measure_scale,
        fit_residual,
        extrapolated_inverse,
        constants,
        supported,
        nearer,
        conclusive,
        shift,
        shift_residual,
        shifted_extrapolated_inverse,
        shift_nearer,
        ratio_law,
        estimates,
    })
}

/// Shift minimizing the fixed-exponent residual over a grid refined twice.
fn best_shift(points: &[(f64, f64)], kap: f64) -> (f64, f64) {
    if kap == 0.0 {
        return (0.0, fixed_exponent_fit(points, 0.0, 0.0).1);
    }
    let residual = |d: f64| fixed_exponent_fit(points, kap, d).1;
    let (mut lo, mut hi) = (-0.95, 4.0);
    let mut best = (0.0, f64::INFINITY);
    for _ in 0..3 {
        let step = (hi - lo) / 200.0;
        for i in 0..=200 {
            let d = lo + step * i as f64;
            let r = residual(d);
            if r < best.1 {
                best = (d, r);
            }
        }
        lo = (best.0 - step).max(-0.95);
        hi = best.0 + step;
    }
    best
}

/// Exact rational check that the derived constant equals its simplified form.
pub fn derived_constant_simplifies(n: usize, k: usize) -> bool {
    [Normalization::Mass, Normalization::Factorial]
        .iter()
        .all(|&norm| inverse_constant(n, k, 2 * n as i64, norm) == simplified_derived_inverse(n, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn kubota_values() {
        assert_eq!(kubota_constant(2, 1), q(3, 1));
        assert_eq!(kubota_constant(3, 1), q(5, 1));
        assert_eq!(kubota_constant(1, 1), q(1, 1));
    }

    #[test]
    fn constants_at_two_one() {
        let c = symplectic_crofton_constant(2, 1, Normalization::Mass).unwrap();
        // (-1) * 4 / (4 * 3) and (-1) * 3 / (4 * 3)
        assert_eq!(c.derived_inverse, "-1/3");
        assert_eq!(c.stated_inverse, "-1/4");
        let f = symplectic_crofton_constant(2, 1, Normalization::Factorial).unwrap();
        assert_eq!(f.derived_inverse, c.derived_inverse);
        assert_eq!(f.stated_inverse, c.stated_inverse);
    }

    #[test]
    fn lagrangian_complement_constants_coincide() {
        let c = symplectic_crofton_constant(1, 1, Normalization::Mass).unwrap();
        assert_eq!(c.derived_inverse, "1/2");
        assert_eq!(c.stated_inverse, c.derived_inverse);
    }

    #[test]
    fn simplified_form_agrees() {
        for n in 1..=5 {
            for k in 1..=n {
                assert!(derived_constant_simplifies(n, k), "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn closed_form_instances() {
        assert!((a_s_closed_form(2, 1, 0.0, Normalization::Mass) - 6.0 * PI).abs() < 1e-12);
        assert!((a_s_closed_form(2, 1, 2.0, Normalization::Mass) - 6.0 * PI / 3.0).abs() < 1e-12);
        assert_eq!(a_s_closed_form(2, 2, 0.0, Normalization::Mass), a_s_closed_form(2, 2, 3.0, Normalization::Mass));
    }

    #[test]
    fn top_degree_estimate_is_constant() {
        for s in [0.0, 2.0] {
            let e = a_s_estimate(2, 2, s, 10_000, 1, OffsetSign::Relative).unwrap();
            assert!((e.estimate.mean.abs() - PI * PI / 2.0).abs() < 1e-9);
            assert!(e.estimate.std_error < 1e-12);
        }
    }

    #[test]
    fn fit_recovers_exact_power_law() {
        let points: Vec<(f64, f64)> = [0.0, 1.0, 2.0, 3.0].iter().map(|&s| (s, 5.0 / (s + 1.0))).collect();
        assert!((log_slope(&points) + 1.0).abs() < 1e-12);
        let (a, r) = fixed_exponent_fit(&points, 1.0, 0.0);
        assert!((a - 5.0).abs() < 1e-12 && r < 1e-12);
        let shifted: Vec<(f64, f64)> = [0.0, 1.0, 2.0, 3.0].iter().map(|&s| (s, 5.0 / (s + 2.0))).collect();
        assert!((best_shift(&shifted, 1.0).0 - 1.0).abs() < 1e-3);
    }
}
