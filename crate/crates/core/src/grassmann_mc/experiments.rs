use serde::{Deserialize, Serialize};

use super::{
    kahler_angles, kappa, ks_p_value, ks_statistic, order_statistic_cdf, pairwise_reduce, run_batches,
    sample_subspace, sigma_omega, McEstimate, RunningMoments,
};
use crate::tolerances::{KS_P_MIN, MC_SIGMAS};
use crate::{Error, Result};

const MIN_SAMPLES: usize = 10_000;

/// Which normalization of the angle density a closed form assumes: with the
/// `1/kappa!` factor, or normalized to total mass one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    Factorial,
    Mass,
}

impl Normalization {
    pub fn label(self) -> &'static str {
        match self {
            Normalization::Factorial => "factorial",
            Normalization::Mass => "mass-normalized",
        }
    }
}

/// Candidate value of `E |sigma_omega|^s`: `1 / (kappa! (s+1)^kappa)` or `(s+1)^-kappa`.
pub fn moment_closed_form(kappa: usize, s: f64, norm: Normalization) -> f64 {
    let base = (s + 1.0).powi(-(kappa as i32));
    match norm {
        Normalization::Mass => base,
        Normalization::Factorial => base / (1..=kappa).map(|i| i as f64).product::<f64>(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalKs {
    /// 1 for the largest cosine.
    pub order: usize,
    pub statistic: f64,
    pub p_value: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentCheck {
    pub observed: McEstimate,
    pub exact: f64,
    pub sigmas: f64,
    pub passed: bool,
}

impl MomentCheck {
    fn new(observed: McEstimate, exact: f64) -> Self {
        let sigmas = if observed.std_error > 0.0 {
            (observed.mean - exact).abs() / observed.std_error
        } else if observed.mean == exact {
            0.0
        } else {
            f64::INFINITY
        };
        Self { observed, exact, sigmas, passed: sigmas <= MC_SIGMAS }
    }
}

/// Comparison of sorted Kähler cosines with `kappa` sorted independent
/// uniforms on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformSimplexReport {
    pub n: usize,
    pub k: usize,
    pub kappa: usize,
    pub samples: usize,
    pub seed: u64,
    pub skipped: bool,
    pub marginals: Vec<MarginalKs>,
    /// `E[prod cos]` against `2^-kappa`.
    pub product_moment: Option<MomentCheck>,
    /// `E[(prod cos)^2]` against `3^-kappa`.
    pub square_product_moment: Option<MomentCheck>,
    pub passed: bool,
}

#[derive(Default)]
struct SimplexBatch {
    cosines: Vec<Vec<f64>>,
    product: RunningMoments,
    square: RunningMoments,
}

pub fn test_uniform_simplex(n: usize, k: usize, samples: usize, seed: u64) -> Result<UniformSimplexReport> {
    check_shape(n, k, samples)?;
    let kap = kappa(n, k);
    if kap == 0 {
        return Ok(UniformSimplexReport {
            n,
            k,
            kappa: 0,
            samples,
            seed,
            skipped: true,
            marginals: vec![],
            product_moment: None,
            square_product_moment: None,
            passed: true,
        });
    }
    let batches = run_batches(seed, samples, |rng, count| {
        let mut batch = SimplexBatch { cosines: vec![Vec::with_capacity(count); kap], ..Default::default() };
        for _ in 0..count {
            let angles = kahler_angles(&sample_subspace(n, k, rng)).expect("even dimensions");
            for (slot, &c) in batch.cosines.iter_mut().zip(&angles.cosines) {
                slot.push(c);
            }
            let p = angles.product();
            batch.product.push(p);
            batch.square.push(p * p);
        }
        batch
    });

    let mut columns: Vec<Vec<f64>> = vec![Vec::with_capacity(samples); kap];
    let mut product = Vec::with_capacity(batches.len());
    let mut square = Vec::with_capacity(batches.len());
    for b in batches {
        for (col, part) in columns.iter_mut().zip(b.cosines) {
            col.extend(part);
        }
        product.push(b.product);
        square.push(b.square);
    }
    let marginals: Vec<MarginalKs> = columns
        .iter_mut()
        .enumerate()
        .map(|(i, col)| {
            col.sort_by(f64::total_cmp);
            let order = i + 1;
            let statistic = ks_statistic(col, |x| order_statistic_cdf(kap, order, x));
            let p_value = ks_p_value(statistic, col.len());
            MarginalKs { order, statistic, p_value, passed: p_value > KS_P_MIN }
        })
        .collect();
    let product = McEstimate::from_moments(&pairwise_reduce(product, RunningMoments::merge).unwrap_or_default(), seed);
    let square = McEstimate::from_moments(&pairwise_reduce(square, RunningMoments::merge).unwrap_or_default(), seed);
    let product_moment = MomentCheck::new(product, 0.5f64.powi(kap as i32));
    let square_product_moment = MomentCheck::new(square, (1.0f64 / 3.0).powi(kap as i32));
    let passed = marginals.iter().all(|m| m.passed) && product_moment.passed;
    Ok(UniformSimplexReport {
        n,
        k,
        kappa: kap,
        samples,
        seed,
        skipped: false,
        marginals,
        product_moment: Some(product_moment),
        square_product_moment: Some(square_product_moment),
        passed,
    })
}

/// Monte Carlo estimate of `E |sigma_omega(E)|^s` over Haar-random `2k`-planes.
pub fn moment_integral(n: usize, k: usize, s: f64, samples: usize, seed: u64) -> Result<McEstimate> {
    check_shape(n, k, samples)?;
    if !(s > -1.0) {
        return Err(Error::Domain(format!("exponent s = {s} must exceed -1")));
    }
    let batches = run_batches(seed, samples, |rng, count| {
        let mut acc = RunningMoments::default();
        for _ in 0..count {
            let sigma = sigma_omega(&sample_subspace(n, k, rng)).expect("even dimensions");
            acc.push(sigma.abs().powf(s));
        }
        acc
    });
    let total = pairwise_reduce(batches, RunningMoments::merge).unwrap_or_default();
    Ok(McEstimate::from_moments(&total, seed))
}

/// Which closed form for `E |sigma_omega|^s` a Monte Carlo estimate supports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentAdjudication {
    pub kappa: usize,
    pub s: f64,
    pub estimate: McEstimate,
    pub factorial_value: f64,
    pub mass_value: f64,
    /// Candidates within `MC_SIGMAS` standard errors of the estimate.
    pub supported: Vec<Normalization>,
    /// Candidate closest to the estimate.
    pub nearer: Normalization,
    /// Exactly one candidate supported and the candidates' intervals disjoint.
    pub conclusive: bool,
}

pub fn adjudicate_moment(estimate: McEstimate, kappa: usize, s: f64) -> MomentAdjudication {
    let factorial_value = moment_closed_form(kappa, s, Normalization::Factorial);
    let mass_value = moment_closed_form(kappa, s, Normalization::Mass);
    let band = MC_SIGMAS * estimate.std_error;
    let supported: Vec<Normalization> = [(Normalization::Factorial, factorial_value), (Normalization::Mass, mass_value)]
        .into_iter()
        .filter(|(_, v)| (estimate.mean - v).abs() <= band)
        .map(|(c, _)| c)
        .collect();
    let nearer = if (estimate.mean - factorial_value).abs() < (estimate.mean - mass_value).abs() {
        Normalization::Factorial
    } else {
        Normalization::Mass
    };
    let separated = (factorial_value - mass_value).abs() > 2.0 * band;
    MomentAdjudication {
        kappa,
        s,
        estimate,
        factorial_value,
        mass_value,
        conclusive: separated && supported.len() == 1,
        supported,
        nearer,
    }
}

fn check_shape(n: usize, k: usize, samples: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::Domain(format!("need 1 <= 2k <= 2n, got n = {n}, k = {k}")));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::Domain(format!("{samples} samples, at least {MIN_SAMPLES} required")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeroth_moment_is_exactly_one() {
        let e = moment_integral(3, 1, 0.0, 10_000, 1).unwrap();
        assert_eq!(e.mean, 1.0);
        assert_eq!(e.std_error, 0.0);
    }

    #[test]
    fn rejects_small_runs_and_bad_exponents() {
        assert!(moment_integral(2, 1, 1.0, 100, 1).is_err());
        assert!(moment_integral(2, 1, -1.0, 10_000, 1).is_err());
        assert!(test_uniform_simplex(2, 3, 10_000, 1).is_err());
    }

    #[test]
    fn lagrangian_complement_is_skipped() {
        let r = test_uniform_simplex(2, 2, 10_000, 1).unwrap();
        assert!(r.skipped && r.passed && r.marginals.is_empty());
    }

    #[test]
    fn closed_forms_coincide_at_kappa_one() {
        assert_eq!(moment_closed_form(1, 1.0, Normalization::Factorial), 0.5);
        assert_eq!(moment_closed_form(1, 1.0, Normalization::Mass), 0.5);
        assert_eq!(moment_closed_form(2, 1.0, Normalization::Factorial), 0.125);
        assert_eq!(moment_closed_form(2, 1.0, Normalization::Mass), 0.25);
    }

    #[test]
    fn adjudication_logic() {
        let est = McEstimate { mean: 0.2501, std_error: 0.0005, n_samples: 1, seed: 0 };
        let a = adjudicate_moment(est, 2, 1.0);
        assert_eq!(a.supported, vec![Normalization::Mass]);
        assert!(a.conclusive);
        let off = McEstimate { mean: 0.2365, ..est };
        let b = adjudicate_moment(off, 2, 1.0);
        assert!(b.supported.is_empty());
        assert!(!b.conclusive);
        assert_eq!(b.nearer, Normalization::Mass);
    }
}
