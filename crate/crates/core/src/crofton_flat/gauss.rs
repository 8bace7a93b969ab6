use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::matnum::{ball_volume, beta_continued, gamma, integrate};
use crate::tolerances::QUADRATURE_REL;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussCrofton {
    pub m: usize,
    pub s: f64,
    /// Absent when `s <= -1`, where the integral diverges.
    pub quadrature: Option<f64>,
    pub closed_form: f64,
    pub relative_residual: Option<f64>,
}

/// `omega_m B((s+1)/2, m/2) / B(1/2, m/2)`, continued through non-pole `s`.
pub fn gauss_crofton_closed_form(m: usize, s: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    let half = m as f64 / 2.0;
    Ok(ball_volume(m) * beta_continued((s + 1.0) / 2.0, half)? / beta_continued(0.5, half)?)
}

/// Average of `|cos theta|^s` over lines in `R^{m+1}`, times `omega_m`, by
/// quadrature in the angle to a fixed axis and by the Beta closed form.
pub fn gauss_crofton_integral(m: usize, s: f64) -> Result<GaussCrofton> {
    let closed_form = gauss_crofton_closed_form(m, s)?;
    if !(s > -1.0) {
        return Ok(GaussCrofton { m, s, quadrature: None, closed_form, relative_residual: None });
    }
    let weight = |t: f64| t.sin().powi(m as i32 - 1);
    let tol = QUADRATURE_REL / 10.0;
    let numerator = integrate(|t| t.cos().abs().powf(s) * weight(t), 0.0, PI / 2.0, tol)?
        + integrate(|t| t.cos().abs().powf(s) * weight(t), PI / 2.0, PI, tol)?;
    let denominator = integrate(weight, 0.0, PI, tol)?;
    let quadrature = ball_volume(m) * numerator / denominator;
    Ok(GaussCrofton {
        m,
        s,
        quadrature: Some(quadrature),
        closed_form,
        relative_residual: Some(((quadrature - closed_form) / closed_form).abs()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularConstant {
    pub n: usize,
    /// Beta continuation at `m = 2n`, `s = -2n - 2`.
    pub continued: f64,
    /// `-1/2 pi^(n-1) / n! * Gamma(n + 1/2) Gamma(-n - 1/2)`.
    pub printed: f64,
    /// `(-1)^n pi^n / (n! (2n + 1))`, from the reflection formula.
    pub reflected: f64,
}

pub fn singular_constant(n: usize) -> Result<SingularConstant> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    let nf = n as f64;
    let fact: f64 = (1..=n).map(|i| i as f64).product();
    let printed = -0.5 * PI.powi(n as i32 - 1) / fact * gamma(nf + 0.5)? * gamma(-nf - 0.5)?;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(SingularConstant {
        n,
        continued: gauss_crofton_closed_form(2 * n, -2.0 * nf - 2.0)?,
        printed,
        reflected: sign * PI.powi(n as i32) / (fact * (2.0 * nf + 1.0)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_exponent_is_ball_volume() {
        for m in 1..=6 {
            let g = gauss_crofton_integral(m, 0.0).unwrap();
            assert!((g.closed_form - ball_volume(m)).abs() < 1e-12);
        }
    }

    #[test]
    fn plane_first_moment() {
        let g = gauss_crofton_integral(2, 1.0).unwrap();
        assert!((g.closed_form - PI / 2.0).abs() < 1e-12);
        assert!((g.quadrature.unwrap() - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn divergent_exponent_has_no_quadrature() {
        let g = gauss_crofton_integral(4, -6.0).unwrap();
        assert!(g.quadrature.is_none());
        assert!(gauss_crofton_integral(4, -3.0).is_err());
    }

    #[test]
    fn singular_constants() {
        let c1 = singular_constant(1).unwrap();
        assert!((c1.reflected + PI / 3.0).abs() < 1e-15);
        let c2 = singular_constant(2).unwrap();
        assert!((c2.reflected - PI * PI / 10.0).abs() < 1e-15);
        for c in [c1, c2] {
            assert!((c.continued - c.printed).abs() < 1e-12 * c.printed.abs());
            assert!((c.continued - c.reflected).abs() < 1e-12 * c.printed.abs());
        }
    }
}
