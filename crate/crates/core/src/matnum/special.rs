use std::f64::consts::PI;

use crate::{Error, Result};

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// `(sign Gamma(x), ln |Gamma(x)|)`, extended to negative non-integers by
/// `Gamma(x) Gamma(1 - x) = pi / sin(pi x)`.
fn signed_ln_gamma(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("Gamma({x})")));
    }
    if is_pole(x) {
        return Err(Error::Pole(x));
    }
    if x > 0.0 {
        return Ok((1.0, statrs::function::gamma::ln_gamma(x)));
    }
    let sine = (PI * x).sin();
    let ln_abs = PI.ln() - sine.abs().ln() - statrs::function::gamma::ln_gamma(1.0 - x);
    Ok((sine.signum(), ln_abs))
}

pub fn ln_gamma(x: f64) -> Result<f64> {
    let (sign, ln_abs) = signed_ln_gamma(x)?;
    if sign < 0.0 {
        return Err(Error::Domain(format!("Gamma({x}) is negative")));
    }
    Ok(ln_abs)
}

pub fn gamma(x: f64) -> Result<f64> {
    let (sign, ln_abs) = signed_ln_gamma(x)?;
    Ok(sign * ln_abs.exp())
}

/// `ln B(a, b)` for positive arguments.
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!("log_beta({a}, {b}) needs positive arguments")));
    }
    Ok(ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?)
}

pub fn beta(a: f64, b: f64) -> Result<f64> {
    Ok(log_beta(a, b)?.exp())
}

/// `B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)` continued to all arguments
/// where neither `Gamma(a)` nor `Gamma(b)` has a pole. A pole of the
/// denominator gives zero.
pub fn beta_continued(a: f64, b: f64) -> Result<f64> {
    let (sa, la) = signed_ln_gamma(a)?;
    let (sb, lb) = signed_ln_gamma(b)?;
    if is_pole(a + b) {
        return Ok(0.0);
    }
    let (sab, lab) = signed_ln_gamma(a + b)?;
    Ok(sa * sb * sab * (la + lb - lab).exp())
}

/// Volume of the Euclidean unit ball in `R^m`.
pub fn ball_volume(m: usize) -> f64 {
    let half = m as f64 / 2.0;
    PI.powf(half) / statrs::function::gamma::gamma(1.0 + half)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_values() {
        assert!((beta(0.5, 0.5).unwrap() - PI).abs() < 1e-13);
        assert!((beta(2.0, 3.0).unwrap() - 1.0 / 12.0).abs() < 1e-15);
        assert!((beta_continued(2.0, 3.0).unwrap() - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn continuation_against_recurrence() {
        // Gamma(-3/2) = Gamma(1/2) / ((-3/2)(-1/2)) = 4 sqrt(pi) / 3, Gamma(1/2) = sqrt(pi)
        let g = 4.0 * PI.sqrt() / 3.0;
        let expected = g * 1.0 / PI.sqrt();
        assert!((beta_continued(-1.5, 2.0).unwrap() - expected).abs() < 1e-13);
        assert!((gamma(-1.5).unwrap() - g).abs() < 1e-13);
        assert!((gamma(-0.5).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn poles() {
        assert_eq!(beta_continued(-2.0, 0.5), Err(Error::Pole(-2.0)));
        assert_eq!(gamma(0.0), Err(Error::Pole(0.0)));
        assert_eq!(beta_continued(-1.5, -0.5).unwrap(), 0.0);
        assert!(log_beta(-0.5, 1.0).is_err());
    }

    #[test]
    fn ball_volumes() {
        let expected = [1.0, 2.0, PI, 4.0 * PI / 3.0, PI * PI / 2.0, 8.0 * PI * PI / 15.0];
        for (m, e) in expected.iter().enumerate() {
            assert!((ball_volume(m) / e - 1.0).abs() < 1e-13, "m = {m}");
        }
    }
}
