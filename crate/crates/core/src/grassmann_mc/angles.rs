use serde::{Deserialize, Serialize};

use super::{kappa, symplectic_gram, Subspace};
use crate::matnum::skew_canonical;
use crate::{Error, Result};

/// Cosines of the multiple Kähler angles, sorted descending in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KahlerAngles {
    pub cosines: Vec<f64>,
}

impl KahlerAngles {
    pub fn product(&self) -> f64 {
        self.cosines.iter().product()
    }
}

/// Kähler cosines of an even-dimensional subspace of `R^{2n}`.
///
/// A `2k`-plane has `min(k, n - k)` nontrivial angles. When `k > n - k` they
/// are read off the orthogonal complement, whose skew spectrum carries the
/// same nontrivial values.
pub fn kahler_angles(e: &Subspace) -> Result<KahlerAngles> {
    if e.dim() % 2 != 0 || e.ambient_dim() % 2 != 0 {
        return Err(Error::Dimension(format!("{}-plane in R^{}", e.dim(), e.ambient_dim())));
    }
    let n = e.ambient_dim() / 2;
    let k = e.dim() / 2;
    let kap = kappa(n, k);
    let source = if k <= n - k { e.clone() } else { e.orthogonal_complement() };
    let spectrum = skew_canonical(&symplectic_gram(&source)?).spectrum;
    let cosines = spectrum.lambdas.into_iter().take(kap).map(|c| c.min(1.0)).collect();
    Ok(KahlerAngles { cosines })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_and_totally_real_lines() {
        let complex = Subspace::coordinate(4, &[0, 2]).unwrap();
        let angles = kahler_angles(&complex).unwrap();
        assert_eq!(angles.cosines.len(), 1);
        assert!((angles.cosines[0] - 1.0).abs() < 1e-14);

        let real = Subspace::coordinate(4, &[0, 1]).unwrap();
        assert!(kahler_angles(&real).unwrap().cosines[0].abs() < 1e-14);
    }

    #[test]
    fn lagrangian_complement_case_is_empty() {
        let full = Subspace::coordinate(4, &[0, 1, 2, 3]).unwrap();
        assert!(kahler_angles(&full).unwrap().cosines.is_empty());
    }
}
