//! Exact tables for contact spheres and the convexity matrix inequality.
//!
//! `phi[k][m]` is the even local-area valuation of degree `2k` on the
//! equatorial `S^{2m}` of `S^{2n+1}`, `psi[k][m]` the Crofton valuation of the
//! same degree, and `c[k][j]` the change of basis `psi_{2k} = sum_j c[k][j] phi_{2j}`.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::grassmann_mc::Normalization;
use crate::matnum::{
    binomial, binomial_inverse_by_euler, elementary_symmetric, factorial, standard_j, RationalMatrix, SymMatrix,
};
use crate::{Error, Result};

/// `min(k, n + 1 - k)`.
pub fn sphere_kappa(n: usize, k: usize) -> usize {
    k.min(n + 1 - k)
}

/// `b_k = (-1)^kappa / (kappa! (2n+1)^kappa)`, or without `kappa!` for
/// [`Normalization::Mass`].
pub fn leading_coefficient(n: usize, k: usize, norm: Normalization) -> BigRational {
    let kap = sphere_kappa(n, k) as u64;
    let mut denom = BigInt::from(2 * n as u64 + 1).pow(kap as u32);
    if norm == Normalization::Factorial {
        denom *= factorial(kap);
    }
    let sign = if kap % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    BigRational::new(sign, denom)
}

/// `phi[k][m] = 2 C(2m, 2k)`.
pub fn phi_table(n: usize) -> RationalMatrix {
    (0..=n)
        .map(|k| {
            (0..=n)
                .map(|m| BigRational::from_integer(BigInt::from(2) * binomial(2 * m as u64, 2 * k as u64)))
                .collect()
        })
        .collect()
}

/// `psi[k][m] = 2 b_k` for `k <= m`, zero otherwise.
pub fn psi_table(n: usize, norm: Normalization) -> RationalMatrix {
    (0..=n)
        .map(|k| {
            let value = leading_coefficient(n, k, norm) * BigInt::from(2);
            (0..=n).map(|m| if k <= m { value.clone() } else { BigRational::zero() }).collect()
        })
        .collect()
}

/// Solve `psi[k][m] = sum_{j=k}^{m} c[k][j] phi[j][m]` row by row; the
/// system is triangular in `(m, j)`.
pub fn crofton_coefficients_by_solve(n: usize, norm: Normalization) -> RationalMatrix {
    let phi = phi_table(n);
    let psi = psi_table(n, norm);
    let mut c = vec![vec![BigRational::zero(); n + 1]; n + 1];
    for k in 0..=n {
        for m in k..=n {
            let known: BigRational = (k..m).map(|j| &c[k][j] * &phi[j][m]).sum();
            c[k][m] = (&psi[k][m] - known) / &phi[m][m];
        }
    }
    c
}

/// `c[k][j] = b_k sum_{m=k}^{j} C(2j, 2m) E_{2j-2m}`.
pub fn crofton_coefficients_closed_form(n: usize, norm: Normalization) -> RationalMatrix {
    let inverse = binomial_inverse_by_euler(n);
    (0..=n)
        .map(|k| {
            let b = leading_coefficient(n, k, norm);
            (0..=n)
                .map(|j| {
                    if j < k {
                        return BigRational::zero();
                    }
                    let sum: BigRational = (k..=j).map(|m| inverse[j][m].clone()).sum();
                    &b * sum
                })
                .collect()
        })
        .collect()
}

/// Crofton coefficients, with both derivations required to agree exactly.
pub fn crofton_coefficients(n: usize, norm: Normalization) -> Result<RationalMatrix> {
    let solved = crofton_coefficients_by_solve(n, norm);
    let closed = crofton_coefficients_closed_form(n, norm);
    for k in 0..=n {
        for j in 0..=n {
            if solved[k][j] != closed[k][j] {
                return Err(Error::Consistency(format!(
                    "c[{k}][{j}]: triangular solve {} vs Euler closed form {}",
                    solved[k][j], closed[k][j]
                )));
            }
        }
    }
    Ok(solved)
}

/// Entrywise `c * phi == psi` in the row sense above.
pub fn relation_holds(c: &RationalMatrix, phi: &RationalMatrix, psi: &RationalMatrix) -> bool {
    let n = phi.len();
    (0..n).all(|k| (0..n).all(|m| (0..n).map(|j| &c[k][j] * &phi[j][m]).sum::<BigRational>() == psi[k][m]))
}

/// All three tables for one `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereTables {
    pub n: usize,
    pub normalization: Normalization,
    pub phi: Vec<Vec<String>>,
    pub psi: Vec<Vec<String>>,
    pub c: Vec<Vec<String>>,
    pub relation_holds: bool,
}

impl SphereTables {
    pub fn build(n: usize, norm: Normalization) -> Result<Self> {
        let phi = phi_table(n);
        let psi = psi_table(n, norm);
        let c = crofton_coefficients(n, norm)?;
        let holds = relation_holds(&c, &phi, &psi);
        Ok(Self { n, normalization: norm, phi: render(&phi), psi: render(&psi), c: render(&c), relation_holds: holds })
    }
}

/// Exact rational strings such as `"-2/3"`.
pub fn render(m: &RationalMatrix) -> Vec<Vec<String>> {
    m.iter().map(|row| row.iter().map(|v| v.to_string()).collect()).collect()
}

pub fn to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// `C(2n, m) det(I + S J) - tr wedge^m (I + S J)` for a positive semidefinite
/// `S` and even `m`; nonnegative.
pub fn convexity_gap(s: &SymMatrix, m: usize) -> Result<f64> {
    let size = s.size();
    if size % 2 != 0 {
        return Err(Error::Dimension(format!("odd size {size}")));
    }
    if m % 2 != 0 || m > size {
        return Err(Error::Domain(format!("degree {m} must be even and at most {size}")));
    }
    let eig = s.as_matrix().clone().symmetric_eigenvalues();
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -1e-10 {
        return Err(Error::Validation(format!("matrix is not positive semidefinite (eigenvalue {min:e})")));
    }
    let shifted = DMatrix::identity(size, size) + s.as_matrix() * standard_j(size / 2);
    let e = elementary_symmetric(&shifted)?;
    let choose = binomial(size as u64, m as u64).to_f64().unwrap_or(f64::NAN);
    Ok(choose * e[size] - e[m])
}
