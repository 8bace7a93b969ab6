use nalgebra::DMatrix;

use crate::{Error, Result};

/// All elementary symmetric functions `e_0, ..., e_size` of the eigenvalues,
/// i.e. the coefficients of `det(tI + A) = sum_m e_m t^(size-m)`.
///
/// Faddeev-LeVerrier recursion on `det(tI - A)`, then the alternating sign.
pub fn elementary_symmetric(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("{}x{} is not square", a.nrows(), a.ncols())));
    }
    let size = a.nrows();
    let mut coeffs = vec![1.0; size + 1];
    let mut m = DMatrix::<f64>::zeros(size, size);
    for k in 1..=size {
        for i in 0..size {
            m[(i, i)] += coeffs[k - 1];
        }
        m = a * &m;
        coeffs[k] = -m.trace() / k as f64;
    }
    for (k, c) in coeffs.iter_mut().enumerate() {
        if k % 2 == 1 {
            *c = -*c;
        }
    }
    Ok(coeffs)
}

/// `tr(wedge^m A)`.
pub fn compound_trace(a: &DMatrix<f64>, m: usize) -> Result<f64> {
    if m > a.nrows() {
        return Err(Error::Domain(format!("compound degree {m} exceeds size {}", a.nrows())));
    }
    Ok(elementary_symmetric(a)?[m])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_gives_binomials() {
        let i = DMatrix::<f64>::identity(6, 6);
        let expected = [1.0, 6.0, 15.0, 20.0, 15.0, 6.0, 1.0];
        for (m, e) in expected.iter().enumerate() {
            assert!((compound_trace(&i, m).unwrap() - e).abs() < 1e-12);
        }
    }

    #[test]
    fn top_compound_is_determinant() {
        let a = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, 0.5, 0.3, 1.0, 4.0, -2.0, 0.0, 1.5]);
        assert!((compound_trace(&a, 3).unwrap() - a.determinant()).abs() < 1e-12);
        assert_eq!(compound_trace(&a, 0).unwrap(), 1.0);
        assert!((compound_trace(&a, 1).unwrap() - a.trace()).abs() < 1e-12);
    }

    #[test]
    fn degree_out_of_range() {
        let a = DMatrix::<f64>::identity(2, 2);
        assert!(matches!(compound_trace(&a, 3), Err(Error::Domain(_))));
    }
}
