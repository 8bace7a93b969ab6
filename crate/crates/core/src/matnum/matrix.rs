use nalgebra::DMatrix;

use crate::tolerances::SHAPE;
use crate::{Error, Result};

/// Real antisymmetric matrix of even size.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix(DMatrix<f64>);

impl SkewMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!("{}x{} is not square", m.nrows(), m.ncols())));
        }
        if m.nrows() % 2 != 0 {
            return Err(Error::Dimension(format!("odd size {}", m.nrows())));
        }
        let worst = max_abs(&(&m + m.transpose()));
        if worst > SHAPE {
            return Err(Error::Validation(format!("antisymmetry defect {worst:e}")));
        }
        Ok(Self(m))
    }

    /// Antisymmetric part of an arbitrary square matrix, skipping validation.
    pub fn skew_part(m: &DMatrix<f64>) -> Result<Self> {
        if !m.is_square() || m.nrows() % 2 != 0 {
            return Err(Error::Dimension(format!("{}x{}", m.nrows(), m.ncols())));
        }
        Ok(Self((m - m.transpose()) * 0.5))
    }

    pub fn size(&self) -> usize {
        self.0.nrows()
    }

    pub fn half_size(&self) -> usize {
        self.0.nrows() / 2
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }
}

/// Real symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(DMatrix<f64>);

impl SymMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!("{}x{} is not square", m.nrows(), m.ncols())));
        }
        let worst = max_abs(&(&m - m.transpose()));
        if worst > SHAPE {
            return Err(Error::Validation(format!("symmetry defect {worst:e}")));
        }
        Ok(Self(m))
    }

    pub fn symmetric_part(m: &DMatrix<f64>) -> Self {
        Self((m + m.transpose()) * 0.5)
    }

    pub fn size(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }
}

/// The complex structure `[[0, -I], [I, 0]]` on `R^{2n}`.
pub fn standard_j(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = -1.0;
        j[(n + i, i)] = 1.0;
    }
    j
}

/// Block diagonal skew matrix with blocks `[[0, l], [-l, 0]]`.
pub fn block_skew_diagonal(lambdas: &[f64]) -> SkewMatrix {
    let size = 2 * lambdas.len();
    let mut m = DMatrix::zeros(size, size);
    for (i, &l) in lambdas.iter().enumerate() {
        m[(2 * i, 2 * i + 1)] = l;
        m[(2 * i + 1, 2 * i)] = -l;
    }
    SkewMatrix(m)
}

pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_squares_to_minus_identity() {
        for n in 1..=4 {
            let j = standard_j(n);
            assert_eq!(&j * &j, -DMatrix::<f64>::identity(2 * n, 2 * n));
            assert_eq!(j.transpose(), -j.clone());
        }
    }

    #[test]
    fn rejects_odd_and_asymmetric() {
        assert!(matches!(SkewMatrix::new(DMatrix::zeros(3, 3)), Err(Error::Dimension(_))));
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = 1.0;
        m[(1, 0)] = -1.0 + 1e-9;
        assert!(matches!(SkewMatrix::new(m), Err(Error::Validation(_))));
        let mut s = DMatrix::zeros(2, 2);
        s[(0, 1)] = 1.0;
        assert!(SymMatrix::new(s).is_err());
    }
}
