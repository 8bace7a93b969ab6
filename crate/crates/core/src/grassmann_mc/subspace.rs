use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::matnum::{pfaffian, standard_j, SkewMatrix};
use crate::tolerances::ORTHONORMAL;
use crate::{Error, Result};

/// Linear subspace given by a column-orthonormal basis.
///
/// When `oriented` is set the column order fixes an orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: DMatrix<f64>,
    oriented: bool,
}

impl Subspace {
    pub fn new(basis: DMatrix<f64>, oriented: bool) -> Result<Self> {
        let defect = (basis.transpose() * &basis - DMatrix::identity(basis.ncols(), basis.ncols())).amax();
        if defect > ORTHONORMAL {
            return Err(Error::Validation(format!("basis not orthonormal (defect {defect:e})")));
        }
        Ok(Self { basis, oriented })
    }

    /// Oriented span of the listed coordinate vectors, in order.
    pub fn coordinate(ambient: usize, axes: &[usize]) -> Result<Self> {
        let mut basis = DMatrix::zeros(ambient, axes.len());
        for (c, &a) in axes.iter().enumerate() {
            if a >= ambient {
                return Err(Error::Dimension(format!("axis {a} outside R^{ambient}")));
            }
            basis[(a, c)] = 1.0;
        }
        Self::new(basis, true)
    }

    /// Haar-distributed oriented subspace: QR of a Gaussian matrix with the
    /// diagonal of `R` made positive.
    pub fn random<R: Rng + ?Sized>(ambient: usize, dim: usize, rng: &mut R) -> Self {
        assert!(dim <= ambient, "subspace dimension {dim} exceeds ambient {ambient}");
        if dim == 0 {
            return Self { basis: DMatrix::zeros(ambient, 0), oriented: true };
        }
        let gaussian = DMatrix::from_fn(ambient, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
        let qr = gaussian.qr();
        let r = qr.r();
        let mut q = qr.q();
        for j in 0..dim {
            if r[(j, j)] < 0.0 {
                q.column_mut(j).neg_mut();
            }
        }
        Self { basis: q, oriented: true }
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn oriented(&self) -> bool {
        self.oriented
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Same subspace with the opposite orientation.
    pub fn reversed(&self) -> Self {
        let mut basis = self.basis.clone();
        match basis.ncols() {
            0 => {}
            1 => basis.column_mut(0).neg_mut(),
            _ => basis.swap_columns(0, 1),
        }
        Self { basis, oriented: self.oriented }
    }

    /// Image under a linear map (expected orthogonal).
    pub fn transformed(&self, map: &DMatrix<f64>) -> Result<Self> {
        Self::new(map * &self.basis, self.oriented)
    }

    /// Orthogonal complement, oriented so that `det [self | complement] > 0`.
    pub fn orthogonal_complement(&self) -> Self {
        let ambient = self.ambient_dim();
        let projector = DMatrix::identity(ambient, ambient) - &self.basis * self.basis.transpose();
        let eig = SymmetricEigen::new(projector);
        let cols: Vec<usize> = (0..ambient).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
        let mut basis = DMatrix::zeros(ambient, cols.len());
        for (c, &i) in cols.iter().enumerate() {
            basis.set_column(c, &eig.eigenvectors.column(i));
        }
        if !cols.is_empty() {
            let mut joint = DMatrix::zeros(ambient, ambient);
            joint.view_mut((0, 0), (ambient, self.dim())).copy_from(&self.basis);
            joint.view_mut((0, self.dim()), (ambient, cols.len())).copy_from(&basis);
            if joint.determinant() < 0.0 {
                basis.column_mut(0).neg_mut();
            }
        }
        Self { basis, oriented: true }
    }
}

/// Haar-random oriented `2k`-plane in `R^{2n}`.
pub fn sample_subspace<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Subspace {
    Subspace::random(2 * n, 2 * k, rng)
}

/// Matrix of `omega(e_i, e_j)` for the basis, with `omega(u, v) = <J u, v>`.
pub fn symplectic_gram(e: &Subspace) -> Result<SkewMatrix> {
    let ambient = e.ambient_dim();
    if ambient % 2 != 0 {
        return Err(Error::Dimension(format!("ambient dimension {ambient} is odd")));
    }
    let j = standard_j(ambient / 2);
    let gram = (&j * e.basis()).transpose() * e.basis();
    SkewMatrix::skew_part(&gram)
}

/// Ratio of symplectic to Euclidean volume on `E`: the Pfaffian of its
/// symplectic Gram matrix.
pub fn sigma_omega(e: &Subspace) -> Result<f64> {
    Ok(pfaffian(&symplectic_gram(e)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn symplectic_and_isotropic_planes() {
        let complex_line = Subspace::coordinate(4, &[0, 2]).unwrap();
        let gram = symplectic_gram(&complex_line).unwrap();
        assert_eq!(gram.as_matrix(), &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));
        assert_eq!(sigma_omega(&complex_line).unwrap(), 1.0);
        assert_eq!(sigma_omega(&complex_line.reversed()).unwrap(), -1.0);

        let isotropic = Subspace::coordinate(4, &[0, 1]).unwrap();
        assert_eq!(symplectic_gram(&isotropic).unwrap().as_matrix(), &DMatrix::zeros(2, 2));
        assert_eq!(sigma_omega(&isotropic).unwrap(), 0.0);
    }

    #[test]
    fn full_space_has_unit_sigma() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=4 {
            let e = sample_subspace(n, n, &mut rng);
            assert!((sigma_omega(&e).unwrap().abs() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn random_basis_is_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (n, k) in [(2, 1), (3, 2), (4, 1), (4, 3)] {
            let e = sample_subspace(n, k, &mut rng);
            let defect = (e.basis().transpose() * e.basis() - DMatrix::identity(2 * k, 2 * k)).amax();
            assert!(defect < 1e-10);
        }
    }

    #[test]
    fn complement_is_positively_oriented() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let e = Subspace::random(6, 2, &mut rng);
        let c = e.orthogonal_complement();
        assert_eq!(c.dim(), 4);
        let mut joint = DMatrix::zeros(6, 6);
        joint.view_mut((0, 0), (6, 2)).copy_from(e.basis());
        joint.view_mut((0, 2), (6, 4)).copy_from(c.basis());
        assert!((joint.determinant() - 1.0).abs() < 1e-10);
    }
}
