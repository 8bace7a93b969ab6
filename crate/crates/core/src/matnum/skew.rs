use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{block_skew_diagonal, SkewMatrix};

/// Skew singular values `l_1 >= ... >= l_N >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkewSpectrum {
    pub lambdas: Vec<f64>,
}

impl SkewSpectrum {
    pub fn product(&self) -> f64 {
        self.lambdas.iter().product()
    }
}

/// `A = B^T D B` with `D` block diagonal built from the spectrum.
#[derive(Debug, Clone)]
pub struct SkewCanonical {
    pub spectrum: SkewSpectrum,
    /// Orthogonal; rows come in pairs spanning the invariant planes.
    pub basis: DMatrix<f64>,
}

impl SkewCanonical {
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let d = block_skew_diagonal(&self.spectrum.lambdas);
        self.basis.transpose() * d.as_matrix() * &self.basis
    }
}

/// Canonical form of a skew matrix from the symmetric eigenproblem of `A^T A`.
///
/// Each eigenvalue `l^2` of `A^T A` appears twice. For a unit vector `p` in
/// the eigenspace, `q = -A p / l` completes the invariant plane, so
/// `A p = -l q` and `A q = l p`. Kernel directions are paired arbitrarily,
/// with the last row flipped so that `det B = 1`. In every case
/// `Pf(A) = det(B) * l_1 * ... * l_N`.
pub fn skew_canonical(a: &SkewMatrix) -> SkewCanonical {
    let size = a.size();
    let m = a.as_matrix();
    if size == 0 {
        return SkewCanonical { spectrum: SkewSpectrum { lambdas: vec![] }, basis: DMatrix::zeros(0, 0) };
    }
    let scale = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(f64::MIN_POSITIVE);
    let eig = SymmetricEigen::new(m.transpose() * m);
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    let mut rows: Vec<DVector<f64>> = Vec::with_capacity(size);
    let mut pairs: Vec<(f64, usize)> = Vec::new();
    let mut kernel: Vec<DVector<f64>> = Vec::new();
    let candidates = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .chain((0..size).map(|i| DVector::from_fn(size, |r, _| if r == i { 1.0 } else { 0.0 })));
    for v in candidates {
        if rows.len() + kernel.len() == size {
            break;
        }
        let Some(p) = orthonormalize(&v, rows.iter().chain(kernel.iter())) else {
            continue;
        };
        let image = m * &p;
        let lambda = image.norm();
        if lambda > 1e-13 * scale {
            let Some(q) = orthonormalize(&(-image / lambda), rows.iter().chain(kernel.iter()).chain([&p])) else {
                kernel.push(p);
                continue;
            };
            pairs.push((lambda, rows.len()));
            rows.push(p);
            rows.push(q);
        } else {
            kernel.push(p);
        }
    }

    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut lambdas = Vec::with_capacity(size / 2);
    let mut basis = DMatrix::zeros(size, size);
    let mut r = 0;
    for &(lambda, start) in &pairs {
        lambdas.push(lambda);
        basis.set_row(r, &rows[start].transpose());
        basis.set_row(r + 1, &rows[start + 1].transpose());
        r += 2;
    }
    for v in &kernel {
        if r % 2 == 0 {
            lambdas.push(0.0);
        }
        basis.set_row(r, &v.transpose());
        r += 1;
    }
    if !kernel.is_empty() && basis.determinant() < 0.0 {
        let last = size - 1;
        let flipped = -basis.row(last).into_owned();
        basis.set_row(last, &flipped);
    }
    SkewCanonical { spectrum: SkewSpectrum { lambdas }, basis }
}

fn orthonormalize<'a>(v: &DVector<f64>, against: impl Iterator<Item = &'a DVector<f64>> + Clone) -> Option<DVector<f64>> {
    let mut w = v.clone();
    for _ in 0..2 {
        for u in against.clone() {
            let c = u.dot(&w);
            w.axpy(-c, u, 1.0);
        }
    }
    let norm = w.norm();
    (norm > 1e-6).then(|| w / norm)
}
