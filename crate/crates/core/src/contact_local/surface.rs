use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::tolerances::{FD_GRADIENT_STEP, FD_HESSIAN_STEP};
use crate::{Error, Result};

/// Height function `z = f(x_1..x_n, y_1..y_n)` of a graph hypersurface.
///
/// `value` returns `None` where the function is not defined (outside the
/// sheet of a closed surface, for instance). Derivatives default to central
/// finite differences.
pub trait GraphFunction: Send + Sync + fmt::Debug {
    /// Half the number of graph coordinates.
    fn n(&self) -> usize;

    fn value(&self, w: &[f64]) -> Option<f64>;

    fn gradient(&self, w: &[f64]) -> Option<DVector<f64>> {
        fd_gradient(self, w, FD_GRADIENT_STEP)
    }

    fn hessian(&self, w: &[f64]) -> Option<DMatrix<f64>> {
        fd_hessian(self, w, FD_HESSIAN_STEP)
    }
}

pub fn fd_gradient<F: GraphFunction + ?Sized>(f: &F, w: &[f64], h: f64) -> Option<DVector<f64>> {
    let mut p = w.to_vec();
    let mut g = DVector::zeros(w.len());
    for i in 0..w.len() {
        p[i] = w[i] + h;
        let up = f.value(&p)?;
        p[i] = w[i] - h;
        let down = f.value(&p)?;
        p[i] = w[i];
        g[i] = (up - down) / (2.0 * h);
    }
    Some(g)
}

pub fn fd_hessian<F: GraphFunction + ?Sized>(f: &F, w: &[f64], h: f64) -> Option<DMatrix<f64>> {
    let d = w.len();
    let mut p = w.to_vec();
    let mut hess = DMatrix::zeros(d, d);
    let center = f.value(w)?;
    for i in 0..d {
        p[i] = w[i] + h;
        let up = f.value(&p)?;
        p[i] = w[i] - h;
        let down = f.value(&p)?;
        p[i] = w[i];
        hess[(i, i)] = (up - 2.0 * center + down) / (h * h);
        for j in 0..i {
            let mut corner = |si: f64, sj: f64| {
                p[i] = w[i] + si * h;
                p[j] = w[j] + sj * h;
                let v = f.value(&p);
                p[i] = w[i];
                p[j] = w[j];
                v
            };
            let v = (corner(1.0, 1.0)? - corner(1.0, -1.0)? - corner(-1.0, 1.0)? + corner(-1.0, -1.0)?) / (4.0 * h * h);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    Some(hess)
}

/// Axis-aligned box in `R^{2n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.iter().zip(&upper).any(|(a, b)| !(a < b)) {
            return Err(Error::Validation(format!("invalid box {lower:?} .. {upper:?}")));
        }
        Ok(Self { lower, upper })
    }

    pub fn cube(dim: usize, half_width: f64) -> Self {
        Self { lower: vec![-half_width; dim], upper: vec![half_width; dim] }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, w: &[f64]) -> bool {
        w.len() == self.dim() && w.iter().zip(self.lower.iter().zip(&self.upper)).all(|(v, (a, b))| *a <= *v && *v <= *b)
    }
}

/// Hypersurface `z = f(w)` over a box, in the contact chart
/// `alpha = -dz + sum x_j dy_j`.
#[derive(Debug, Clone)]
pub struct GraphHypersurface {
    function: Arc<dyn GraphFunction>,
    domain: BoxDomain,
}

impl GraphHypersurface {
    pub fn new(function: Arc<dyn GraphFunction>, domain: BoxDomain) -> Result<Self> {
        if domain.dim() != 2 * function.n() {
            return Err(Error::Dimension(format!("box of dimension {} for n = {}", domain.dim(), function.n())));
        }
        Ok(Self { function, domain })
    }

    pub fn n(&self) -> usize {
        self.function.n()
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn function(&self) -> &Arc<dyn GraphFunction> {
        &self.function
    }

    fn outside(&self, w: &[f64]) -> Error {
        Error::Domain(format!("point {w:?} outside the graph domain"))
    }

    pub fn value(&self, w: &[f64]) -> Result<f64> {
        if !self.domain.contains(w) {
            return Err(self.outside(w));
        }
        self.function.value(w).ok_or_else(|| self.outside(w))
    }

    pub fn gradient(&self, w: &[f64]) -> Result<DVector<f64>> {
        if !self.domain.contains(w) {
            return Err(self.outside(w));
        }
        self.function.gradient(w).ok_or_else(|| self.outside(w))
    }

    pub fn hessian(&self, w: &[f64]) -> Result<DMatrix<f64>> {
        if !self.domain.contains(w) {
            return Err(self.outside(w));
        }
        let h = self.function.hessian(w).ok_or_else(|| self.outside(w))?;
        Ok((&h + h.transpose()) * 0.5)
    }

    pub fn is_defined(&self, w: &[f64]) -> bool {
        self.domain.contains(w) && self.function.value(w).is_some()
    }
}

/// `sum_t c_t prod_i w_i^{e_{t,i}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub n: usize,
    pub terms: Vec<(Vec<u32>, f64)>,
}

impl Polynomial {
    pub fn new(n: usize, terms: Vec<(Vec<u32>, f64)>) -> Result<Self> {
        if let Some((e, _)) = terms.iter().find(|(e, _)| e.len() != 2 * n) {
            return Err(Error::Dimension(format!("exponent vector {e:?} needs {} entries", 2 * n)));
        }
        Ok(Self { n, terms })
    }

    fn monomial(w: &[f64], e: &[u32], skip: &[usize]) -> f64 {
        let mut exps = e.to_vec();
        let mut coeff = 1.0;
        for &i in skip {
            if exps[i] == 0 {
                return 0.0;
            }
            coeff *= exps[i] as f64;
            exps[i] -= 1;
        }
        coeff * w.iter().zip(&exps).map(|(x, &p)| x.powi(p as i32)).product::<f64>()
    }
}

impl GraphFunction for Polynomial {
    fn n(&self) -> usize {
        self.n
    }

    fn value(&self, w: &[f64]) -> Option<f64> {
        Some(self.terms.iter().map(|(e, c)| c * Self::monomial(w, e, &[])).sum())
    }

    fn gradient(&self, w: &[f64]) -> Option<DVector<f64>> {
        Some(DVector::from_fn(w.len(), |i, _| self.terms.iter().map(|(e, c)| c * Self::monomial(w, e, &[i])).sum()))
    }

    fn hessian(&self, w: &[f64]) -> Option<DMatrix<f64>> {
        Some(DMatrix::from_fn(w.len(), w.len(), |i, j| {
            self.terms.iter().map(|(e, c)| c * Self::monomial(w, e, &[i, j])).sum()
        }))
    }
}

/// `f(w) = <A w, w> / 2` with `A` symmetrized.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadratic {
    matrix: DMatrix<f64>,
}

impl Quadratic {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() % 2 != 0 {
            return Err(Error::Dimension(format!("{}x{} quadratic form", matrix.nrows(), matrix.ncols())));
        }
        Ok(Self { matrix: (&matrix + matrix.transpose()) * 0.5 })
    }
}

impl GraphFunction for Quadratic {
    fn n(&self) -> usize {
        self.matrix.nrows() / 2
    }

    fn value(&self, w: &[f64]) -> Option<f64> {
        let v = DVector::from_column_slice(w);
        Some(0.5 * v.dot(&(&self.matrix * &v)))
    }

    fn gradient(&self, w: &[f64]) -> Option<DVector<f64>> {
        Some(&self.matrix * DVector::from_column_slice(w))
    }

    fn hessian(&self, _: &[f64]) -> Option<DMatrix<f64>> {
        Some(self.matrix.clone())
    }
}

/// Arbitrary closure; derivatives by finite differences.
pub struct FnGraph<F> {
    n: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> FnGraph<F> {
    pub fn new(n: usize, f: F) -> Self {
        Self { n, f }
    }
}

impl<F> fmt::Debug for FnGraph<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FnGraph(n = {})", self.n)
    }
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> GraphFunction for FnGraph<F> {
    fn n(&self) -> usize {
        self.n
    }

    fn value(&self, w: &[f64]) -> Option<f64> {
        Some((self.f)(w))
    }
}

/// Relative depth below which a sheet is considered too steep to use.
const SHEET_MARGIN: f64 = 1e-4;

/// Upper or lower half of an axis-aligned ellipsoid in `R^3` as a graph over
/// the `(x, y)` plane.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipsoidSheet {
    pub axes: [f64; 3],
    pub center: [f64; 3],
    pub upper: bool,
}

impl GraphFunction for EllipsoidSheet {
    fn n(&self) -> usize {
        1
    }

    fn value(&self, w: &[f64]) -> Option<f64> {
        let (_, _, q) = self.local(w)?;
        let [_, _, c] = self.axes;
        Some(self.center[2] + self.sign() * c * q.sqrt())
    }

    fn gradient(&self, w: &[f64]) -> Option<DVector<f64>> {
        let (u, v, q) = self.local(w)?;
        let [a, b, c] = self.axes;
        let s = q.sqrt();
        let k = self.sign() * c;
        Some(DVector::from_vec(vec![-k * u / (a * s), -k * v / (b * s)]))
    }

    fn hessian(&self, w: &[f64]) -> Option<DMatrix<f64>> {
        let (u, v, q) = self.local(w)?;
        let [a, b, c] = self.axes;
        let s3 = q * q.sqrt();
        let k = self.sign() * c;
        let xx = -k * (q + u * u) / (a * a * s3);
        let yy = -k * (q + v * v) / (b * b * s3);
        let xy = -k * u * v / (a * b * s3);
        Some(DMatrix::from_row_slice(2, 2, &[xx, xy, xy, yy]))
    }
}

impl EllipsoidSheet {
    fn sign(&self) -> f64 {
        if self.upper {
            1.0
        } else {
            -1.0
        }
    }

    fn local(&self, w: &[f64]) -> Option<(f64, f64, f64)> {
        let u = (w[0] - self.center[0]) / self.axes[0];
        let v = (w[1] - self.center[1]) / self.axes[1];
        let q = 1.0 - u * u - v * v;
        (q > SHEET_MARGIN).then_some((u, v, q))
    }

    pub fn domain(&self) -> BoxDomain {
        BoxDomain {
            lower: vec![self.center[0] - self.axes[0], self.center[1] - self.axes[1]],
            upper: vec![self.center[0] + self.axes[0], self.center[1] + self.axes[1]],
        }
    }
}

/// Upper or lower half of a torus of revolution about a vertical axis.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusSheet {
    pub major: f64,
    pub minor: f64,
    pub center: [f64; 3],
    pub upper: bool,
}

impl TorusSheet {
    fn sign(&self) -> f64 {
        if self.upper {
            1.0
        } else {
            -1.0
        }
    }

    /// `(dx, dy, rho, rho - R, t)` with `t = sqrt(r^2 - (rho - R)^2)`.
    fn local(&self, w: &[f64]) -> Option<(f64, f64, f64, f64, f64)> {
        let dx = w[0] - self.center[0];
        let dy = w[1] - self.center[1];
        let rho = dx.hypot(dy);
        let g = rho - self.major;
        let t2 = self.minor * self.minor - g * g;
        (rho > 0.0 && t2 > SHEET_MARGIN * self.minor * self.minor).then(|| (dx, dy, rho, g, t2.sqrt()))
    }

    pub fn domain(&self) -> BoxDomain {
        let reach = self.major + self.minor;
        BoxDomain {
            lower: vec![self.center[0] - reach, self.center[1] - reach],
            upper: vec![self.center[0] + reach, self.center[1] + reach],
        }
    }
}

impl GraphFunction for TorusSheet {
    fn n(&self) -> usize {
        1
    }

    fn value(&self, w: &[f64]) -> Option<f64> {
        let (.., t) = self.local(w)?;
        Some(self.center[2] + self.sign() * t)
    }

    fn gradient(&self, w: &[f64]) -> Option<DVector<f64>> {
        let (dx, dy, rho, g, t) = self.local(w)?;
        let radial = -self.sign() * g / t;
        Some(DVector::from_vec(vec![radial * dx / rho, radial * dy / rho]))
    }

    fn hessian(&self, w: &[f64]) -> Option<DMatrix<f64>> {
        let (dx, dy, rho, g, t) = self.local(w)?;
        let first = -self.sign() * g / t;
        let second = -self.sign() * self.minor * self.minor / (t * t * t);
        let (ux, uy) = (dx / rho, dy / rho);
        let tangential = first / rho;
        Some(DMatrix::from_row_slice(
            2,
            2,
            &[
                second * ux * ux + tangential * (1.0 - ux * ux),
                (second - tangential) * ux * uy,
                (second - tangential) * ux * uy,
                second * uy * uy + tangential * (1.0 - uy * uy),
            ],
        ))
    }
}

/// Contact chart in which a surface is described.
///
/// `Darboux` is `alpha = -dz + sum x_j dy_j`. `Symmetric { scale: c }` is
/// `alpha = -dz + c sum (x_j dy_j - y_j dx_j)`, carried to the Darboux chart by
/// `(x, y, z) -> (2c x, y, z + c sum x_j y_j)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ContactChart {
    #[default]
    Darboux,
    Symmetric { scale: f64 },
}

impl ContactChart {
    /// Graph function and domain of the same hypersurface in Darboux coordinates.
    pub fn to_darboux(&self, f: Arc<dyn GraphFunction>, domain: BoxDomain) -> Result<(Arc<dyn GraphFunction>, BoxDomain)> {
        match *self {
            ContactChart::Darboux => Ok((f, domain)),
            ContactChart::Symmetric { scale } => {
                if !(scale > 0.0) {
                    return Err(Error::Validation(format!("chart scale {scale} must be positive")));
                }
                let n = f.n();
                let mut lower = domain.lower.clone();
                let mut upper = domain.upper.clone();
                for i in 0..n {
                    lower[i] *= 2.0 * scale;
                    upper[i] *= 2.0 * scale;
                }
                Ok((Arc::new(SymmetricPullback { inner: f, scale }), BoxDomain { lower, upper }))
            }
        }
    }

    /// Point `(w, z)` of the Darboux chart expressed in this chart.
    pub fn from_darboux(&self, w: &[f64], z: f64) -> Vec<f64> {
        let n = w.len() / 2;
        match *self {
            ContactChart::Darboux => w.iter().copied().chain([z]).collect(),
            ContactChart::Symmetric { scale } => {
                let mut out: Vec<f64> = w.to_vec();
                let mut twist = 0.0;
                for i in 0..n {
                    out[i] = w[i] / (2.0 * scale);
                    twist += w[i] * w[n + i] / 2.0;
                }
                out.push(z - twist);
                out
            }
        }
    }
}

/// `g(x', y) = f(x' / 2c, y) + sum x'_j y_j / 2`.
#[derive(Debug)]
struct SymmetricPullback {
    inner: Arc<dyn GraphFunction>,
    scale: f64,
}

impl SymmetricPullback {
    fn inner_point(&self, w: &[f64]) -> Vec<f64> {
        let n = w.len() / 2;
        w.iter().enumerate().map(|(i, &v)| if i < n { v / (2.0 * self.scale) } else { v }).collect()
    }

    fn stretch(&self, dim: usize) -> DVector<f64> {
        DVector::from_fn(dim, |i, _| if i < dim / 2 { 1.0 / (2.0 * self.scale) } else { 1.0 })
    }
}

impl GraphFunction for SymmetricPullback {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn value(&self, w: &[f64]) -> Option<f64> {
        let n = w.len() / 2;
        let twist: f64 = (0..n).map(|i| w[i] * w[n + i]).sum::<f64>() / 2.0;
        Some(self.inner.value(&self.inner_point(w))? + twist)
    }

    fn gradient(&self, w: &[f64]) -> Option<DVector<f64>> {
        let n = w.len() / 2;
        let g = self.inner.gradient(&self.inner_point(w))?;
        let mut out = g.component_mul(&self.stretch(w.len()));
        for i in 0..n {
            out[i] += w[n + i] / 2.0;
            out[n + i] += w[i] / 2.0;
        }
        Some(out)
    }

    fn hessian(&self, w: &[f64]) -> Option<DMatrix<f64>> {
        let n = w.len() / 2;
        let d = DMatrix::from_diagonal(&self.stretch(w.len()));
        let mut out = &d * self.inner.hessian(&self.inner_point(w))? * &d;
        for i in 0..n {
            out[(i, n + i)] += 0.5;
            out[(n + i, i)] += 0.5;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_derivatives_match(f: &dyn GraphFunction, w: &[f64]) {
        let g = f.gradient(w).unwrap();
        let g_fd = fd_gradient(f, w, FD_GRADIENT_STEP).unwrap();
        assert!((&g - &g_fd).amax() <= 1e-6 * g.amax().max(1.0), "{g} vs {g_fd}");
        let h = f.hessian(w).unwrap();
        let h_fd = fd_hessian(f, w, FD_HESSIAN_STEP).unwrap();
        assert!((&h - &h_fd).amax() <= 1e-5 * h.amax().max(1.0), "{h} vs {h_fd}");
    }

    #[test]
    fn analytic_derivatives_agree_with_finite_differences() {
        let poly = Polynomial::new(1, vec![(vec![3, 1], 0.7), (vec![0, 2], -1.2), (vec![1, 0], 0.4)]).unwrap();
        assert_derivatives_match(&poly, &[0.3, -0.8]);
        let ell = EllipsoidSheet { axes: [1.5, 0.8, 1.1], center: [0.1, -0.2, 0.3], upper: false };
        assert_derivatives_match(&ell, &[0.4, 0.1]);
        let torus = TorusSheet { major: 2.0, minor: 0.5, center: [0.7, 0.0, 0.0], upper: true };
        assert_derivatives_match(&torus, &[0.7, 2.2]);
        assert_derivatives_match(&torus, &[-0.3, 1.6]);
        let q = Quadratic::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.3, -2.0])).unwrap();
        let (pulled, _) = ContactChart::Symmetric { scale: 1.0 }
            .to_darboux(Arc::new(q), BoxDomain::cube(2, 1.0))
            .unwrap();
        assert_derivatives_match(pulled.as_ref(), &[0.2, -0.5]);
    }

    #[test]
    fn sheets_are_undefined_near_the_rim() {
        let s = EllipsoidSheet { axes: [1.0; 3], center: [0.0; 3], upper: true };
        assert!(s.value(&[0.99999, 0.0]).is_none());
        assert!((s.value(&[0.0, 0.0]).unwrap() - 1.0).abs() < 1e-15);
        let g = GraphHypersurface::new(Arc::new(s.clone()), s.domain()).unwrap();
        assert!(matches!(g.value(&[2.0, 0.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn chart_points_round_trip() {
        let chart = ContactChart::Symmetric { scale: 1.5 };
        let p = chart.from_darboux(&[3.0, 2.0], 1.0);
        assert_eq!(p, vec![1.0, 2.0, 1.0 - 3.0]);
    }
}
