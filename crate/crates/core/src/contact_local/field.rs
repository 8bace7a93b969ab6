use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::GraphHypersurface;
use crate::matnum::{standard_j, SymMatrix};
use crate::tolerances::{DEGENERATE_DET, ROOT_TOL};
use crate::{Error, Result};

/// Zero set of this field is the set of contact points:
/// `B(w) = (x, 0) + J grad f(w)`.
pub fn characteristic_field(surface: &GraphHypersurface, w: &[f64]) -> Result<DVector<f64>> {
    let n = surface.n();
    let mut b = standard_j(n) * surface.gradient(w)?;
    for i in 0..n {
        b[i] += w[i];
    }
    Ok(b)
}

/// `dB(w) = [[I, 0], [0, 0]] + J Hess f(w)`.
pub fn linearized_field(surface: &GraphHypersurface, w: &[f64]) -> Result<DMatrix<f64>> {
    let n = surface.n();
    let mut db = standard_j(n) * surface.hessian(w)?;
    for i in 0..n {
        db[(i, i)] += 1.0;
    }
    Ok(db)
}

/// Second fundamental forms of the hypersurface (`s`) and of the contact
/// distribution (`h`) in a common frame at a contact point.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondFundamentalPair {
    pub s: SymMatrix,
    pub h: DMatrix<f64>,
}

impl SecondFundamentalPair {
    pub fn new(s: SymMatrix, h: DMatrix<f64>) -> Result<Self> {
        if h.nrows() != s.size() || h.ncols() != s.size() || s.size() % 2 != 0 {
            return Err(Error::Dimension(format!("s is {0}x{0}, h is {1}x{2}", s.size(), h.nrows(), h.ncols())));
        }
        Ok(Self { s, h })
    }

    /// `h = [[0, 0], [I, 0]]` of the Darboux chart.
    pub fn contact_form(n: usize) -> DMatrix<f64> {
        let mut h = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            h[(n + i, i)] = 1.0;
        }
        h
    }

    /// Pair at a contact point of a graph: `s = Hess f(p)`, `h` from [`Self::contact_form`].
    pub fn at_contact_point(surface: &GraphHypersurface, p: &[f64]) -> Result<Self> {
        let s = SymMatrix::symmetric_part(&surface.hessian(p)?);
        Ok(Self { h: Self::contact_form(surface.n()), s })
    }

    pub fn n(&self) -> usize {
        self.s.size() / 2
    }

    /// `h - s`.
    pub fn difference(&self) -> DMatrix<f64> {
        &self.h - self.s.as_matrix()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub grid_per_axis: usize,
    pub tol: f64,
}

impl SearchOptions {
    /// Grid fine enough in two dimensions, bounded node count above.
    pub fn for_dimension(n: usize) -> Self {
        let grid_per_axis = match n {
            1 => 41,
            2 => 11,
            _ => 6,
        };
        Self { grid_per_axis, tol: ROOT_TOL }
    }
}

/// A grid cell whose seed looked like it contained a root but Newton failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchWarning {
    pub cell: Vec<f64>,
    pub residual: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ContactSearch {
    /// Sorted lexicographically.
    pub points: Vec<Vec<f64>>,
    pub warnings: Vec<SearchWarning>,
}

const MAX_NEWTON: usize = 50;
const MAX_HALVINGS: usize = 30;

/// Newton iteration on `B(w) = 0` from every grid node where `|B|` is a
/// local minimum over its axis neighbours.
///
/// Roots closer than `10 tol` are merged. A seed whose residual could hide a
/// root within one grid step but fails to converge is reported as a warning.
/// A root with singular `dB` is a degenerate tangency.
pub fn find_contact_points(surface: &GraphHypersurface, grid_per_axis: usize, tol: f64) -> Result<ContactSearch> {
    if grid_per_axis < 4 {
        return Err(Error::Domain(format!("grid_per_axis = {grid_per_axis} must be at least 4")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance {tol} must be positive")));
    }
    let dim = surface.domain().dim();
    let nodes = grid_per_axis.checked_pow(dim as u32).filter(|&c| c <= 4_000_000).ok_or_else(|| {
        Error::Domain(format!("{grid_per_axis}^{dim} grid nodes is too many"))
    })?;
    let step: Vec<f64> = (0..dim)
        .map(|i| (surface.domain().upper[i] - surface.domain().lower[i]) / (grid_per_axis - 1) as f64)
        .collect();
    let point_of = |index: usize| -> Vec<f64> {
        let mut rem = index;
        (0..dim)
            .map(|i| {
                let c = rem % grid_per_axis;
                rem /= grid_per_axis;
                surface.domain().lower[i] + c as f64 * step[i]
            })
            .collect()
    };
    let residuals: Vec<Option<f64>> = (0..nodes)
        .map(|i| characteristic_field(surface, &point_of(i)).ok().map(|b| b.norm()))
        .collect();

    let mut search = ContactSearch::default();
    let mut roots: Vec<Vec<f64>> = Vec::new();
    let mut stride = 1;
    let strides: Vec<usize> = (0..dim)
        .map(|_| {
            let s = stride;
            stride *= grid_per_axis;
            s
        })
        .collect();
    for index in 0..nodes {
        let Some(r) = residuals[index] else { continue };
        let is_min = (0..dim).all(|axis| {
            let c = (index / strides[axis]) % grid_per_axis;
            let below = (c > 0).then(|| residuals[index - strides[axis]]).flatten();
            let above = (c + 1 < grid_per_axis).then(|| residuals[index + strides[axis]]).flatten();
            below.is_none_or(|v| r <= v) && above.is_none_or(|v| r <= v)
        });
        if !is_min {
            continue;
        }
        let seed = point_of(index);
        match newton(surface, &seed, tol) {
            Ok(root) => {
                if !roots.iter().any(|q| distance(q, &root) < 10.0 * tol) {
                    roots.push(root);
                }
            }
            Err(reason) => {
                let reach = linearized_field(surface, &seed)
                    .map(|db| db.norm() * step.iter().map(|h| h * h).sum::<f64>().sqrt())
                    .unwrap_or(f64::INFINITY);
                if r <= reach {
                    search.warnings.push(SearchWarning { cell: seed, residual: r, reason });
                }
            }
        }
    }
    roots.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    for root in &roots {
        let det = linearized_field(surface, root)?.determinant();
        if det.abs() < DEGENERATE_DET {
            return Err(Error::DegenerateTangency { point: root.clone(), det });
        }
    }
    search.points = roots;
    Ok(search)
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn newton(surface: &GraphHypersurface, seed: &[f64], tol: f64) -> std::result::Result<Vec<f64>, String> {
    let mut w = seed.to_vec();
    let mut b = characteristic_field(surface, &w).map_err(|e| e.to_string())?;
    for _ in 0..MAX_NEWTON {
        if b.norm() < tol {
            return Ok(w);
        }
        let db = linearized_field(surface, &w).map_err(|e| e.to_string())?;
        let Some(delta) = db.lu().solve(&b) else {
            return Err("singular linearization".into());
        };
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..MAX_HALVINGS {
            let trial: Vec<f64> = w.iter().zip(delta.iter()).map(|(x, d)| x - t * d).collect();
            if let Ok(bt) = characteristic_field(surface, &trial) {
                if bt.norm() < b.norm() {
                    w = trial;
                    b = bt;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            return if b.norm() < tol { Ok(w) } else { Err(format!("stalled at |B| = {:e}", b.norm())) };
        }
    }
    if b.norm() < tol {
        Ok(w)
    } else {
        Err(format!("no convergence in {MAX_NEWTON} steps, |B| = {:e}", b.norm()))
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::contact_local::{BoxDomain, FnGraph, Quadratic};

    fn flat(n: usize) -> GraphHypersurface {
        GraphHypersurface::new(Arc::new(FnGraph::new(n, |_| 0.0)), BoxDomain::cube(2 * n, 1.0)).unwrap()
    }

    #[test]
    fn flat_graph_field_and_linearization() {
        let s = flat(1);
        let b = characteristic_field(&s, &[0.3, -0.7]).unwrap();
        assert!((b - DVector::from_vec(vec![0.3, 0.0])).amax() < 1e-12);
        let db = linearized_field(&s, &[0.0, 0.0]).unwrap();
        assert!((db - DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0])).amax() < 1e-6);
        assert!(characteristic_field(&s, &[3.0, 0.0]).is_err());
    }

    #[test]
    fn flat_graph_is_degenerate() {
        // every point of the y-axis is a contact point of z = 0
        assert!(matches!(find_contact_points(&flat(1), 9, 1e-10), Err(Error::DegenerateTangency { .. })));
    }

    #[test]
    fn round_paraboloid_linearization() {
        let q = Quadratic::new(DMatrix::identity(2, 2)).unwrap();
        let s = GraphHypersurface::new(Arc::new(q), BoxDomain::cube(2, 2.0)).unwrap();
        let db = linearized_field(&s, &[0.0, 0.0]).unwrap();
        assert_eq!(db, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, 1.0, 0.0]));
        let found = find_contact_points(&s, 8, 1e-10).unwrap();
        assert_eq!(found.points.len(), 1);
        assert!(found.points[0].iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn rejects_bad_options() {
        assert!(find_contact_points(&flat(1), 3, 1e-10).is_err());
        assert!(find_contact_points(&flat(1), 8, 0.0).is_err());
    }
}
