use nalgebra::DMatrix;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{find_contact_points, linearized_field, ContactChart, GraphHypersurface, SearchOptions, SecondFundamentalPair};
use crate::matnum::{binomial, compound_trace, mixed_discriminant, standard_j, SymMatrix};
use crate::tolerances::DEGENERATE_DET;
use crate::{Error, Result};

fn choose(n: usize, k: usize) -> f64 {
    binomial(n as u64, k as u64).to_f64().unwrap_or(f64::NAN)
}

fn check_degree(size: usize, k: usize) -> Result<()> {
    if size % 2 != 0 {
        return Err(Error::Dimension(format!("odd size {size}")));
    }
    if k > size {
        return Err(Error::Domain(format!("degree {k} exceeds {size}")));
    }
    Ok(())
}

/// `tr wedge^{2n-k} dB / |det dB|`.
pub fn local_area_dynamical(db: &DMatrix<f64>, k: usize) -> Result<f64> {
    check_degree(db.nrows(), k)?;
    let det = db.determinant();
    if det.abs() < DEGENERATE_DET {
        return Err(Error::DegenerateTangency { point: vec![], det });
    }
    Ok(compound_trace(db, db.nrows() - k)? / det.abs())
}

/// `C(2n, k) D((h - s)[2n-k], J[k]) / |det(h - s)|`.
pub fn local_area_geometric(pair: &SecondFundamentalPair, k: usize) -> Result<f64> {
    let a = pair.difference();
    let size = a.nrows();
    check_degree(size, k)?;
    let det = a.determinant();
    if det.abs() < DEGENERATE_DET {
        return Err(Error::DegenerateTangency { point: vec![], det });
    }
    let j = standard_j(size / 2);
    Ok(choose(size, k) * mixed_discriminant(&[(&a, size - k), (&j, k)])? / det.abs())
}

/// Odd-degree local area from the symmetric data alone.
///
/// Requires the antisymmetric part of `h` to be `gamma J` for a scalar
/// `gamma`. With `X = s - sym(h)` and `m = 2n - k` this evaluates
/// `C(2n, k) |det(h - s)|^-1 sum_{i even} C(m, i) (-1)^i gamma^{m-i} D(X[i], J[2n-i])`,
/// which for `gamma = -1` reads
/// `(-1)^k C(2n, k) |det A|^-1 sum_i C(2n-k, 2i) D(X[2i], J[2n-2i])`.
pub fn odd_area_relation(pair: &SecondFundamentalPair, k: usize) -> Result<f64> {
    let size = pair.s.size();
    check_degree(size, k)?;
    if k % 2 == 0 {
        return Err(Error::Contract(format!("degree {k} is even")));
    }
    let j = standard_j(size / 2);
    let skew = (&pair.h - pair.h.transpose()) * 0.5;
    let gamma = skew.dot(&j) / j.dot(&j);
    let defect = (&skew - &j * gamma).amax();
    if defect > 1e-10 * skew.amax().max(1.0) {
        return Err(Error::Contract(format!("antisymmetric part of h is not a multiple of J (defect {defect:e})")));
    }
    let det = pair.difference().determinant();
    if det.abs() < DEGENERATE_DET {
        return Err(Error::DegenerateTangency { point: vec![], det });
    }
    let x = pair.s.as_matrix() - SymMatrix::symmetric_part(&pair.h).as_matrix();
    let m = size - k;
    let mut sum = 0.0;
    for i in (0..=m).step_by(2) {
        let d = mixed_discriminant(&[(&x, i), (&j, size - i)])?;
        sum += choose(m, i) * gamma.powi((m - i) as i32) * d;
    }
    Ok(choose(size, k) * sum / det.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContactKind {
    Elliptic,
    Hyperbolic,
}

/// One contact point with its linearization and local areas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContactPointReport {
    /// Graph coordinates in the Darboux chart.
    pub p: Vec<f64>,
    /// `(x, y, z)` in the chart the surface was described in.
    pub chart_point: Vec<f64>,
    pub db: Vec<Vec<f64>>,
    pub det_db: f64,
    pub index: i8,
    pub kind: ContactKind,
    /// Degree `k = 0..=2n`, built on `h - s`.
    pub local_areas: Vec<f64>,
    /// Same quantity built on `s - h`; differs from `local_areas` by `(-1)^k`.
    pub local_areas_s_minus_h: Vec<f64>,
    pub inverse_abs_det_h_minus_s: f64,
    /// `None` when `Hess f` is singular.
    pub inverse_abs_det_s: Option<f64>,
}

impl ContactPointReport {
    pub fn at(surface: &GraphHypersurface, chart: ContactChart, p: &[f64]) -> Result<Self> {
        let db = linearized_field(surface, p)?;
        let det = db.determinant();
        if det.abs() < DEGENERATE_DET {
            return Err(Error::DegenerateTangency { point: p.to_vec(), det });
        }
        let size = db.nrows();
        let local_areas = (0..=size).map(|k| local_area_dynamical(&db, k)).collect::<Result<Vec<_>>>()?;
        let local_areas_s_minus_h =
            local_areas.iter().enumerate().map(|(k, v)| if k % 2 == 0 { *v } else { -v }).collect();
        let pair = SecondFundamentalPair::at_contact_point(surface, p)?;
        let det_s = pair.s.as_matrix().determinant();
        let z = surface.value(p)?;
        Ok(Self {
            p: p.to_vec(),
            chart_point: chart.from_darboux(p, z),
            db: db.row_iter().map(|r| r.iter().copied().collect()).collect(),
            det_db: det,
            index: if det > 0.0 { 1 } else { -1 },
            kind: if det > 0.0 { ContactKind::Elliptic } else { ContactKind::Hyperbolic },
            local_areas,
            local_areas_s_minus_h,
            inverse_abs_det_h_minus_s: 1.0 / pair.difference().determinant().abs(),
            inverse_abs_det_s: (det_s.abs() >= DEGENERATE_DET).then(|| 1.0 / det_s.abs()),
        })
    }
}

/// Contact point reports of a graph hypersurface.
pub fn contact_point_reports(
    surface: &GraphHypersurface,
    chart: ContactChart,
    options: SearchOptions,
) -> Result<Vec<ContactPointReport>> {
    let found = find_contact_points(surface, options.grid_per_axis, options.tol)?;
    found.points.iter().map(|p| ContactPointReport::at(surface, chart, p)).collect()
}

/// `phi_k(F)`: sum of the local areas of degree `k` over all contact points.
pub fn hypersurface_valuation(surface: &GraphHypersurface, k: usize, options: SearchOptions) -> Result<f64> {
    let reports = contact_point_reports(surface, ContactChart::Darboux, options)?;
    sum_degree(&reports, k)
}

pub(crate) fn sum_degree(reports: &[ContactPointReport], k: usize) -> Result<f64> {
    reports
        .iter()
        .map(|r| r.local_areas.get(k).copied().ok_or_else(|| Error::Domain(format!("degree {k}"))))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn top_degree_is_inverse_determinant() {
        let db = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, -1.0, 3.0]);
        assert!((local_area_dynamical(&db, 2).unwrap() - 1.0 / 7.0).abs() < 1e-15);
        assert!((local_area_dynamical(&db, 0).unwrap() - 1.0).abs() < 1e-15);
        assert!((local_area_dynamical(&db, 1).unwrap() - 5.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn half_identity_gives_scaled_binomials() {
        // dB = I gives C(2m, k) per point, dB = I/2 gives 2^k C(2m, k)
        for m in 1..=3usize {
            let size = 2 * m;
            for k in (0..=size).step_by(2) {
                let id = DMatrix::<f64>::identity(size, size);
                let binom = choose(size, k);
                assert!((local_area_dynamical(&id, k).unwrap() - binom).abs() < 1e-10);
                let half = local_area_dynamical(&(id * 0.5), k).unwrap();
                assert!((half - binom * 2f64.powi(k as i32)).abs() < 1e-9 * half);
            }
        }
    }

    #[test]
    fn flat_pair_is_degenerate() {
        let s = SymMatrix::new(DMatrix::zeros(2, 2)).unwrap();
        let pair = SecondFundamentalPair::new(s, SecondFundamentalPair::contact_form(1)).unwrap();
        assert!(matches!(local_area_geometric(&pair, 2), Err(Error::DegenerateTangency { .. })));
    }

    #[test]
    fn degree_zero_is_the_sign() {
        let s = SymMatrix::new(DMatrix::from_row_slice(2, 2, &[0.5, 0.2, 0.2, -1.0])).unwrap();
        let pair = SecondFundamentalPair::new(s, SecondFundamentalPair::contact_form(1)).unwrap();
        let sign = pair.difference().determinant().signum();
        assert!((local_area_geometric(&pair, 0).unwrap() - sign).abs() < 1e-14);
    }

    #[test]
    fn odd_relation_contract() {
        let s = SymMatrix::new(DMatrix::identity(2, 2)).unwrap();
        let pair = SecondFundamentalPair::new(s.clone(), SecondFundamentalPair::contact_form(1)).unwrap();
        assert!(matches!(odd_area_relation(&pair, 2), Err(Error::Contract(_))));
        let mut h = DMatrix::zeros(4, 4);
        h[(0, 1)] = 1.0;
        let s4 = SymMatrix::new(DMatrix::identity(4, 4)).unwrap();
        let twisted = SecondFundamentalPair::new(s4, h).unwrap();
        assert!(matches!(odd_area_relation(&twisted, 1), Err(Error::Contract(_))));
    }
}
