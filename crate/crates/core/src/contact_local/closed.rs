use std::sync::Arc;

use super::{contact_point_reports, ContactChart, ContactPointReport, EllipsoidSheet, GraphHypersurface, SearchOptions, TorusSheet};
use super::{areas::sum_degree, BoxDomain, GraphFunction};
use crate::{Error, Result};

/// Closed surface in contact `R^3` covered by graph sheets `z = f(x, y)`.
///
/// Contact points have non-vertical tangent planes, so the sheets only need
/// to cover the surface away from its vertical tangencies.
#[derive(Debug, Clone)]
pub struct ClosedSurface {
    pub name: String,
    pub chart: ContactChart,
    sheets: Vec<GraphHypersurface>,
}

impl ClosedSurface {
    /// Sheets are given in `chart` coordinates.
    pub fn from_sheets(
        name: impl Into<String>,
        chart: ContactChart,
        sheets: Vec<(Arc<dyn GraphFunction>, BoxDomain)>,
    ) -> Result<Self> {
        let sheets = sheets
            .into_iter()
            .map(|(f, domain)| {
                if f.n() != 1 {
                    return Err(Error::Dimension("closed surfaces live in R^3".into()));
                }
                let (f, domain) = chart.to_darboux(f, domain)?;
                GraphHypersurface::new(f, domain)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { name: name.into(), chart, sheets })
    }

    pub fn ellipsoid(axes: [f64; 3], center: [f64; 3], chart: ContactChart) -> Result<Self> {
        if axes.iter().any(|a| !(*a > 0.0)) {
            return Err(Error::Validation(format!("ellipsoid axes {axes:?} must be positive")));
        }
        let sheets = [true, false]
            .into_iter()
            .map(|upper| {
                let s = EllipsoidSheet { axes, center, upper };
                let d = s.domain();
                (Arc::new(s) as Arc<dyn GraphFunction>, d)
            })
            .collect();
        Self::from_sheets(format!("ellipsoid {} {} {}", axes[0], axes[1], axes[2]), chart, sheets)
    }

    pub fn sphere(radius: f64, center: [f64; 3], chart: ContactChart) -> Result<Self> {
        let mut s = Self::ellipsoid([radius; 3], center, chart)?;
        s.name = format!("sphere {radius}");
        Ok(s)
    }

    /// Torus of revolution about the vertical line through `center`.
    pub fn torus(major: f64, minor: f64, center: [f64; 3], chart: ContactChart) -> Result<Self> {
        if !(minor > 0.0 && major > minor) {
            return Err(Error::Validation(format!("torus radii {major}, {minor} need major > minor > 0")));
        }
        let sheets = [true, false]
            .into_iter()
            .map(|upper| {
                let s = TorusSheet { major, minor, center, upper };
                let d = s.domain();
                (Arc::new(s) as Arc<dyn GraphFunction>, d)
            })
            .collect();
        Self::from_sheets(format!("torus {major} {minor}"), chart, sheets)
    }

    pub fn sheets(&self) -> &[GraphHypersurface] {
        &self.sheets
    }

    /// All contact points, merged across overlapping sheets.
    pub fn contact_points(&self, options: SearchOptions) -> Result<Vec<ContactPointReport>> {
        let mut out: Vec<ContactPointReport> = Vec::new();
        for sheet in &self.sheets {
            for r in contact_point_reports(sheet, self.chart, options)? {
                let duplicate = out.iter().any(|q| {
                    q.chart_point.iter().zip(&r.chart_point).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt() < 1e-7
                });
                if !duplicate {
                    out.push(r);
                }
            }
        }
        Ok(out)
    }

    pub fn valuation(&self, k: usize, options: SearchOptions) -> Result<f64> {
        sum_degree(&self.contact_points(options)?, k)
    }
}

/// Sum of contact indices `sign det dB`; the Euler characteristic for a
/// normally transversal surface.
pub fn euler_index_sum(surface: &ClosedSurface, options: SearchOptions) -> Result<i64> {
    Ok(surface.contact_points(options)?.iter().map(|r| r.index as i64).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_poles_in_darboux_chart() {
        let s = ClosedSurface::sphere(1.5, [0.0; 3], ContactChart::Darboux).unwrap();
        let pts = s.contact_points(SearchOptions::for_dimension(1)).unwrap();
        assert_eq!(pts.len(), 2);
        for p in &pts {
            assert!(p.p.iter().all(|v| v.abs() < 1e-9));
            assert!((p.chart_point[2].abs() - 1.5).abs() < 1e-9);
            // dB = [[1, 1/R], [-1/R, 0]] up to the sheet sign, det = 1/R^2
            assert!((p.det_db - 1.0 / 2.25).abs() < 1e-9);
        }
        assert_eq!(euler_index_sum(&s, SearchOptions::for_dimension(1)).unwrap(), 2);
    }

    #[test]
    fn invalid_shapes() {
        assert!(ClosedSurface::torus(0.5, 1.0, [0.0; 3], ContactChart::Darboux).is_err());
        assert!(ClosedSurface::ellipsoid([1.0, -1.0, 1.0], [0.0; 3], ContactChart::Darboux).is_err());
    }
}
