//! Declarative surface descriptions: JSON documents and a one-line
//! mini-language.
//!
//! ```text
//! sphere R [at x y z]
//! ellipsoid a b c [at x y z]
//! torus R r [at x y z]
//! quadratic a11 a12 ... a_{2n,2n} [within h]
//! polynomial n : c e_1 .. e_2n ; c e_1 .. e_2n ; ... [within h]
//! ```
//!
//! Charts are written `darboux`, `symmetric` or `symmetric:c`.

use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{
    contact_point_reports, BoxDomain, ClosedSurface, ContactChart, ContactPointReport, GraphHypersurface, Polynomial,
    Quadratic, SearchOptions,
};
use crate::{Error, Result};

const DEFAULT_HALF_WIDTH: f64 = 2.0;

fn default_half_width() -> f64 {
    DEFAULT_HALF_WIDTH
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialTerm {
    pub coefficient: f64,
    pub exponents: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SurfaceSpec {
    Sphere {
        radius: f64,
        #[serde(default)]
        center: [f64; 3],
    },
    Ellipsoid {
        axes: [f64; 3],
        #[serde(default)]
        center: [f64; 3],
    },
    Torus {
        major: f64,
        minor: f64,
        #[serde(default)]
        center: [f64; 3],
    },
    Quadratic {
        matrix: Vec<Vec<f64>>,
        #[serde(default = "default_half_width")]
        half_width: f64,
    },
    Polynomial {
        n: usize,
        terms: Vec<PolynomialTerm>,
        #[serde(default = "default_half_width")]
        half_width: f64,
    },
}

/// Contents of a surface description file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceDescription {
    pub surface: SurfaceSpec,
    #[serde(default)]
    pub chart: ContactChart,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_per_axis: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

impl SurfaceDescription {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::SurfaceSpec(e.to_string()))
    }

    pub fn build(&self) -> Result<Surface> {
        self.surface.build(self.chart)
    }

    pub fn search_options(&self, n: usize) -> SearchOptions {
        let base = SearchOptions::for_dimension(n);
        SearchOptions { grid_per_axis: self.grid_per_axis.unwrap_or(base.grid_per_axis), tol: self.tol.unwrap_or(base.tol) }
    }
}

/// A surface ready for contact point search.
#[derive(Debug, Clone)]
pub enum Surface {
    Graph { surface: GraphHypersurface, chart: ContactChart },
    Closed(ClosedSurface),
}

impl Surface {
    pub fn n(&self) -> usize {
        match self {
            Surface::Graph { surface, .. } => surface.n(),
            Surface::Closed(_) => 1,
        }
    }

    pub fn contact_points(&self, options: SearchOptions) -> Result<Vec<ContactPointReport>> {
        match self {
            Surface::Graph { surface, chart } => contact_point_reports(surface, *chart, options),
            Surface::Closed(c) => c.contact_points(options),
        }
    }
}

impl SurfaceSpec {
    pub fn build(&self, chart: ContactChart) -> Result<Surface> {
        match self {
            SurfaceSpec::Sphere { radius, center } => Ok(Surface::Closed(ClosedSurface::sphere(*radius, *center, chart)?)),
            SurfaceSpec::Ellipsoid { axes, center } => Ok(Surface::Closed(ClosedSurface::ellipsoid(*axes, *center, chart)?)),
            SurfaceSpec::Torus { major, minor, center } => {
                Ok(Surface::Closed(ClosedSurface::torus(*major, *minor, *center, chart)?))
            }
            SurfaceSpec::Quadratic { matrix, half_width } => {
                let size = matrix.len();
                if matrix.iter().any(|r| r.len() != size) {
                    return Err(Error::SurfaceSpec("quadratic matrix must be square".into()));
                }
                let m = DMatrix::from_fn(size, size, |i, j| matrix[i][j]);
                graph(Arc::new(Quadratic::new(m)?), size, *half_width, chart)
            }
            SurfaceSpec::Polynomial { n, terms, half_width } => {
                let terms = terms.iter().map(|t| (t.exponents.clone(), t.coefficient)).collect();
                graph(Arc::new(Polynomial::new(*n, terms)?), 2 * n, *half_width, chart)
            }
        }
    }
}

fn graph(f: Arc<dyn super::GraphFunction>, dim: usize, half_width: f64, chart: ContactChart) -> Result<Surface> {
    if !(half_width > 0.0) {
        return Err(Error::SurfaceSpec(format!("half width {half_width} must be positive")));
    }
    let (f, domain) = chart.to_darboux(f, BoxDomain::cube(dim, half_width))?;
    Ok(Surface::Graph { surface: GraphHypersurface::new(f, domain)?, chart })
}

fn number(token: &str) -> Result<f64> {
    token.parse::<f64>().map_err(|_| Error::SurfaceSpec(format!("expected a number, found {token:?}")))
}

fn numbers(tokens: &[&str]) -> Result<Vec<f64>> {
    tokens.iter().map(|t| number(t)).collect()
}

/// Splits off a trailing `keyword v1 .. vk` clause.
fn clause<'a>(tokens: &'a [&'a str], keyword: &str, arity: usize) -> Result<(&'a [&'a str], Option<Vec<f64>>)> {
    match tokens.iter().position(|t| *t == keyword) {
        None => Ok((tokens, None)),
        Some(i) if tokens.len() == i + 1 + arity => Ok((&tokens[..i], Some(numbers(&tokens[i + 1..])?))),
        Some(_) => Err(Error::SurfaceSpec(format!("`{keyword}` takes {arity} numbers"))),
    }
}

fn center(at: Option<Vec<f64>>) -> [f64; 3] {
    at.map(|v| [v[0], v[1], v[2]]).unwrap_or_default()
}

impl FromStr for SurfaceSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let Some((&head, rest)) = tokens.split_first() else {
            return Err(Error::SurfaceSpec("empty surface description".into()));
        };
        let exact = |args: &[&str], count: usize| -> Result<Vec<f64>> {
            if args.len() != count {
                return Err(Error::SurfaceSpec(format!("`{head}` takes {count} numbers, got {}", args.len())));
            }
            numbers(args)
        };
        match head {
            "sphere" => {
                let (args, at) = clause(rest, "at", 3)?;
                let v = exact(args, 1)?;
                Ok(SurfaceSpec::Sphere { radius: v[0], center: center(at) })
            }
            "ellipsoid" => {
                let (args, at) = clause(rest, "at", 3)?;
                let v = exact(args, 3)?;
                Ok(SurfaceSpec::Ellipsoid { axes: [v[0], v[1], v[2]], center: center(at) })
            }
            "torus" => {
                let (args, at) = clause(rest, "at", 3)?;
                let v = exact(args, 2)?;
                Ok(SurfaceSpec::Torus { major: v[0], minor: v[1], center: center(at) })
            }
            "quadratic" => {
                let (args, within) = clause(rest, "within", 1)?;
                let v = numbers(args)?;
                let size = (v.len() as f64).sqrt().round() as usize;
                if size == 0 || size * size != v.len() || size % 2 != 0 {
                    return Err(Error::SurfaceSpec(format!("{} entries do not form an even square matrix", v.len())));
                }
                let matrix = v.chunks(size).map(|r| r.to_vec()).collect();
                Ok(SurfaceSpec::Quadratic { matrix, half_width: within.map_or(DEFAULT_HALF_WIDTH, |w| w[0]) })
            }
            "polynomial" => {
                let body = text.trim_start().trim_start_matches("polynomial");
                let (n_text, terms_text) = body
                    .split_once(':')
                    .ok_or_else(|| Error::SurfaceSpec("polynomial needs `n : terms`".into()))?;
                let n: usize = n_text
                    .trim()
                    .parse()
                    .map_err(|_| Error::SurfaceSpec(format!("bad half-dimension {:?}", n_text.trim())))?;
                let all: Vec<&str> = terms_text.split_whitespace().collect();
                let (_, within) = clause(&all, "within", 1)?;
                let terms_text = terms_text.split("within").next().unwrap_or("");
                let terms = terms_text
                    .split(';')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| {
                        let parts: Vec<&str> = t.split_whitespace().collect();
                        if parts.len() != 2 * n + 1 {
                            return Err(Error::SurfaceSpec(format!("term {t:?} needs a coefficient and {} exponents", 2 * n)));
                        }
                        let exponents = parts[1..]
                            .iter()
                            .map(|e| e.parse::<u32>().map_err(|_| Error::SurfaceSpec(format!("bad exponent {e:?}"))))
                            .collect::<Result<Vec<_>>>()?;
                        Ok(PolynomialTerm { coefficient: number(parts[0])?, exponents })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(SurfaceSpec::Polynomial { n, terms, half_width: within.map_or(DEFAULT_HALF_WIDTH, |w| w[0]) })
            }
            other => Err(Error::SurfaceSpec(format!("unknown surface kind {other:?}"))),
        }
    }
}

impl FromStr for ContactChart {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        match text.trim() {
            "darboux" => Ok(ContactChart::Darboux),
            "symmetric" => Ok(ContactChart::Symmetric { scale: 1.0 }),
            other => match other.strip_prefix("symmetric:") {
                Some(c) => Ok(ContactChart::Symmetric { scale: number(c)? }),
                None => Err(Error::SurfaceSpec(format!("unknown chart {other:?}"))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_builtins() {
        assert_eq!("sphere 1.0".parse::<SurfaceSpec>().unwrap(), SurfaceSpec::Sphere { radius: 1.0, center: [0.0; 3] });
        assert_eq!(
            "torus 2 0.5 at 0.7 0 0".parse::<SurfaceSpec>().unwrap(),
            SurfaceSpec::Torus { major: 2.0, minor: 0.5, center: [0.7, 0.0, 0.0] }
        );
        let q = "quadratic 1 0 0 1 within 3".parse::<SurfaceSpec>().unwrap();
        assert_eq!(q, SurfaceSpec::Quadratic { matrix: vec![vec![1.0, 0.0], vec![0.0, 1.0]], half_width: 3.0 });
        let p = "polynomial 1 : 0.5 2 0 ; 0.5 0 2".parse::<SurfaceSpec>().unwrap();
        assert_eq!(
            p,
            SurfaceSpec::Polynomial {
                n: 1,
                terms: vec![
                    PolynomialTerm { coefficient: 0.5, exponents: vec![2, 0] },
                    PolynomialTerm { coefficient: 0.5, exponents: vec![0, 2] }
                ],
                half_width: DEFAULT_HALF_WIDTH
            }
        );
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "cube 1", "sphere", "sphere 1 2", "quadratic 1 2 3", "polynomial 1 : 1 2", "sphere 1 at 0 0"] {
            assert!(bad.parse::<SurfaceSpec>().is_err(), "{bad}");
        }
        assert!("symmetric:x".parse::<ContactChart>().is_err());
        assert_eq!("symmetric:2".parse::<ContactChart>().unwrap(), ContactChart::Symmetric { scale: 2.0 });
    }

    #[test]
    fn json_round_trip() {
        let d = SurfaceDescription {
            surface: SurfaceSpec::Torus { major: 2.0, minor: 0.5, center: [0.7, 0.0, 0.0] },
            chart: ContactChart::Symmetric { scale: 1.0 },
            grid_per_axis: Some(31),
            tol: None,
        };
        let text = serde_json::to_string(&d).unwrap();
        assert_eq!(SurfaceDescription::from_json(&text).unwrap(), d);
        let minimal = SurfaceDescription::from_json(r#"{"surface": {"kind": "sphere", "radius": 2.0}}"#).unwrap();
        assert_eq!(minimal.chart, ContactChart::Darboux);
    }

    #[test]
    fn paraboloid_description_has_one_point() {
        let s = "polynomial 1 : 0.5 2 0 ; 0.5 0 2".parse::<SurfaceSpec>().unwrap().build(ContactChart::Darboux).unwrap();
        let pts = s.contact_points(SearchOptions::for_dimension(1)).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].index, 1);
    }
}
