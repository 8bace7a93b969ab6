//! Numerical thresholds shared by the library, the CLI and the test suites.
//!
//! Every acceptance threshold lives here so a check never carries an
//! ad-hoc number.

/// Per-entry absolute tolerance for symmetry / antisymmetry validation.
pub const SHAPE: f64 = 1e-12;

/// Relative tolerance for `Pf(A)^2 = det(A)` and canonical-form reconstruction.
pub const PFAFFIAN_REL: f64 = 1e-10;
pub const RECONSTRUCTION_ABS: f64 = 1e-10;

/// Subspace column orthonormality.
pub const ORTHONORMAL: f64 = 1e-10;

/// Local areas: dynamical vs geometric formula.
pub const LOCAL_AREA_REL: f64 = 1e-9;

/// Below this `|det dB|` a tangency is treated as degenerate.
pub const DEGENERATE_DET: f64 = 1e-12;

/// Contact point root tolerance on `|B|`.
pub const ROOT_TOL: f64 = 1e-10;

/// Radius law comparison for the round sphere.
pub const RADIUS_LAW_ABS: f64 = 1e-8;

/// Quadrature against the Beta closed form.
pub const QUADRATURE_REL: f64 = 1e-8;

/// Convexity gap lower bound.
pub const CONVEXITY_GAP: f64 = -1e-9;

/// KS p-value below which a marginal is rejected.
pub const KS_P_MIN: f64 = 1e-4;

/// Standard errors allowed for Monte Carlo agreement.
pub const MC_SIGMAS: f64 = 3.0;

/// Smallest singular value of `[E | W]` accepted as transversal.
pub const TRANSVERSAL_MARGIN: f64 = 1e-8;

/// Allowed error of a fitted power-law exponent.
pub const EXPONENT_ABS: f64 = 0.05;

/// Relative residual above which a power-law fit is inconclusive.
pub const FIT_RESIDUAL_REL: f64 = 0.05;

/// Finite difference steps.
pub const FD_GRADIENT_STEP: f64 = 1e-5;
pub const FD_HESSIAN_STEP: f64 = 1e-4;

/// Wall-clock budgets in seconds.
pub const TABLES_SECONDS: f64 = 1.0;
pub const CHECK_ALL_SECONDS: f64 = 300.0;

/// Thresholds the verification suite decides with, overridable by name.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Thresholds {
    pub pfaffian_rel: f64,
    pub reconstruction_abs: f64,
    pub local_area_rel: f64,
    pub radius_law_abs: f64,
    pub quadrature_rel: f64,
    pub convexity_gap: f64,
    pub ks_p_min: f64,
    pub mc_sigmas: f64,
    pub exponent_abs: f64,
    pub fit_residual_rel: f64,
    pub tables_seconds: f64,
    pub check_all_seconds: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            pfaffian_rel: PFAFFIAN_REL,
            reconstruction_abs: RECONSTRUCTION_ABS,
            local_area_rel: LOCAL_AREA_REL,
            radius_law_abs: RADIUS_LAW_ABS,
            quadrature_rel: QUADRATURE_REL,
            convexity_gap: CONVEXITY_GAP,
            ks_p_min: KS_P_MIN,
            mc_sigmas: MC_SIGMAS,
            exponent_abs: EXPONENT_ABS,
            fit_residual_rel: FIT_RESIDUAL_REL,
            tables_seconds: TABLES_SECONDS,
            check_all_seconds: CHECK_ALL_SECONDS,
        }
    }
}

impl Thresholds {
    /// Defaults with the named entries replaced.
    pub fn with_overrides(overrides: &std::collections::BTreeMap<String, f64>) -> crate::Result<Self> {
        let mut t = Self::default();
        for (name, &value) in overrides {
            let slot = match name.as_str() {
                "pfaffian_rel" => &mut t.pfaffian_rel,
                "reconstruction_abs" => &mut t.reconstruction_abs,
                "local_area_rel" => &mut t.local_area_rel,
                "radius_law_abs" => &mut t.radius_law_abs,
                "quadrature_rel" => &mut t.quadrature_rel,
                "convexity_gap" => &mut t.convexity_gap,
                "ks_p_min" => &mut t.ks_p_min,
                "mc_sigmas" => &mut t.mc_sigmas,
                "exponent_abs" => &mut t.exponent_abs,
                "fit_residual_rel" => &mut t.fit_residual_rel,
                "tables_seconds" => &mut t.tables_seconds,
                "check_all_seconds" => &mut t.check_all_seconds,
                other => return Err(crate::Error::Validation(format!("unknown tolerance {other:?}"))),
            };
            *slot = value;
        }
        Ok(t)
    }
}

/// Gamma-function identities evaluated in floating point.
pub const GAMMA_REL: f64 = 1e-12;
