use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::grassmann_mc::{RunningMoments, Subspace};
use crate::matnum::ball_volume;
use crate::tolerances::{ORTHONORMAL, TRANSVERSAL_MARGIN};
use crate::{Error, Result};

/// Oriented affine flat `direction + offset` with the offset orthogonal to
/// the direction.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineFlat {
    direction: Subspace,
    offset: DVector<f64>,
}

impl AffineFlat {
    pub fn new(direction: Subspace, offset: DVector<f64>) -> Result<Self> {
        if offset.len() != direction.ambient_dim() {
            return Err(Error::Dimension(format!(
                "offset has {} coordinates, ambient space has {}",
                offset.len(),
                direction.ambient_dim()
            )));
        }
        let along = direction.basis().transpose() * &offset;
        if along.amax() > ORTHONORMAL {
            return Err(Error::Validation(format!("offset not orthogonal to direction (defect {:e})", along.amax())));
        }
        Ok(Self { direction, offset })
    }

    /// Flat with the given direction through `point`.
    pub fn through(direction: Subspace, point: &DVector<f64>) -> Result<Self> {
        if point.len() != direction.ambient_dim() {
            return Err(Error::Dimension("point and direction live in different spaces".into()));
        }
        let b = direction.basis();
        let offset = point - b * (b.transpose() * point);
        Ok(Self { direction, offset })
    }

    pub fn direction(&self) -> &Subspace {
        &self.direction
    }

    pub fn offset(&self) -> &DVector<f64> {
        &self.offset
    }

    pub fn reversed(&self) -> Self {
        Self { direction: self.direction.reversed(), offset: self.offset.clone() }
    }
}

/// Euclidean disk of the given radius in an oriented plane through `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarDisk {
    plane: Subspace,
    radius: f64,
    center: DVector<f64>,
}

impl PlanarDisk {
    pub fn new(plane: Subspace, radius: f64, center: Option<DVector<f64>>) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Validation(format!("disk radius {radius} must be positive")));
        }
        let center = center.unwrap_or_else(|| DVector::zeros(plane.ambient_dim()));
        if center.len() != plane.ambient_dim() {
            return Err(Error::Dimension("disk center and plane live in different spaces".into()));
        }
        Ok(Self { plane, radius, center })
    }

    pub fn unit(plane: Subspace) -> Self {
        let center = DVector::zeros(plane.ambient_dim());
        Self { plane, radius: 1.0, center }
    }

    pub fn plane(&self) -> &Subspace {
        &self.plane
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn center(&self) -> &DVector<f64> {
        &self.center
    }

    pub fn reversed(&self) -> Self {
        Self { plane: self.plane.reversed(), ..self.clone() }
    }

    /// Euclidean area of the disk.
    pub fn volume(&self) -> f64 {
        ball_volume(self.plane.dim()) * self.radius.powi(self.plane.dim() as i32)
    }
}

/// Columns of `a` followed by the columns of `b`.
pub(crate) fn joined(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    m.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
    m.view_mut((0, a.ncols()), (b.nrows(), b.ncols())).copy_from(b);
    m
}

/// Checks complementary dimensions and the transversality margin, returning
/// the joint basis matrix.
pub(crate) fn transversal_frame(direction: &Subspace, plane: &Subspace) -> Result<DMatrix<f64>> {
    let ambient = direction.ambient_dim();
    if plane.ambient_dim() != ambient || direction.dim() + plane.dim() != ambient {
        return Err(Error::Dimension(format!(
            "dimensions {} and {} are not complementary in R^{ambient}",
            direction.dim(),
            plane.dim()
        )));
    }
    let frame = joined(direction.basis(), plane.basis());
    let smallest = frame.singular_values().min();
    if smallest < TRANSVERSAL_MARGIN {
        return Err(Error::Transversality(smallest));
    }
    Ok(frame)
}

/// Oriented intersection index of the flat with the disk: the sign of
/// `det [direction | plane]` when they meet inside the disk, else 0.
pub fn intersection_index(e: &AffineFlat, d: &PlanarDisk) -> Result<i8> {
    let frame = transversal_frame(&e.direction, &d.plane)?;
    let lu = frame.clone().lu();
    let coords = lu
        .solve(&(&d.center - &e.offset))
        .ok_or(Error::Transversality(0.0))?;
    let in_plane = coords.rows(e.direction.dim(), d.plane.dim()).norm();
    if in_plane > d.radius {
        return Ok(0);
    }
    Ok(if lu.determinant() > 0.0 { 1 } else { -1 })
}

/// Signed volume of the disk projected onto the orthogonal complement of
/// `direction`, signed by the relative orientation of the pair.
pub fn signed_projection_volume(direction: &Subspace, d: &PlanarDisk) -> Result<f64> {
    let frame = transversal_frame(direction, &d.plane)?;
    Ok(frame.determinant() * d.volume())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectedVolumeCheck {
    /// Offset integral of the intersection index, estimated over a box.
    pub integral: f64,
    pub std_error: f64,
    pub signed_volume: f64,
    pub residual: f64,
}

/// Compares the integral over offsets `x` of `I(E + x, D)` with the signed
/// projected volume of `D`, sampling offsets uniformly in a box around the
/// projected disk.
pub fn projected_volume_identity_check<R: Rng + ?Sized>(
    e: &Subspace,
    d: &PlanarDisk,
    offsets: usize,
    rng: &mut R,
) -> Result<ProjectedVolumeCheck> {
    let signed_volume = signed_projection_volume(e, d)?;
    let normal = e.orthogonal_complement();
    let centre = normal.basis().transpose() * d.center();
    let dim = normal.dim();
    let box_volume = (2.0 * d.radius).powi(dim as i32);
    let mut acc = RunningMoments::default();
    for _ in 0..offsets {
        let local = DVector::from_fn(dim, |i, _| centre[i] + d.radius * rng.random_range(-1.0..1.0));
        let flat = AffineFlat::new(e.clone(), normal.basis() * local)?;
        acc.push(box_volume * f64::from(intersection_index(&flat, d)?));
    }
    let integral = acc.mean();
    Ok(ProjectedVolumeCheck {
        integral,
        std_error: acc.std_error(),
        signed_volume,
        residual: (integral - signed_volume).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn skew_complement_pair() -> (Subspace, Subspace) {
        (Subspace::coordinate(4, &[0, 2]).unwrap(), Subspace::coordinate(4, &[1, 3]).unwrap())
    }

    #[test]
    fn flat_through_centre_has_sign_of_frame() {
        let (e, w) = skew_complement_pair();
        let d = PlanarDisk::unit(w);
        let flat = AffineFlat::new(e.clone(), DVector::zeros(4)).unwrap();
        let frame_sign = joined(e.basis(), d.plane().basis()).determinant().signum() as i8;
        assert_eq!(intersection_index(&flat, &d).unwrap(), frame_sign);
        let standard = AffineFlat::new(Subspace::coordinate(4, &[0, 1]).unwrap(), DVector::zeros(4)).unwrap();
        let disk = PlanarDisk::unit(Subspace::coordinate(4, &[2, 3]).unwrap());
        assert_eq!(intersection_index(&standard, &disk).unwrap(), 1);
    }

    #[test]
    fn far_offset_misses() {
        let (e, w) = skew_complement_pair();
        let d = PlanarDisk::new(w, 0.5, None).unwrap();
        let flat = AffineFlat::new(e, DVector::from_vec(vec![0.0, 0.6, 0.0, 0.0])).unwrap();
        assert_eq!(intersection_index(&flat, &d).unwrap(), 0);
    }

    #[test]
    fn index_is_odd_under_reversal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let e = Subspace::random(4, 2, &mut rng);
            let d = PlanarDisk::unit(Subspace::random(4, 2, &mut rng));
            let flat = AffineFlat::through(e, &DVector::from_fn(4, |_, _| rng.random_range(-0.5..0.5))).unwrap();
            let i = intersection_index(&flat, &d).unwrap();
            assert_eq!(intersection_index(&flat.reversed(), &d).unwrap(), -i);
            assert_eq!(intersection_index(&flat, &d.reversed()).unwrap(), -i);
        }
    }

    #[test]
    fn offset_must_be_orthogonal() {
        let e = Subspace::coordinate(4, &[0, 1]).unwrap();
        assert!(AffineFlat::new(e, DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn degenerate_pair_is_rejected() {
        let e = Subspace::coordinate(4, &[0, 1]).unwrap();
        let d = PlanarDisk::unit(Subspace::coordinate(4, &[1, 2]).unwrap());
        let flat = AffineFlat::new(e, DVector::zeros(4)).unwrap();
        assert!(matches!(intersection_index(&flat, &d), Err(Error::Transversality(_))));
    }

    #[test]
    fn projected_volume_matches_singular_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let e = Subspace::random(4, 2, &mut rng);
        let d = PlanarDisk::unit(Subspace::random(4, 2, &mut rng));
        let normal = e.orthogonal_complement();
        let product: f64 = (normal.basis().transpose() * d.plane().basis()).singular_values().iter().product();
        let v = signed_projection_volume(&e, &d).unwrap();
        assert!((v.abs() - product * std::f64::consts::PI).abs() < 1e-12);
    }
}
