//! Points of the open unit disk and of its boundary circle, together with the
//! pseudo-hyperbolic metric and the involutive disk automorphisms.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point `z` with `|z| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint", into = "RawPoint")]
pub struct DiskPoint(Complex64);

#[derive(Serialize, Deserialize)]
struct RawPoint {
    re: f64,
    im: f64,
}

impl TryFrom<RawPoint> for DiskPoint {
    type Error = Error;

    fn try_from(raw: RawPoint) -> Result<Self> {
        DiskPoint::new(raw.re, raw.im)
    }
}

impl From<DiskPoint> for RawPoint {
    fn from(p: DiskPoint) -> Self {
        RawPoint { re: p.0.re, im: p.0.im }
    }
}

impl DiskPoint {
    pub const ORIGIN: DiskPoint = DiskPoint(Complex64::new(0.0, 0.0));

    pub fn new(re: f64, im: f64) -> Result<Self> {
        Self::from_complex(Complex64::new(re, im))
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        if z.re.is_finite() && z.im.is_finite() && z.norm_sqr() < 1.0 {
            Ok(DiskPoint(z))
        } else {
            Err(Error::PointOutsideDisk { re: z.re, im: z.im })
        }
    }

    /// `r e^{iθ}`; fails unless `0 <= r < 1`.
    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::PointOutsideDisk {
                re: r * theta.cos(),
                im: r * theta.sin(),
            });
        }
        Self::from_complex(Complex64::from_polar(r, theta))
    }

    pub fn re(self) -> f64 {
        self.0.re
    }

    pub fn im(self) -> f64 {
        self.0.im
    }

    pub fn z(self) -> Complex64 {
        self.0
    }

    pub fn modulus(self) -> f64 {
        self.0.norm()
    }

    /// Argument in `[0, 2π)`; the origin maps to 0.
    pub fn argument(self) -> f64 {
        canonical_angle(self.0.im.atan2(self.0.re))
    }

    /// `1 - |z|`, the Euclidean distance to the boundary.
    pub fn depth(self) -> f64 {
        1.0 - self.modulus()
    }
}

impl From<DiskPoint> for Complex64 {
    fn from(p: DiskPoint) -> Self {
        p.0
    }
}

/// A point `e^{iθ}` of the unit circle, stored by its angle in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BoundaryPoint(f64);

impl BoundaryPoint {
    pub fn new(theta: f64) -> Self {
        BoundaryPoint(canonical_angle(theta))
    }

    pub fn theta(self) -> f64 {
        self.0
    }

    pub fn point(self) -> Complex64 {
        Complex64::from_polar(1.0, self.0)
    }
}

/// Reduces an angle to `[0, 2π)`.
pub fn canonical_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    // rem_euclid rounds tiny negative inputs up to exactly 2π
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Pseudo-hyperbolic distance `|z - w| / |1 - w̄ z|`.
pub fn pseudo_distance(z: DiskPoint, w: DiskPoint) -> f64 {
    rho(z.z(), w.z())
}

pub(crate) fn rho(z: Complex64, w: Complex64) -> f64 {
    let den = (Complex64::new(1.0, 0.0) - w.conj() * z).norm();
    if den == 0.0 {
        return 1.0;
    }
    ((z - w).norm() / den).min(1.0)
}

/// The involution `τ_a(w) = (a - w) / (1 - ā w)`, which swaps `a` and `0`.
pub fn mobius_shift(a: DiskPoint, w: Complex64) -> Complex64 {
    let a = a.z();
    (a - w) / (Complex64::new(1.0, 0.0) - a.conj() * w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(re: f64, im: f64) -> DiskPoint {
        DiskPoint::new(re, im).unwrap()
    }

    #[test]
    fn rejects_points_on_or_outside_the_circle() {
        assert!(DiskPoint::new(1.0, 0.0).is_err());
        assert!(DiskPoint::new(0.8, 0.8).is_err());
        assert!(DiskPoint::new(f64::NAN, 0.0).is_err());
        assert!(DiskPoint::from_polar(1.0, 0.3).is_err());
        assert!(DiskPoint::new(0.5, -0.5).is_ok());
    }

    #[test]
    fn distance_examples() {
        let w = pt(0.3, -0.4);
        assert!((pseudo_distance(DiskPoint::ORIGIN, w) - 0.5).abs() < 1e-15);
        assert_eq!(pseudo_distance(w, w), 0.0);
        assert!((pseudo_distance(pt(0.5, 0.0), pt(-0.5, 0.0)) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn shift_examples() {
        let a = pt(0.2, 0.7);
        assert!((mobius_shift(a, Complex64::new(0.0, 0.0)) - a.z()).norm() < 1e-15);
        assert!(mobius_shift(a, a.z()).norm() < 1e-15);
        let w = Complex64::new(-0.3, 0.1);
        assert!((mobius_shift(DiskPoint::ORIGIN, w) + w).norm() < 1e-15);
    }

    #[test]
    fn canonical_angles() {
        assert_eq!(BoundaryPoint::new(-1e-300).theta(), 0.0);
        assert!((BoundaryPoint::new(-std::f64::consts::FRAC_PI_2).theta() - 1.5 * std::f64::consts::PI).abs() < 1e-15);
        assert!(BoundaryPoint::new(7.0).theta() < TAU);
    }

    fn disk_point() -> impl Strategy<Value = DiskPoint> {
        (0.0..0.999f64, 0.0..TAU).prop_map(|(r, t)| DiskPoint::from_polar(r, t).unwrap())
    }

    proptest! {
        #[test]
        fn distance_is_mobius_invariant(a in disk_point(), z in disk_point(), w in disk_point()) {
            let za = DiskPoint::from_complex(mobius_shift(a, z.z())).unwrap();
            let wa = DiskPoint::from_complex(mobius_shift(a, w.z())).unwrap();
            prop_assert!((pseudo_distance(za, wa) - pseudo_distance(z, w)).abs() < 1e-12);
        }

        #[test]
        fn shift_is_an_involution(a in disk_point(), w in disk_point()) {
            let back = mobius_shift(a, mobius_shift(a, w.z()));
            prop_assert!((back - w.z()).norm() < 1e-12);
        }

        #[test]
        fn distance_is_symmetric(z in disk_point(), w in disk_point()) {
            prop_assert!((pseudo_distance(z, w) - pseudo_distance(w, z)).abs() < 1e-14);
        }
    }
}
