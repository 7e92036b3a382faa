//! Finite Blaschke products: evaluation, derivatives, and the Frostman shift.

use num_complex::Complex64;

use crate::disk::{BoundaryPoint, DiskPoint};
use crate::error::{check_range, Error, Result};
use crate::poly;
use crate::zeros::{ComplexRecord, ZeroFile, ZeroList};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `B(z) = λ Π_n ((z_n - z) / (1 - z̄_n z))^{m_n}` for a finite zero list.
///
/// The default unimodular constant is `λ = Π_n (|z_n| / z_n)^{m_n}` with the
/// convention `|0|/0 = 1`, so that a single zero at the origin gives
/// `B(z) = -z`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct {
    zeros: ZeroList,
    unimodular: Complex64,
}

/// Builds the product with the default normalization; empty lists are rejected.
pub fn make_product(zeros: ZeroList) -> Result<BlaschkeProduct> {
    BlaschkeProduct::new(zeros)
}

impl BlaschkeProduct {
    pub fn new(zeros: ZeroList) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::EmptyZeroList);
        }
        let unimodular = default_unimodular(&zeros);
        Ok(BlaschkeProduct { zeros, unimodular })
    }

    /// The constant product `B ≡ 1`.
    pub fn one() -> Self {
        BlaschkeProduct {
            zeros: ZeroList::empty(),
            unimodular: ONE,
        }
    }

    /// Product with an explicit unimodular constant; an empty list is allowed
    /// here and yields the constant `λ`.
    pub fn with_unimodular(zeros: ZeroList, unimodular: Complex64) -> Result<Self> {
        let modulus = unimodular.norm();
        let off = (modulus - 1.0).abs();
        if off.is_nan() || off > 1e-14 {
            return Err(Error::NotUnimodular { modulus });
        }
        Ok(BlaschkeProduct { zeros, unimodular })
    }

    /// Reads a [`ZeroFile`]; an empty zero list gives the constant product.
    pub fn from_file(file: &ZeroFile) -> Result<Self> {
        let zeros = file.zero_list()?;
        match file.unimodular {
            Some(u) => Self::with_unimodular(zeros, Complex64::new(u.re, u.im)),
            None if zeros.is_empty() => Ok(Self::one()),
            None => Self::new(zeros),
        }
    }

    pub fn to_file(&self) -> ZeroFile {
        let mut file = ZeroFile::from_list(&self.zeros);
        if (self.unimodular - default_unimodular(&self.zeros)).norm() > 1e-15 {
            file.unimodular = Some(ComplexRecord {
                re: self.unimodular.re,
                im: self.unimodular.im,
            });
        }
        file
    }

    pub fn zeros(&self) -> &ZeroList {
        &self.zeros
    }

    pub fn unimodular(&self) -> Complex64 {
        self.unimodular
    }

    pub fn degree(&self) -> usize {
        self.zeros.degree()
    }

    /// `B(z)` for `|z| <= 1`.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let mut value = self.unimodular;
        for e in self.zeros.entries() {
            let a = e.z();
            let f = (a - z) / (ONE - a.conj() * z);
            value *= f.powu(e.mult);
        }
        value
    }

    /// `B'(z)` for `|z| < 1`, exact at the zeros.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        self.value_and_derivative(z).1
    }

    /// `(B(z), B'(z))` in one pass over the zeros.
    pub fn value_and_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut value = self.unimodular;
        let mut log_deriv = Complex64::new(0.0, 0.0);
        let mut hit: Option<(Complex64, u32)> = None;
        for e in self.zeros.entries() {
            let a = e.z();
            let num = a - z;
            let den = ONE - a.conj() * z;
            if num == Complex64::new(0.0, 0.0) {
                hit = Some((a, e.mult));
                continue;
            }
            value *= (num / den).powu(e.mult);
            log_deriv -= (1.0 - a.norm_sqr()) * e.mult as f64 / (num * den);
        }
        match hit {
            // z is a zero of order >= 2
            Some((_, m)) if m >= 2 => (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
            // simple zero: the vanishing factor has derivative -1/(1-|a|²) there
            Some((a, _)) => (Complex64::new(0.0, 0.0), -value / (1.0 - a.norm_sqr())),
            None => (value, value * log_deriv),
        }
    }

    /// `|B'(e^{iθ})| = Σ_n m_n (1 - |z_n|²) / |z_n - e^{iθ}|²`, the sum of the
    /// Poisson kernels of the zeros.
    pub fn boundary_derivative(&self, theta: BoundaryPoint) -> f64 {
        self.boundary_derivative_at(theta.theta())
    }

    pub(crate) fn boundary_derivative_at(&self, theta: f64) -> f64 {
        let w = Complex64::from_polar(1.0, theta);
        self.zeros
            .entries()
            .iter()
            .map(|e| {
                let a = e.z();
                e.mult as f64 * (1.0 - a.norm_sqr()) / (a - w).norm_sqr()
            })
            .sum()
    }

    /// `Σ_n m_n (1 - |z_n|²) / |1 - z̄_n z|²`, an upper bound for `|B'(z)|`.
    pub fn derivative_bound(&self, z: Complex64) -> f64 {
        self.zeros
            .entries()
            .iter()
            .map(|e| {
                let a = e.z();
                e.mult as f64 * (1.0 - a.norm_sqr()) / (ONE - a.conj() * z).norm_sqr()
            })
            .sum()
    }

    /// The Blaschke product with zeros `B^{-1}({a})`, normalized so that it
    /// equals `(a - B) / (1 - ā B)` identically.
    pub fn frostman_shift(&self, a: DiskPoint, root_tol: f64) -> Result<BlaschkeProduct> {
        frostman_shift(self, a, root_tol)
    }
}

fn default_unimodular(zeros: &ZeroList) -> Complex64 {
    let mut u = ONE;
    for e in zeros.entries() {
        let a = e.z();
        let r = a.norm();
        if r > 0.0 {
            u *= (Complex64::new(r, 0.0) / a).powu(e.mult);
        }
    }
    // renormalize the accumulated rounding
    u / u.norm()
}

/// Solves `B(z) = a` and returns the product whose zero set is the preimage.
///
/// All `n = deg B` solutions are found from the companion matrix of
/// `N(z) - a D(z)` (numerator and denominator of `B`) and then polished
/// against `B` itself. The returned product satisfies
/// `frostman_shift(B, a)(z) = (a - B(z)) / (1 - ā B(z))`.
pub fn frostman_shift(b: &BlaschkeProduct, a: DiskPoint, root_tol: f64) -> Result<BlaschkeProduct> {
    check_range("root_tol", root_tol, root_tol > 0.0, "positive")?;
    if b.degree() == 0 {
        return Err(Error::RootSolver("degree-0 product has no preimages".into()));
    }
    let roots = poly::preimages(b, a.z(), root_tol)?;
    let zeros = ZeroList::from_points(roots)?;
    let mut shifted = BlaschkeProduct::new(zeros)?;

    // Fix the unimodular constant at a point where both sides are well away from 0.
    let target = |z: Complex64| crate::disk::mobius_shift(a, b.evaluate(z));
    let probe = [0.0, 0.5, -0.5, 0.25, -0.25, 0.75]
        .iter()
        .flat_map(|&x| [Complex64::new(x, 0.0), Complex64::new(0.0, x)])
        .max_by(|z, w| shifted.evaluate(*z).norm().total_cmp(&shifted.evaluate(*w).norm()))
        .expect("probe set is nonempty");
    let ratio = target(probe) / shifted.evaluate(probe);
    shifted.unimodular *= ratio / ratio.norm();
    Ok(shifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::{pseudo_distance, rho};
    use crate::zeros::Zero;
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn product(points: &[(f64, f64, u32)]) -> BlaschkeProduct {
        let entries = points
            .iter()
            .map(|&(re, im, mult)| Zero {
                point: DiskPoint::new(re, im).unwrap(),
                mult,
            })
            .collect();
        BlaschkeProduct::new(ZeroList::new(entries).unwrap()).unwrap()
    }

    #[test]
    fn origin_zero_is_minus_z() {
        let b = product(&[(0.0, 0.0, 1)]);
        assert_eq!(b.evaluate(c(0.5, 0.0)), c(-0.5, 0.0));
        assert!((b.derivative(c(0.3, 0.2)) - c(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(b.derivative(c(0.0, 0.0)), c(-1.0, 0.0));
    }

    #[test]
    fn power_of_origin_zero() {
        let b = product(&[(0.0, 0.0, 3)]);
        for k in 0..16 {
            let w = Complex64::from_polar(1.0, k as f64 * 0.4);
            assert!((b.evaluate(w).norm() - 1.0).abs() < 1e-12);
        }
        let sq = product(&[(0.0, 0.0, 2)]);
        assert!((sq.derivative(c(0.25, 0.0)) - c(0.5, 0.0)).norm() < 1e-15);
        // double zero: derivative vanishes at the zero
        assert_eq!(sq.derivative(c(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn single_zero_at_one_half() {
        let b = product(&[(0.5, 0.0, 1)]);
        assert_eq!(b.evaluate(c(0.5, 0.0)), c(0.0, 0.0));
        assert!((b.evaluate(c(0.0, 0.0)).norm() - 0.5).abs() < 1e-15);
        assert!((b.evaluate(c(1.0, 0.0)).norm() - 1.0).abs() < 1e-15);
        assert!((b.derivative(c(0.0, 0.0)) - c(-0.75, 0.0)).norm() < 1e-15);
        // at the zero itself: -1/(1-|a|²)
        assert!((b.derivative(c(0.5, 0.0)) - c(-4.0 / 3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn derivative_at_simple_zero_matches_nearby_values() {
        let b = product(&[(0.3, -0.2, 1), (-0.6, 0.1, 2), (0.1, 0.8, 1)]);
        let a = c(0.3, -0.2);
        let at = b.derivative(a);
        let near = b.derivative(a + c(1e-9, 1e-9));
        assert!((at - near).norm() < 1e-6 * at.norm());
    }

    #[test]
    fn boundary_derivative_examples() {
        let b = product(&[(0.0, 0.0, 1)]);
        for k in 0..10 {
            assert!((b.boundary_derivative(BoundaryPoint::new(k as f64)) - 1.0).abs() < 1e-15);
        }
        let b = product(&[(0.5, 0.0, 1)]);
        assert!((b.boundary_derivative(BoundaryPoint::new(0.0)) - 3.0).abs() < 1e-14);
        let b = product(&[(0.0, 0.0, 1), (0.5, 0.0, 1)]);
        assert!((b.boundary_derivative(BoundaryPoint::new(PI)) - 4.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn derivative_bound_examples() {
        let b = product(&[(0.0, 0.0, 1)]);
        assert_eq!(b.derivative_bound(c(0.0, 0.0)), 1.0);
        let b = product(&[(0.5, 0.0, 1)]);
        assert!((b.derivative_bound(c(0.0, 0.0)) - 0.75).abs() < 1e-15);
        let b = product(&[(0.0, 0.0, 1), (0.5, 0.0, 1)]);
        let z = c(0.0, 0.3);
        // direct formulas, written out independently
        let fa = |z: Complex64| (c(0.5, 0.0) - z) / (1.0 - 0.5 * z);
        let dfa = |z: Complex64| -0.75 / ((1.0 - 0.5 * z) * (1.0 - 0.5 * z));
        let direct = -(fa(z) + z * dfa(z));
        assert!((b.derivative(z) - direct).norm() < 1e-14);
        let bound = 1.0 + 0.75 / (c(1.0, 0.0) - 0.5 * z).norm_sqr();
        assert!((b.derivative_bound(z) - bound).abs() < 1e-14);
        assert!(direct.norm() <= bound);
    }

    #[test]
    fn constant_product() {
        let one = BlaschkeProduct::one();
        assert_eq!(one.evaluate(c(0.3, 0.3)), c(1.0, 0.0));
        assert_eq!(one.derivative(c(0.3, 0.3)), c(0.0, 0.0));
        assert_eq!(one.boundary_derivative(BoundaryPoint::new(1.0)), 0.0);
        assert!(matches!(make_product(ZeroList::empty()), Err(Error::EmptyZeroList)));
    }

    #[test]
    fn file_roundtrip_keeps_custom_unimodular() {
        let zeros = product(&[(0.5, 0.1, 2)]).zeros().clone();
        let b = BlaschkeProduct::with_unimodular(zeros, c(0.0, 1.0)).unwrap();
        let back = BlaschkeProduct::from_file(&b.to_file()).unwrap();
        assert_eq!(back, b);
        assert!(BlaschkeProduct::with_unimodular(ZeroList::empty(), c(2.0, 0.0)).is_err());
    }

    #[test]
    fn frostman_shift_of_square() {
        let b = product(&[(0.0, 0.0, 2)]);
        let a = DiskPoint::new(0.25, 0.0).unwrap();
        let s = b.frostman_shift(a, 1e-10).unwrap();
        assert_eq!(s.degree(), 2);
        let mut roots: Vec<f64> = s.zeros().expanded().map(|z| z.re).collect();
        roots.sort_by(f64::total_cmp);
        assert!((roots[0] + 0.5).abs() < 1e-12 && (roots[1] - 0.5).abs() < 1e-12);
        let p = 0.75;
        let sum = s.zeros().depth_power_sum(1.0 - p);
        assert!((sum - 2.0 * 0.5f64.powf(1.0 - p)).abs() < 1e-12);
    }

    #[test]
    fn frostman_shift_of_minus_z() {
        let b = product(&[(0.0, 0.0, 1)]);
        let a = DiskPoint::new(0.3, -0.6).unwrap();
        let s = b.frostman_shift(a, 1e-10).unwrap();
        let z = s.zeros().entries()[0].z();
        assert!((z + a.z()).norm() < 1e-13);
        assert!(crate::disk::mobius_shift(a, b.evaluate(z)).norm() < 1e-13);
    }

    #[test]
    fn frostman_shift_of_power_has_roots_on_circle() {
        let n = 7;
        let r: f64 = 0.8;
        let b = product(&[(0.0, 0.0, n)]);
        let a = DiskPoint::new(r.powi(n as i32) * (-1f64).powi(n as i32), 0.0).unwrap();
        let s = b.frostman_shift(a, 1e-10).unwrap();
        assert_eq!(s.degree(), n as usize);
        for z in s.zeros().expanded() {
            assert!((z.norm() - r).abs() < 1e-12);
        }
    }

    #[test]
    fn frostman_shift_matches_composition() {
        let b = product(&[(0.5, 0.2, 1), (-0.3, 0.7, 2), (0.0, -0.9, 1)]);
        let a = DiskPoint::new(-0.2, 0.4).unwrap();
        let s = b.frostman_shift(a, 1e-10).unwrap();
        for k in 0..20 {
            let z = Complex64::from_polar(0.9 * (k as f64 / 20.0), k as f64 * 1.3);
            let lhs = s.evaluate(z);
            let rhs = crate::disk::mobius_shift(a, b.evaluate(z));
            assert!((lhs - rhs).norm() < 1e-10, "{lhs} vs {rhs}");
        }
        assert!(matches!(
            BlaschkeProduct::one().frostman_shift(a, 1e-10),
            Err(Error::RootSolver(_))
        ));
    }

    fn random_product() -> impl Strategy<Value = BlaschkeProduct> {
        prop::collection::vec((0.0..0.99f64, 0.0..TAU, 1u32..3), 1..12).prop_map(|pts| {
            let pts: Vec<Complex64> = pts
                .iter()
                .flat_map(|&(r, t, m)| std::iter::repeat_n(Complex64::from_polar(r, t), m as usize))
                .collect();
            BlaschkeProduct::new(ZeroList::from_points(pts).unwrap()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn derivative_never_exceeds_bound(b in random_product(), r in 0.0..0.999f64, t in 0.0..TAU) {
            let z = Complex64::from_polar(r, t);
            prop_assert!(b.derivative(z).norm() <= b.derivative_bound(z) * (1.0 + 1e-12));
        }

        #[test]
        fn modulus_below_each_factor(b in random_product(), r in 0.0..0.999f64, t in 0.0..TAU) {
            let z = Complex64::from_polar(r, t);
            let v = b.evaluate(z).norm();
            for e in b.zeros().entries() {
                prop_assert!(v <= rho(z, e.z()) + 1e-14);
            }
        }

        #[test]
        fn boundary_derivative_is_additive(b1 in random_product(), b2 in random_product(), t in 0.0..TAU) {
            let both = b1.zeros().union(b2.zeros()).unwrap();
            let b = BlaschkeProduct::new(both).unwrap();
            let th = BoundaryPoint::new(t);
            let sum = b1.boundary_derivative(th) + b2.boundary_derivative(th);
            prop_assert!((b.boundary_derivative(th) - sum).abs() <= 1e-12 * sum);
        }

        #[test]
        fn unimodular_on_circle(b in random_product(), t in 0.0..TAU) {
            prop_assert!((b.evaluate(Complex64::from_polar(1.0, t)).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pseudo_distance_is_the_single_factor_modulus() {
        let a = DiskPoint::new(0.2, 0.3).unwrap();
        let z = DiskPoint::new(-0.5, 0.1).unwrap();
        let b = BlaschkeProduct::new(ZeroList::new(vec![Zero { point: a, mult: 1 }]).unwrap()).unwrap();
        assert!((b.evaluate(z.z()).norm() - pseudo_distance(z, a)).abs() < 1e-15);
    }
}
