//! Preimage solver for `B(z) = a`: polynomial construction, companion-matrix
//! eigenvalues, and simultaneous Newton polishing against `B`.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::product::BlaschkeProduct;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const POLISH_STEPS: usize = 60;

/// Coefficients (ascending powers) of `N(z) - a D(z)` where
/// `N = λ Π (z_n - z)` and `D = Π (1 - z̄_n z)`.
pub(crate) fn preimage_polynomial(b: &BlaschkeProduct, a: Complex64) -> Vec<Complex64> {
    let mut num = vec![b.unimodular()];
    let mut den = vec![ONE];
    for z in b.zeros().expanded() {
        num = mul_linear(&num, z, -ONE);
        den = mul_linear(&den, ONE, -z.conj());
    }
    num.iter().zip(&den).map(|(n, d)| n - a * d).collect()
}

/// `p(z) * (c0 + c1 z)`.
fn mul_linear(p: &[Complex64], c0: Complex64, c1: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); p.len() + 1];
    for (k, &pk) in p.iter().enumerate() {
        out[k] += pk * c0;
        out[k + 1] += pk * c1;
    }
    out
}

/// Roots of a polynomial given by ascending coefficients, via the Schur form
/// of its companion matrix.
pub(crate) fn companion_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    if lead.norm() == 0.0 {
        return Err(Error::RootSolver("vanishing leading coefficient".into()));
    }
    if n == 1 {
        return Ok(vec![-coeffs[0] / lead]);
    }
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = ONE;
    }
    for i in 0..n {
        m[(i, n - 1)] = -coeffs[i] / lead;
    }
    let schur = Schur::try_new(m, 1e-15, 1000 * n)
        .ok_or_else(|| Error::RootSolver("companion eigenvalue iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Newton ratio `P/P'` of the preimage polynomial at `z`, computed from `B`
/// without touching the (possibly ill-conditioned) coefficients.
fn newton_ratio(b: &BlaschkeProduct, a: Complex64, z: Complex64) -> Option<Complex64> {
    let (value, deriv) = b.value_and_derivative(z);
    let f = value - a;
    if f == Complex64::new(0.0, 0.0) {
        return Some(Complex64::new(0.0, 0.0));
    }
    let mut den_log = Complex64::new(0.0, 0.0);
    for e in b.zeros().entries() {
        let c = e.z().conj();
        den_log -= e.mult as f64 * c / (ONE - c * z);
    }
    let inv = deriv / f + den_log;
    (inv.norm() > 0.0 && inv.is_finite()).then(|| inv.inv())
}

/// All `deg B` solutions of `B(z) = a`, each with `|B(z) - a| < root_tol`.
pub(crate) fn preimages(b: &BlaschkeProduct, a: Complex64, root_tol: f64) -> Result<Vec<Complex64>> {
    let n = b.degree();
    let mut roots = companion_roots(&preimage_polynomial(b, a))?;
    if roots.len() != n {
        return Err(Error::RootSolver(format!("expected {n} roots, found {}", roots.len())));
    }

    // Aberth-corrected Newton: each root repels the others, so polishing
    // cannot merge two roots into one.
    for _ in 0..POLISH_STEPS {
        let mut largest = 0.0f64;
        for k in 0..n {
            let Some(ratio) = newton_ratio(b, a, roots[k]) else {
                continue;
            };
            let repel: Complex64 = (0..n)
                .filter(|&j| j != k && roots[j] != roots[k])
                .map(|j| (roots[k] - roots[j]).inv())
                .sum();
            let step = ratio / (ONE - ratio * repel);
            if step.is_finite() {
                roots[k] -= step;
                largest = largest.max(step.norm());
            }
        }
        if largest < 1e-15 {
            break;
        }
    }

    let mut worst = 0.0f64;
    for &z in &roots {
        if z.norm() >= 1.0 {
            return Err(Error::RootSolver(format!("preimage {z} is outside the open disk")));
        }
        worst = worst.max((b.evaluate(z) - a).norm());
    }
    if worst >= root_tol || !worst.is_finite() {
        return Err(Error::RootResidual {
            residual: worst,
            tol: root_tol,
        });
    }
    Ok(roots)
}
