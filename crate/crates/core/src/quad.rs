//! Quadrature plumbing shared by the integral functionals.
//!
//! Boundary and circle integrals use the periodic trapezoid rule, which is
//! spectrally accurate for the real-analytic integrands that finite Blaschke
//! products produce. The node count is tied to the width of the analyticity
//! strip, which is roughly the distance `1 - r |z_n|` from the circle of
//! radius `r` to the reflected zeros. Radial integrals are split into
//! geometric shells `1 - r ∈ [2^{-k-1}, 2^{-k}]` with Gauss–Legendre nodes on
//! each shell.

use std::f64::consts::TAU;

use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};

/// Every numeric knob used by the integral functionals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    /// Minimum number of trapezoid nodes for boundary and circle integrals.
    pub boundary_samples: usize,
    /// Minimum number of geometric radial shells `1 - r ∈ [2^{-k-1}, 2^{-k}]`
    /// in area integrals; more are added to resolve deep zeros.
    pub radial_levels: usize,
    /// Maximum subdivision depth of sublevel-set cells.
    pub refinement_depth: u32,
    pub rel_tol: f64,
    /// `1 - r` for the interior cross-check of boundary values.
    pub radial_offset: f64,
    /// Allowed node doublings before a circle integral is declared unconverged.
    pub max_doublings: u32,
    /// Trapezoid nodes per unit of inverse strip width.
    pub node_density: f64,
    pub max_boundary_nodes: usize,
    /// Gauss–Legendre nodes per radial shell.
    pub gauss_nodes: usize,
    /// Points of the logarithmic λ-grid for the weak quasinorm.
    pub weak_grid_points: usize,
    /// Residual tolerance for preimage roots.
    pub root_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            boundary_samples: 8192,
            radial_levels: 24,
            refinement_depth: 12,
            rel_tol: 1e-3,
            radial_offset: 1e-6,
            max_doublings: 4,
            node_density: 32.0,
            max_boundary_nodes: 1 << 22,
            gauss_nodes: 8,
            weak_grid_points: 512,
            root_tol: 1e-10,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = |name, value: f64, cond, expected| check_range(name, value, cond, expected);
        ok(
            "boundary_samples",
            self.boundary_samples as f64,
            self.boundary_samples >= 64,
            ">= 64",
        )?;
        ok(
            "refinement_depth",
            self.refinement_depth as f64,
            self.refinement_depth <= 30,
            "<= 30",
        )?;
        ok(
            "rel_tol",
            self.rel_tol,
            self.rel_tol > 0.0 && self.rel_tol < 1.0,
            "in (0, 1)",
        )?;
        ok(
            "radial_offset",
            self.radial_offset,
            self.radial_offset > 0.0 && self.radial_offset < 1.0,
            "in (0, 1)",
        )?;
        ok(
            "radial_levels",
            self.radial_levels as f64,
            (1..=60).contains(&self.radial_levels),
            "in 1..=60",
        )?;
        ok("node_density", self.node_density, self.node_density > 0.0, "positive")?;
        ok(
            "max_boundary_nodes",
            self.max_boundary_nodes as f64,
            self.max_boundary_nodes >= self.boundary_samples,
            ">= boundary_samples",
        )?;
        ok(
            "gauss_nodes",
            self.gauss_nodes as f64,
            (2..=64).contains(&self.gauss_nodes),
            "in 2..=64",
        )?;
        ok(
            "weak_grid_points",
            self.weak_grid_points as f64,
            self.weak_grid_points >= 2,
            ">= 2",
        )?;
        ok("root_tol", self.root_tol, self.root_tol > 0.0, "positive")?;
        Ok(())
    }

    /// Trapezoid node count for a periodic integrand whose analyticity strip
    /// has half-width about `width`; at least `floor` nodes, a power of two.
    pub(crate) fn nodes_for_width(&self, width: f64, floor: usize) -> usize {
        let want = (self.node_density / width.max(1e-300)).ceil();
        let want = if want.is_finite() && want < self.max_boundary_nodes as f64 {
            want as usize
        } else {
            self.max_boundary_nodes
        };
        want.max(floor)
            .next_power_of_two()
            .min(self.max_boundary_nodes.next_power_of_two())
    }
}

/// Sum with a fixed binary tree shape, so results do not depend on how the
/// summands were produced.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// `(1/2π) ∫ f(θ) dθ` by the `m`-point trapezoid rule.
pub fn circle_mean<F: Fn(f64) -> f64>(f: F, m: usize) -> f64 {
    let h = TAU / m as f64;
    let samples: Vec<f64> = (0..m).map(|k| f(k as f64 * h)).collect();
    pairwise_sum(&samples) / m as f64
}

/// Circle mean with node doubling until two successive estimates agree to
/// `rel_tol`. Only the new (odd) nodes are evaluated at each doubling.
pub(crate) fn circle_mean_converged<F: Fn(f64) -> f64>(
    f: F,
    start_nodes: usize,
    rel_tol: f64,
    max_doublings: u32,
    what: &'static str,
) -> Result<(f64, usize)> {
    let mut m = start_nodes;
    let mut estimate = circle_mean(&f, m);
    for _ in 0..max_doublings {
        let h = TAU / (2 * m) as f64;
        let odd: Vec<f64> = (0..m).map(|k| f((2 * k + 1) as f64 * h)).collect();
        let refined = 0.5 * (estimate + pairwise_sum(&odd) / m as f64);
        m *= 2;
        let diff = (refined - estimate).abs();
        estimate = refined;
        if diff <= rel_tol * refined.abs() {
            return Ok((estimate, m));
        }
    }
    Err(Error::NotConverged {
        what,
        detail: format!("estimate {estimate:.6e} still moving at {m} nodes"),
    })
}

/// `∫_0^{t_max} g(t) t^β dt` for `β > -1` and `g` smooth on `[0, t_max]`.
///
/// Shells `[t_max 2^{-k-1}, t_max 2^{-k}]` for `k < levels` get Gauss–Legendre
/// nodes; the remaining piece `[0, τ]`, `τ = t_max 2^{-levels}`, is closed
/// with the chord of `g` through `0` and `τ`.
pub(crate) fn shell_integral<G: FnMut(f64) -> f64>(
    mut g: G,
    beta: f64,
    t_max: f64,
    levels: usize,
    gauss_nodes: usize,
) -> f64 {
    let rule = GaussLegendre::new(gauss_nodes).expect("at least two Gauss nodes");
    let mut parts = Vec::with_capacity(levels + 1);
    let mut hi = t_max;
    for _ in 0..levels {
        let lo = 0.5 * hi;
        parts.push(rule.integrate(lo, hi, |t| g(t) * t.powf(beta)));
        hi = lo;
    }
    let g0 = g(0.0);
    let slope = (g(hi) - g0) / hi;
    parts.push(g0 * hi.powf(beta + 1.0) / (beta + 1.0) + slope * hi.powf(beta + 2.0) / (beta + 2.0));
    // smallest terms first
    parts.iter().rev().sum()
}
