//! Integral functionals of a finite Blaschke product.
//!
//! Boundary integrals use the normalized measure `dθ/2π`; area integrals use
//! plain Lebesgue measure `dm`. Statements elsewhere that integrate boundary
//! quantities against `dθ` differ from ours by the factor `2π`.

mod sublevel;

use std::f64::consts::TAU;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::product::BlaschkeProduct;
use crate::quad::{circle_mean, circle_mean_converged, pairwise_sum, shell_integral, QuadratureConfig};

pub use sublevel::{sublevel_enclosure, sublevel_integral, SublevelEnclosure};

/// Floor for trapezoid node counts inside area integrals.
const MIN_CIRCLE_NODES: usize = 64;

fn check_p(p: f64) -> Result<()> {
    check_range("p", p, p > 0.0, "positive and finite")
}

fn check_open_unit(name: &'static str, x: f64) -> Result<()> {
    check_range(name, x, x > 0.0 && x < 1.0, "in (0, 1)")
}

/// Width of the analyticity strip of `θ ↦ B'(r e^{iθ})`.
fn strip_width(b: &BlaschkeProduct, r: f64) -> f64 {
    1.0 - r * b.zeros().max_modulus()
}

fn derivative_modulus(b: &BlaschkeProduct, r: f64, theta: f64) -> f64 {
    b.derivative(Complex64::from_polar(r, theta)).norm()
}

/// `(1/2π) ∫ |B'(e^{iθ})|^p dθ` together with the node count it converged at.
pub(crate) fn boundary_power_mean(b: &BlaschkeProduct, p: f64, cfg: &QuadratureConfig) -> Result<(f64, usize)> {
    let start = cfg
        .nodes_for_width(b.zeros().min_depth(), MIN_CIRCLE_NODES)
        .max(cfg.boundary_samples);
    circle_mean_converged(
        |t| b.boundary_derivative_at(t).powf(p),
        start,
        cfg.rel_tol,
        cfg.max_doublings,
        "boundary integral of |B'|^p",
    )
}

/// Fixed-node circle mean of `|B'(r e^{iθ})|^q` (no convergence loop).
fn circle_power_mean(b: &BlaschkeProduct, q: f64, r: f64, cfg: &QuadratureConfig) -> f64 {
    if r == 1.0 {
        let m = cfg.nodes_for_width(b.zeros().min_depth(), MIN_CIRCLE_NODES);
        return circle_mean(|t| b.boundary_derivative_at(t).powf(q), m);
    }
    let m = cfg.nodes_for_width(strip_width(b, r), MIN_CIRCLE_NODES);
    circle_mean(|t| derivative_modulus(b, r, t).powf(q), m)
}

/// Number of radial shells: at least `radial_levels`, and a dozen below the
/// deepest zero.
fn shell_count(b: &BlaschkeProduct, cfg: &QuadratureConfig) -> usize {
    let to_zero = (1.0 / b.zeros().min_depth()).log2().ceil() as usize;
    (to_zero + 12).max(cfg.radial_levels).min(60)
}

/// Integral mean `M_p(r, B') = ((1/2π) ∫ |B'(r e^{iθ})|^p dθ)^{1/p}`.
pub fn integral_mean(b: &BlaschkeProduct, p: f64, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    check_p(p)?;
    check_open_unit("r", r)?;
    if b.degree() == 0 {
        return Ok(0.0);
    }
    let start = cfg
        .nodes_for_width(strip_width(b, r), MIN_CIRCLE_NODES)
        .max(cfg.boundary_samples);
    let (mean, _) = circle_mean_converged(
        |t| derivative_modulus(b, r, t).powf(p),
        start,
        cfg.rel_tol,
        cfg.max_doublings,
        "integral mean of |B'|^p",
    )?;
    Ok(mean.powf(1.0 / p))
}

/// Hardy norm of `B'` with its interior cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HpNorm {
    /// `‖B'‖_{H^p}` from the boundary values `Σ P_{z_n}`.
    pub value: f64,
    /// `M_p(1 - radial_offset, B')`.
    pub interior: f64,
    /// Trapezoid nodes used on the boundary.
    pub nodes: usize,
}

/// `‖B'‖_{H^p}`.
///
/// Integral means of `|B'|^p` increase with `r` for a finite product, so the
/// supremum is the boundary value, which is computed from the exact boundary
/// derivative. The result is checked against `M_p(1 - radial_offset)` and
/// rejected if the two differ by more than 1%.
pub fn hp_norm(b: &BlaschkeProduct, p: f64, cfg: &QuadratureConfig) -> Result<f64> {
    hp_norm_detail(b, p, cfg).map(|h| h.value)
}

pub fn hp_norm_detail(b: &BlaschkeProduct, p: f64, cfg: &QuadratureConfig) -> Result<HpNorm> {
    cfg.validate()?;
    check_p(p)?;
    if b.degree() == 0 {
        return Ok(HpNorm {
            value: 0.0,
            interior: 0.0,
            nodes: 0,
        });
    }
    let (mean, nodes) = boundary_power_mean(b, p, cfg)?;
    let value = mean.powf(1.0 / p);
    let interior = integral_mean(b, p, 1.0 - cfg.radial_offset, cfg)?;
    let rel_diff = (interior - value).abs() / value;
    if rel_diff > 0.01 {
        return Err(Error::CrossCheckMismatch {
            boundary: value,
            interior,
            rel_diff,
        });
    }
    Ok(HpNorm { value, interior, nodes })
}

/// `‖B‖_{B^q_s} = (∫_𝔻 |B'(z)|^q (1 - |z|)^{(1-s)q - 1} dm(z))^{1/q}`.
pub fn besov_norm(b: &BlaschkeProduct, q: f64, s: f64, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    check_range("q", q, q > 0.0, "positive and finite")?;
    check_open_unit("s", s)?;
    let beta = (1.0 - s) * q - 1.0;
    check_range("(1-s)q-1", beta, beta > -1.0, "> -1 for a finite weight")?;
    if b.degree() == 0 {
        return Ok(0.0);
    }
    let integral = shell_integral(
        |t| TAU * (1.0 - t) * circle_power_mean(b, q, 1.0 - t, cfg),
        beta,
        1.0,
        shell_count(b, cfg),
        cfg.gauss_nodes,
    );
    Ok(integral.powf(1.0 / q))
}

/// `∫_0^s r (1-r)^{-1-p} dr`.
pub(crate) fn radial_weight_mass(r0: f64, r1: f64, p: f64) -> f64 {
    radial_weight_mass_t(1.0 - r1, 1.0 - r0, p)
}

/// `∫_{t_lo}^{t_hi} (1-t) t^{-1-p} dt`, the `r (1-r)^{-1-p} dr` mass between
/// `r = 1 - t_hi` and `r = 1 - t_lo`.
pub(crate) fn radial_weight_mass_t(t_lo: f64, t_hi: f64, p: f64) -> f64 {
    (t_lo.powf(-p) - t_hi.powf(-p)) / p - (t_hi.powf(1.0 - p) - t_lo.powf(1.0 - p)) / (1.0 - p)
}

/// `∫_𝔻 log|B(z)|^{-1} (1 - |z|)^{-(1+p)} dm(z)`.
///
/// Uses `(1/2π) ∫ log ρ(r e^{iθ}, a)^{-1} dθ = log(1 / max(r, |a|))`, which
/// reduces each zero's contribution to a one-dimensional radial integral.
pub fn carleson_integral(b: &BlaschkeProduct, p: f64, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    check_open_unit("p", p)?;
    let parts: Vec<f64> = b
        .zeros()
        .entries()
        .iter()
        .map(|e| e.mult as f64 * carleson_single(e.point.modulus(), p, cfg))
        .collect();
    Ok(pairwise_sum(&parts))
}

/// Contribution of one simple zero of modulus `s`.
fn carleson_single(s: f64, p: f64, cfg: &QuadratureConfig) -> f64 {
    let inside = if s > 0.0 {
        -s.ln() * radial_weight_mass(0.0, s, p)
    } else {
        0.0
    };
    // ∫_s^1 r log(1/r) (1-r)^{-1-p} dr, graded towards r = 1 in t = 1 - r
    // and towards r = 0 in r itself
    let split = s.max(0.5);
    let outer = shell_integral(
        |t| {
            if t == 0.0 {
                1.0
            } else {
                (1.0 - t) * (-(-t).ln_1p()) / t
            }
        },
        -p,
        1.0 - split,
        60,
        cfg.gauss_nodes,
    );
    let rule = GaussLegendre::new(cfg.gauss_nodes).expect("validated node count");
    let mut inner = Vec::new();
    let mut hi = split;
    while hi > s && inner.len() < 64 {
        let lo = (0.5 * hi).max(s);
        inner.push(rule.integrate(lo, hi, |r| r * -r.ln() * (1.0 - r).powf(-1.0 - p)));
        hi = lo;
    }
    let inner: f64 = inner.iter().rev().sum();
    TAU * (inside + outer + inner)
}

/// Weak-type functional `sup_λ λ^p |{θ : |B'(e^{iθ})| > λ}| / 2π`.
///
/// The supremum runs over a logarithmic grid between the smallest and
/// largest sampled boundary derivative, each grid value taken as a left
/// limit. Samples are the boundary nodes at which `‖B'‖_{H^p}` converges,
/// so the result never exceeds `‖B'‖_{H^p}^p` as computed by [`hp_norm`].
pub fn weak_hp_quasinorm(b: &BlaschkeProduct, p: f64, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    check_p(p)?;
    if b.degree() == 0 {
        return Ok(0.0);
    }
    let (_, m) = boundary_power_mean(b, p, cfg)?;
    let h = TAU / m as f64;
    let mut samples: Vec<f64> = (0..m).map(|k| b.boundary_derivative_at(k as f64 * h)).collect();
    samples.sort_by(f64::total_cmp);
    let lo = samples[0];
    let hi = samples[m - 1];
    let g = cfg.weak_grid_points;
    let best = (0..g)
        .map(|i| {
            let lambda = if hi > lo {
                lo * (hi / lo).powf(i as f64 / (g - 1) as f64)
            } else {
                hi
            };
            let above = m - samples.partition_point(|&v| v < lambda);
            lambda.powf(p) * above as f64 / m as f64
        })
        .fold(0.0, f64::max);
    Ok(best)
}

/// `(∫_0^1 M_p(r, B')^q (1 - r)^{(1-α)q - 1} dr)^{1/q}`.
pub fn mixed_besov_norm(b: &BlaschkeProduct, p: f64, q: f64, alpha: f64, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    check_p(p)?;
    check_range("q", q, q > 0.0, "positive and finite")?;
    check_open_unit("alpha", alpha)?;
    let beta = (1.0 - alpha) * q - 1.0;
    check_range("(1-alpha)q-1", beta, beta > -1.0, "> -1 for a finite weight")?;
    if b.degree() == 0 {
        return Ok(0.0);
    }
    let integral = shell_integral(
        |t| circle_power_mean(b, p, 1.0 - t, cfg).powf(q / p),
        beta,
        1.0,
        shell_count(b, cfg),
        cfg.gauss_nodes,
    );
    Ok(integral.powf(1.0 / q))
}

/// The integral functionals of one product at fixed parameters.
///
/// `cone_norm_p` is left empty here and filled in by the caller that owns the
/// cone geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub p: f64,
    pub alpha: f64,
    pub c: f64,
    pub hp_norm: Option<f64>,
    pub hp_norm_p: Option<f64>,
    pub besov_q1_sp: Option<f64>,
    pub sublevel_ic: Option<f64>,
    pub sublevel_width: Option<f64>,
    pub carleson_log: Option<f64>,
    pub cone_norm_p: Option<f64>,
    pub weak_hp: Option<f64>,
    /// `(functional, message)` for every functional that failed.
    pub errors: Vec<(String, String)>,
}

impl NormReport {
    pub fn compute(b: &BlaschkeProduct, p: f64, alpha: f64, c: f64, cfg: &QuadratureConfig) -> Self {
        let mut errors = Vec::new();
        let mut keep = |name: &str, r: Result<f64>| match r {
            Ok(v) => Some(v),
            Err(e) => {
                errors.push((name.to_string(), e.to_string()));
                None
            }
        };
        let hp = keep("hp_norm", hp_norm(b, p, cfg));
        let besov = keep("besov_q1_sp", besov_norm(b, 1.0, p, cfg));
        let enclosure = sublevel_enclosure(b, c, p, cfg);
        let width = enclosure.as_ref().ok().map(|e| e.width());
        let sublevel = keep("sublevel_ic", sublevel_integral(b, c, p, cfg));
        let carleson = keep("carleson_log", carleson_integral(b, p, cfg));
        let weak = keep("weak_hp", weak_hp_quasinorm(b, p, cfg));
        NormReport {
            p,
            alpha,
            c,
            hp_norm: hp,
            hp_norm_p: hp.map(|h| h.powf(p)),
            besov_q1_sp: besov,
            sublevel_ic: sublevel,
            sublevel_width: width,
            carleson_log: carleson,
            cone_norm_p: None,
            weak_hp: weak,
            errors,
        }
    }
}
