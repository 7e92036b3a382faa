//! Certified enclosure of `∫_{|B| < c} (1 - |z|)^{-(1+p)} dm(z)`.
//!
//! The disk is tiled by polar cells in the coordinates `t = 1 - r` and `θ`,
//! starting from the dyadic annuli `t ∈ [2^{-k-1}, 2^{-k}]`, each cut into
//! four radial bands of `32·2^k` angular cells. On a cell the Schwarz–Pick
//! lemma bounds `|B|` from both sides by its value and hyperbolic derivative
//! at the cell centre and the pseudo-hyperbolic radius of the cell, so
//! every cell is certified inside the sublevel set, outside it, or
//! straddling its boundary. Straddling cells are split in
//! order of decreasing weight until the enclosure is narrow enough. Cell
//! weights are integrated exactly.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::radial_weight_mass_t;
use crate::error::{check_range, Error, Result};
use crate::product::BlaschkeProduct;
use crate::quad::QuadratureConfig;

/// Lower and upper bounds for the weighted area of `{|B| < c}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SublevelEnclosure {
    pub lower: f64,
    pub upper: f64,
    /// Cells whose `|B|` was evaluated.
    pub cells: usize,
}

impl SublevelEnclosure {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    t_lo: f64,
    t_hi: f64,
    th_lo: f64,
    th_hi: f64,
    depth: u32,
}

impl Cell {
    fn mass(&self, p: f64) -> f64 {
        (self.th_hi - self.th_lo) * radial_weight_mass_t(self.t_lo, self.t_hi, p)
    }

    fn quarters(&self) -> [Cell; 4] {
        let tm = 0.5 * (self.t_lo + self.t_hi);
        let thm = 0.5 * (self.th_lo + self.th_hi);
        let depth = self.depth + 1;
        let c = |t_lo, t_hi, th_lo, th_hi| Cell {
            t_lo,
            t_hi,
            th_lo,
            th_hi,
            depth,
        };
        [
            c(self.t_lo, tm, self.th_lo, thm),
            c(self.t_lo, tm, thm, self.th_hi),
            c(tm, self.t_hi, self.th_lo, thm),
            c(tm, self.t_hi, thm, self.th_hi),
        ]
    }

    fn halves_in_angle(&self) -> [Cell; 2] {
        let thm = 0.5 * (self.th_lo + self.th_hi);
        [Cell { th_hi: thm, ..*self }, Cell { th_lo: thm, ..*self }]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Inside,
    Outside,
    Straddles,
}

/// Schwarz–Pick classification of a cell against the level `c`.
fn classify(b: &BlaschkeProduct, cell: &Cell, c: f64) -> Verdict {
    let tm = 0.5 * (cell.t_lo + cell.t_hi);
    let thm = 0.5 * (cell.th_lo + cell.th_hi);
    let w = Complex64::from_polar(1.0 - tm, thm);
    let mut reach = 0.0f64;
    for t in [cell.t_lo, cell.t_hi] {
        for th in [cell.th_lo, cell.th_hi] {
            reach = reach.max((Complex64::from_polar(1.0 - t, th) - w).norm());
        }
    }
    // |1 - w̄ z| >= 1 - |w| |z| on the cell
    let rho = (reach / (1.0 - (1.0 - tm) * (1.0 - cell.t_lo))).min(1.0);
    let (value, deriv) = b.value_and_derivative(w);
    let value = value.norm();
    // Schwarz-Pick applied to the difference quotient of the renormalized
    // map: a hyperbolic derivative λ at the centre gives
    // ρ(B(z), B(w)) <= ρ (ρ + λ) / (1 + λ ρ)
    let lambda = (deriv.norm() * (1.0 - w.norm_sqr()) / (1.0 - value * value)).min(1.0);
    let spread = (rho * (rho + lambda) / (1.0 + lambda * rho) * (1.0 + 1e-12)).min(rho);
    let upper = (value + spread) / (1.0 + spread * value);
    let lower = if value > spread {
        (value - spread) / (1.0 - spread * value)
    } else {
        0.0
    };
    if upper < c {
        Verdict::Inside
    } else if lower >= c {
        Verdict::Outside
    } else {
        Verdict::Straddles
    }
}

/// Euclidean distance from `a` to the polar rectangle of a cell whose angular
/// width is below π.
fn distance_to_cell(a: Complex64, cell: &Cell) -> f64 {
    let r0 = 1.0 - cell.t_hi;
    let r1 = 1.0 - cell.t_lo;
    let s = a.norm();
    let phi = a.arg().rem_euclid(TAU);
    let offset = (phi - cell.th_lo).rem_euclid(TAU);
    if s == 0.0 || offset <= cell.th_hi - cell.th_lo {
        return (r0 - s).max(s - r1).max(0.0);
    }
    [cell.th_lo, cell.th_hi]
        .iter()
        .map(|&th| {
            let u = Complex64::from_polar(1.0, th);
            let x = (a * u.conj()).re.clamp(r0, r1);
            (a - x * u).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Lower bound for `|B|` on a cell, one factor at a time.
///
/// With `d` the distance from the zero `a` to the cell, `|1 - āz| <=
/// (1 - |a|²) + |a| d` gives `ρ(z, a) >= d / ((1 - |a|²) + |a| d)`. Near the
/// circle the identity `1 - ρ² = (1 - |a|²)(1 - |z|²) / |1 - āz|²` is much
/// sharper, with `|1 - āz|` bounded below by `1 - |a| r_max` and by `|a|`
/// times the distance from `1/ā` to the cell.
fn lower_bound_on_cell(b: &BlaschkeProduct, cell: &Cell) -> f64 {
    let r0 = 1.0 - cell.t_hi;
    let r1 = 1.0 - cell.t_lo;
    let mut bound = 1.0;
    for e in b.zeros().entries() {
        let a = e.z();
        let s = a.norm();
        let d = distance_to_cell(a, cell);
        let near = d / ((1.0 - s * s) + s * d);
        let mut gap = 1.0 - s * r1;
        if s > 0.0 {
            gap = gap.max(s * distance_to_cell(a / (s * s), cell));
        }
        let far = (1.0 - (1.0 - s * s) * (1.0 - r0 * r0) / (gap * gap)).max(0.0).sqrt();
        bound *= near.max(far).min(1.0).powi(e.mult as i32);
        if bound == 0.0 {
            break;
        }
    }
    bound
}

/// `min_{|z| = R} |B(z)|` is at least this product; used to stop adding annuli.
fn circle_lower_bound(b: &BlaschkeProduct, radius: f64) -> f64 {
    b.zeros()
        .entries()
        .iter()
        .map(|e| {
            let s = e.point.modulus();
            ((radius - s) / (1.0 - radius * s)).max(0.0).powi(e.mult as i32)
        })
        .product()
}

/// Max-heap entry ordered by mass, ties broken by insertion order.
struct Pending {
    mass: f64,
    seq: u64,
    cell: Cell,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        self.mass.total_cmp(&other.mass).then_with(|| other.seq.cmp(&self.seq))
    }
}

struct Refiner<'a> {
    b: &'a BlaschkeProduct,
    c: f64,
    p: f64,
    lower: f64,
    open: BinaryHeap<Pending>,
    open_mass: f64,
    seq: u64,
    cells: usize,
}

impl Refiner<'_> {
    fn push(&mut self, cell: Cell) {
        self.cells += 1;
        match classify(self.b, &cell, self.c) {
            Verdict::Inside => self.lower += cell.mass(self.p),
            Verdict::Outside => {}
            Verdict::Straddles => {
                let mass = cell.mass(self.p);
                self.open_mass += mass;
                self.seq += 1;
                self.open.push(Pending {
                    mass,
                    seq: self.seq,
                    cell,
                });
            }
        }
    }

    /// Drops wide cells that the per-zero bound already puts outside, then
    /// hands cells of angular width `base` to the classifier.
    fn seed(&mut self, cell: Cell, base: f64) {
        if self.b.degree() > 0 && lower_bound_on_cell(self.b, &cell) >= self.c {
            return;
        }
        if cell.th_hi - cell.th_lo > 1.5 * base {
            let [l, r] = cell.halves_in_angle();
            self.seed(l, base);
            self.seed(r, base);
        } else {
            self.push(cell);
        }
    }
}

fn check_args(c: f64, p: f64, cfg: &QuadratureConfig) -> Result<()> {
    cfg.validate()?;
    check_range("c", c, c > 0.0 && c < 1.0, "in (0, 1)")?;
    check_range("p", p, p > 0.0 && p < 1.0, "in (0, 1)")
}

/// Enclosure of `I_c(B) = ∫_{|B| < c} (1 - |z|)^{-(1+p)} dm(z)`.
///
/// Refinement stops once `upper - lower <= rel_tol · midpoint`, or when every
/// remaining straddling cell sits at `refinement_depth`; the returned bounds
/// are rigorous up to floating-point rounding either way.
pub fn sublevel_enclosure(b: &BlaschkeProduct, c: f64, p: f64, cfg: &QuadratureConfig) -> Result<SublevelEnclosure> {
    check_args(c, p, cfg)?;
    let mut refiner = Refiner {
        b,
        c,
        p,
        lower: 0.0,
        open: BinaryHeap::new(),
        open_mass: 0.0,
        seq: 0,
        cells: 0,
    };
    if b.degree() == 0 {
        return Ok(SublevelEnclosure {
            lower: 0.0,
            upper: 0.0,
            cells: 0,
        });
    }

    // annulus k covers t in [2^{-k-1}, 2^{-k}], except k = 0 which is r <= 1/2
    let mut k = 0usize;
    loop {
        let t_hi = 0.5f64.powi(k as i32);
        let t_lo = 0.5 * t_hi;
        let inner_radius = 1.0 - t_hi;
        if k > 0 && circle_lower_bound(b, inner_radius) >= c {
            break;
        }
        let base = TAU / (32.0 * 2f64.powi(k as i32));
        for band in 0..4 {
            let lo = t_lo + 0.125 * t_hi * band as f64;
            let hi = lo + 0.125 * t_hi;
            for j in 0..8 {
                let cell = Cell {
                    t_lo: lo,
                    t_hi: hi,
                    th_lo: TAU * j as f64 / 8.0,
                    th_hi: TAU * (j + 1) as f64 / 8.0,
                    depth: 0,
                };
                refiner.seed(cell, base);
            }
        }
        k += 1;
        if k > 1000 {
            return Err(Error::NotConverged {
                what: "sublevel annuli",
                detail: "level set reaches too close to the circle".into(),
            });
        }
    }

    let mut stuck = 0.0;
    loop {
        let width = stuck + refiner.open_mass.max(0.0);
        let mid = refiner.lower + 0.5 * width;
        if width <= cfg.rel_tol * mid {
            break;
        }
        let Some(next) = refiner.open.pop() else {
            break;
        };
        refiner.open_mass -= next.mass;
        if next.cell.depth >= cfg.refinement_depth {
            stuck += next.mass;
            continue;
        }
        for q in next.cell.quarters() {
            refiner.push(q);
        }
    }
    // recompute the open mass from scratch to shed drift from the running sum
    let open: f64 = refiner.open.iter().map(|x| x.mass).sum();
    let lower = refiner.lower;
    Ok(SublevelEnclosure {
        lower,
        upper: lower + stuck + open,
        cells: refiner.cells,
    })
}

/// Midpoint of [`sublevel_enclosure`], or [`Error::EnclosureTooWide`] when
/// the refinement depth ran out before the relative tolerance was met.
pub fn sublevel_integral(b: &BlaschkeProduct, c: f64, p: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let e = sublevel_enclosure(b, c, p, cfg)?;
    if e.width() > cfg.rel_tol * e.midpoint() * (1.0 + 1e-9) {
        return Err(Error::EnclosureTooWide {
            lower: e.lower,
            upper: e.upper,
        });
    }
    Ok(e.midpoint())
}
