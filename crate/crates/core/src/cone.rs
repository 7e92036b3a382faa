//! Stolz angles and the cone counting function
//! `F_{α,B}(θ) = Σ_{z_n ∈ Γ_α(e^{iθ})} 1 / (1 - |z_n|)`.
//!
//! A zero `s e^{iφ}` lies in `Γ_α(e^{iθ}) = {z : |z - e^{iθ}| < α (1 - |z|)}`
//! exactly when `|θ - φ| < arccos κ` with `κ = (1 + s² - α²(1-s)²) / (2s)`,
//! so `F` is a finite sum of indicator functions of open arcs (the cone
//! shadows of the zeros). Everything here works on those arcs directly and is
//! exact up to rounding in the arc endpoints.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::disk::{canonical_angle, BoundaryPoint, DiskPoint};
use crate::error::{check_range, Result};
use crate::product::BlaschkeProduct;
use crate::zeros::ZeroList;

fn check_alpha(alpha: f64) -> Result<()> {
    check_range("alpha", alpha, alpha > 1.0, "> 1")
}

/// `Γ_α(e^{iθ})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StolzAngle {
    vertex: BoundaryPoint,
    alpha: f64,
}

impl StolzAngle {
    pub fn new(vertex: BoundaryPoint, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(StolzAngle { vertex, alpha })
    }

    pub fn vertex(&self) -> BoundaryPoint {
        self.vertex
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `|z - e^{iθ}| < α (1 - |z|)`.
    pub fn contains(&self, z: DiskPoint) -> bool {
        in_stolz(z, self)
    }
}

pub fn in_stolz(z: DiskPoint, angle: &StolzAngle) -> bool {
    (z.z() - angle.vertex.point()).norm() < angle.alpha * (1.0 - z.modulus())
}

/// Half-width of the set of vertices `θ` whose cone contains `z`; `π` or more
/// means every vertex.
pub fn shadow_half_width(z: DiskPoint, alpha: f64) -> f64 {
    let s = z.modulus();
    if s == 0.0 {
        return f64::INFINITY;
    }
    let kappa = (1.0 + s * s - alpha * alpha * (1.0 - s) * (1.0 - s)) / (2.0 * s);
    if kappa < -1.0 {
        f64::INFINITY
    } else {
        kappa.min(1.0).acos()
    }
}

/// Signed-free angular distance between two angles, in `[0, π]`.
fn angular_offset(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn in_shadow(z: DiskPoint, alpha: f64, theta: f64) -> bool {
    let h = shadow_half_width(z, alpha);
    h.is_infinite() || angular_offset(theta, z.argument()) < h
}

/// `(1 - |z_n|)^{-1}` if `z_n ∈ Γ_α(e^{iθ})`, else 0.
pub fn box_kernel(zn: DiskPoint, alpha: f64, theta: BoundaryPoint) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(if in_shadow(zn, alpha, theta.theta()) {
        1.0 / zn.depth()
    } else {
        0.0
    })
}

/// `F_{α,B}(θ)`.
pub fn cone_function(b: &BlaschkeProduct, alpha: f64, theta: BoundaryPoint) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(b.zeros()
        .entries()
        .iter()
        .filter(|e| in_shadow(e.point, alpha, theta.theta()))
        .map(|e| e.mult as f64 / e.point.depth())
        .sum())
}

/// A maximal interval of `[0, 2π)` on which `F` is constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSegment {
    pub start: f64,
    pub end: f64,
    pub value: f64,
}

/// `F_{α,B}` as a step function on `[0, 2π)`.
///
/// Segments are open intervals between consecutive shadow endpoints;
/// the values of `F` at the finitely many endpoints themselves are not
/// represented.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeProfile {
    pub alpha: f64,
    pub segments: Vec<ProfileSegment>,
}

impl ConeProfile {
    pub fn new(zeros: &ZeroList, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let entries = zeros.entries();
        let weights: Vec<f64> = entries.iter().map(|e| e.mult as f64 / e.point.depth()).collect();

        let mut always = Vec::new();
        // (angle, zero index, entering?)
        let mut events: Vec<(f64, usize, bool)> = Vec::new();
        let mut active = BTreeSet::new();
        for (i, e) in entries.iter().enumerate() {
            let h = shadow_half_width(e.point, alpha);
            if h >= PI {
                always.push(i);
                continue;
            }
            let phi = e.point.argument();
            let start = canonical_angle(phi - h);
            let end = canonical_angle(phi + h);
            events.push((start, i, true));
            events.push((end, i, false));
            if start > end || (start == end && h > 0.0) {
                // the arc wraps through 0
                active.insert(i);
            }
        }
        active.extend(always.iter().copied());
        events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

        let value_of = |set: &BTreeSet<usize>| set.iter().map(|&i| weights[i]).sum::<f64>();
        let mut segments = Vec::new();
        let mut at = 0.0;
        let mut k = 0;
        loop {
            let next = events.get(k).map_or(TAU, |e| e.0);
            if next > at {
                segments.push(ProfileSegment {
                    start: at,
                    end: next,
                    value: value_of(&active),
                });
                at = next;
            }
            if k == events.len() {
                break;
            }
            // apply every event at this angle before opening the next segment
            while k < events.len() && events[k].0 == next {
                let (_, i, entering) = events[k];
                if entering {
                    active.insert(i);
                } else {
                    active.remove(&i);
                }
                k += 1;
            }
        }
        // merge equal neighbours so segments are maximal
        let mut merged: Vec<ProfileSegment> = Vec::with_capacity(segments.len());
        for s in segments {
            match merged.last_mut() {
                Some(last) if last.value == s.value => last.end = s.end,
                _ => merged.push(s),
            }
        }
        Ok(ConeProfile {
            alpha,
            segments: merged,
        })
    }

    /// `(1/2π) ∫ F^p dθ`.
    pub fn power_mean(&self, p: f64) -> f64 {
        self.segments
            .iter()
            .filter(|s| s.value > 0.0)
            .map(|s| (s.end - s.start) * s.value.powf(p))
            .sum::<f64>()
            / TAU
    }

    /// `|{θ : F(θ) > λ}| / 2π`.
    pub fn distribution(&self, lambda: f64) -> f64 {
        self.segments
            .iter()
            .filter(|s| s.value > lambda)
            .map(|s| s.end - s.start)
            .sum::<f64>()
            / TAU
    }

    /// `{θ : F(θ) > λ}` as disjoint open arcs.
    pub fn superlevel_arcs(&self, lambda: f64) -> BoundaryArcSet {
        let mut arcs: Vec<Arc> = Vec::new();
        for s in self.segments.iter().filter(|s| s.value > lambda) {
            match arcs.last_mut() {
                Some(last) if last.end == s.start => last.end = s.end,
                _ => arcs.push(Arc {
                    start: s.start,
                    end: s.end,
                }),
            }
        }
        // an arc ending at 2π continues the one starting at 0
        if arcs.len() > 1 && arcs[0].start == 0.0 && arcs[arcs.len() - 1].end == TAU {
            let first = arcs.remove(0);
            let last = arcs.last_mut().expect("at least one arc left");
            last.end = TAU + first.end;
        }
        BoundaryArcSet { arcs }
    }
}

/// An open arc `{e^{iθ} : start < θ < end}` with `0 <= start < 2π` and
/// `start < end <= start + 2π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub start: f64,
    pub end: f64,
}

impl Arc {
    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn contains(&self, theta: f64) -> bool {
        let offset = (theta - self.start).rem_euclid(TAU);
        offset > 0.0 && offset < self.length() || self.length() >= TAU
    }
}

/// Pairwise disjoint open arcs of the circle.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BoundaryArcSet {
    pub arcs: Vec<Arc>,
}

impl BoundaryArcSet {
    /// Total length divided by `2π`.
    pub fn normalized_length(&self) -> f64 {
        self.arcs.iter().map(Arc::length).sum::<f64>() / TAU
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.arcs.iter().any(|a| a.contains(theta))
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }
}

/// `‖F_{α,B}‖_{L^p} = ((1/2π) ∫ F^p dθ)^{1/p}`, exact from the breakpoint sweep.
pub fn cone_norm(b: &BlaschkeProduct, alpha: f64, p: f64) -> Result<f64> {
    check_range("p", p, p > 0.0, "positive and finite")?;
    if b.degree() == 0 {
        check_alpha(alpha)?;
        return Ok(0.0);
    }
    Ok(ConeProfile::new(b.zeros(), alpha)?.power_mean(p).powf(1.0 / p))
}

/// `{θ : F_{α,B}(θ) > 2^N}`.
pub fn level_arcs(b: &BlaschkeProduct, alpha: f64, n: u32) -> Result<BoundaryArcSet> {
    check_range("N", n as f64, n >= 1, ">= 1")?;
    let profile = ConeProfile::new(b.zeros(), alpha)?;
    Ok(profile.superlevel_arcs(2f64.powi(n as i32)))
}

/// `((1/2π) ∫ #(zeros ∩ Γ_α(e^{iθ})) dθ, Σ (1 - |z_n|))`, counted with
/// multiplicity. The ratio of the two depends only on `α` up to bounded
/// factors.
pub fn cone_count_check(zeros: &ZeroList, alpha: f64) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for e in zeros.entries() {
        let h = shadow_half_width(e.point, alpha);
        let arc = if h >= PI { TAU } else { 2.0 * h };
        lhs += e.mult as f64 * arc / TAU;
        rhs += e.mult as f64 * e.point.depth();
    }
    Ok((lhs, rhs))
}
