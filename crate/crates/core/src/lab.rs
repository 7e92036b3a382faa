//! Zero-set families, the all-functionals report, exponent fits and ratio
//! bands.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cone::{cone_norm, shadow_half_width};
use crate::disk::DiskPoint;
use crate::dyadic::{build_tree, family_sum, maximal_families, protas_dyadic_sum, verbitskii_profile, DyadicSector};
use crate::error::{check_range, Error, Result};
use crate::norms::{hp_norm, sublevel_integral, NormReport};
use crate::product::BlaschkeProduct;
use crate::quad::QuadratureConfig;
use crate::zeros::{ComplexRecord, Zero, ZeroFile, ZeroList, DEFAULT_MAX_DEGREE};

/// Version of every JSON and CSV layout written by this module.
pub const SCHEMA_VERSION: u32 = 1;

fn default_min_depth() -> f64 {
    1e-3
}

/// Generator behind random recipes, named in the recipe so that other
/// implementations can reproduce the same instances.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RngAlgorithm {
    /// `rand_chacha::ChaCha8Rng::seed_from_u64`, two `f64` draws per zero.
    #[default]
    Chacha8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternCell {
    pub level: u32,
    pub index: u64,
    pub count: u32,
}

/// A recipe for a zero list. Random kinds are reproducible from their seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    /// `1 - 2^{-j}` for `j = 1..=depth`.
    RadialSeparated { depth: u32 },
    /// `counts[j-1]` points at modulus `1 - 2^{-j}`, spread over 90% of the
    /// part of that circle inside `Γ_β(1)`.
    StolzConfined { beta: f64, counts: Vec<u32> },
    /// `count` zeros at the top-part centre of each listed dyadic sector.
    DyadicPattern { cells: Vec<PatternCell> },
    /// `n` zeros with `1 - |z|` log-uniform on `[min_depth, 1]` and uniform
    /// argument, drawn from ChaCha8 seeded with `seed`.
    UniformRandom {
        n: usize,
        seed: u64,
        #[serde(default = "default_min_depth")]
        min_depth: f64,
        #[serde(default)]
        rng: RngAlgorithm,
    },
    /// A single zero at `(1 - δ) e^{iθ}`.
    SingleZeroScaling {
        delta: f64,
        #[serde(default)]
        theta: f64,
    },
}

impl FamilySpec {
    /// One zero at the top-part centre of every sector of `level`.
    pub fn full_level(level: u32, count: u32) -> Result<FamilySpec> {
        check_range("level", level as f64, (1..=13).contains(&level), "in 1..=13")?;
        Ok(FamilySpec::DyadicPattern {
            cells: (1..=DyadicSector::count_at(level))
                .map(|index| PatternCell { level, index, count })
                .collect(),
        })
    }

    /// Short human-readable label.
    pub fn describe(&self) -> String {
        match self {
            FamilySpec::RadialSeparated { depth } => format!("radial_separated(J={depth})"),
            FamilySpec::StolzConfined { beta, counts } => format!("stolz_confined(beta={beta}, counts={counts:?})"),
            FamilySpec::DyadicPattern { cells } => format!("dyadic_pattern({} cells)", cells.len()),
            FamilySpec::UniformRandom { n, seed, min_depth, .. } => {
                format!("uniform_random(n={n}, seed={seed}, min_depth={min_depth})")
            }
            FamilySpec::SingleZeroScaling { delta, theta } => format!("single_zero(delta={delta}, theta={theta})"),
        }
    }
}

fn modulus_at_level(j: u32) -> f64 {
    1.0 - 0.5f64.powi(j as i32)
}

/// Builds the zero list described by `spec`.
pub fn generate(spec: &FamilySpec) -> Result<ZeroList> {
    match spec {
        FamilySpec::RadialSeparated { depth } => {
            check_range("depth", *depth as f64, *depth <= 52, "<= 52")?;
            ZeroList::from_points((1..=*depth).map(|j| Complex64::new(modulus_at_level(j), 0.0)))
        }
        FamilySpec::StolzConfined { beta, counts } => {
            check_range("beta", *beta, *beta > 1.0, "> 1")?;
            check_range("counts", counts.len() as f64, counts.len() <= 52, "at most 52 levels")?;
            let total: u64 = counts.iter().map(|&n| n as u64).sum();
            if total > DEFAULT_MAX_DEGREE as u64 {
                return Err(Error::DegreeTooLarge {
                    degree: total as usize,
                    max: DEFAULT_MAX_DEGREE,
                });
            }
            let mut points = Vec::new();
            for (i, &n) in counts.iter().enumerate() {
                let s = modulus_at_level(i as u32 + 1);
                let half = shadow_half_width(DiskPoint::new(s, 0.0)?, *beta).min(PI);
                for k in 0..n {
                    let offset = 0.9 * half * (2.0 * k as f64 - (n as f64 - 1.0)) / n as f64;
                    points.push(Complex64::from_polar(s, offset));
                }
            }
            ZeroList::from_points(points)
        }
        FamilySpec::DyadicPattern { cells } => {
            let mut merged: BTreeMap<DyadicSector, u32> = BTreeMap::new();
            for c in cells {
                let sector = DyadicSector::new(c.level, c.index)?;
                *merged.entry(sector).or_insert(0) += c.count;
            }
            ZeroList::new(
                merged
                    .into_iter()
                    .filter(|&(_, count)| count > 0)
                    .map(|(s, mult)| Zero {
                        point: s.top_center(),
                        mult,
                    })
                    .collect(),
            )
        }
        FamilySpec::UniformRandom {
            n,
            seed,
            min_depth,
            rng,
        } => {
            check_range("n", *n as f64, *n <= DEFAULT_MAX_DEGREE, "<= 4096")?;
            check_range(
                "min_depth",
                *min_depth,
                *min_depth > 0.0 && *min_depth <= 1.0,
                "in (0, 1]",
            )?;
            let RngAlgorithm::Chacha8 = rng;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let points: Vec<Complex64> = (0..*n)
                .map(|_| {
                    let u: f64 = rng.random();
                    let v: f64 = rng.random();
                    Complex64::from_polar(1.0 - min_depth.powf(u), TAU * v)
                })
                .collect();
            ZeroList::from_points(points)
        }
        FamilySpec::SingleZeroScaling { delta, theta } => {
            check_range("delta", *delta, *delta > 0.0 && *delta <= 1.0, "in (0, 1]")?;
            ZeroList::from_points([Complex64::from_polar(1.0 - delta, *theta)])
        }
    }
}

/// The product of a zero list, or the constant 1 for an empty list.
pub fn product_of(zeros: &ZeroList) -> Result<BlaschkeProduct> {
    if zeros.is_empty() {
        Ok(BlaschkeProduct::one())
    } else {
        BlaschkeProduct::new(zeros.clone())
    }
}

/// Parameters shared by every functional in a report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReportParams {
    pub p: f64,
    pub alpha: f64,
    pub c: f64,
    /// Depth of the dyadic tree.
    pub dyadic_levels: u32,
    /// Largest `N` in the maximal-family sum.
    pub n_max: u32,
}

impl Default for ReportParams {
    fn default() -> Self {
        ReportParams {
            p: 0.75,
            alpha: 2.0,
            c: 0.5,
            dyadic_levels: 40,
            n_max: 64,
        }
    }
}

impl ReportParams {
    pub fn validate(&self) -> Result<()> {
        check_range("p", self.p, self.p > 0.0 && self.p < 1.0, "in (0, 1)")?;
        check_range("alpha", self.alpha, self.alpha > 1.0, "> 1")?;
        check_range("c", self.c, self.c > 0.0 && self.c < 1.0, "in (0, 1)")?;
        check_range(
            "dyadic_levels",
            self.dyadic_levels as f64,
            (1..=40).contains(&self.dyadic_levels),
            "in 1..=40",
        )?;
        check_range(
            "n_max",
            self.n_max as f64,
            (1..=120).contains(&self.n_max),
            "in 1..=120",
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalError {
    pub functional: String,
    pub message: String,
}

/// Every functional of one zero list at fixed `(p, α, c)`.
///
/// Numeric failures of individual functionals leave that field empty and
/// are listed under `errors`; the remaining fields are still filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalReport {
    pub schema_version: u32,
    pub degree: usize,
    pub p: f64,
    pub alpha: f64,
    pub c: f64,
    /// `‖B'‖_{H^p}`.
    pub hp_norm: Option<f64>,
    pub hp_norm_p: Option<f64>,
    /// `I(c)` and the width of its enclosure.
    pub sublevel_ic: Option<f64>,
    pub sublevel_width: Option<f64>,
    /// `‖F_{α,B}‖_{L^p}` and its `p`-th power.
    pub cone_norm: Option<f64>,
    pub cone_norm_p: Option<f64>,
    /// `‖B‖_{B^1_p}`.
    pub besov_q1_sp: Option<f64>,
    pub carleson_log: Option<f64>,
    pub weak_hp: Option<f64>,
    pub protas_dyadic_sum: f64,
    pub corollary_f_sum: f64,
    pub corollary_f_truncated: bool,
    /// `Σ_j 2^{-j(1-p)} N_j^p`.
    pub verbitskii_sum: f64,
    /// Smallest aperture of a Stolz angle, with vertex over the deepest
    /// zero, that contains every zero.
    pub stolz_aperture: Option<f64>,
    /// `Σ (1 - |z_n|)^{1-p}`.
    pub depth_sum: f64,
    pub flags: Vec<String>,
    pub errors: Vec<FunctionalError>,
    pub params: ReportParams,
    pub config: QuadratureConfig,
}

/// Column order of [`FunctionalReport`] CSV rows.
pub const REPORT_COLUMNS: [&str; 22] = [
    "schema_version",
    "degree",
    "p",
    "alpha",
    "c",
    "hp_norm",
    "hp_norm_p",
    "sublevel_ic",
    "sublevel_width",
    "cone_norm",
    "cone_norm_p",
    "besov_q1_sp",
    "carleson_log",
    "weak_hp",
    "protas_dyadic_sum",
    "corollary_f_sum",
    "corollary_f_truncated",
    "verbitskii_sum",
    "stolz_aperture",
    "depth_sum",
    "flags",
    "errors",
];

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl FunctionalReport {
    pub fn csv_fields(&self) -> Vec<String> {
        vec![
            self.schema_version.to_string(),
            self.degree.to_string(),
            self.p.to_string(),
            self.alpha.to_string(),
            self.c.to_string(),
            cell(self.hp_norm),
            cell(self.hp_norm_p),
            cell(self.sublevel_ic),
            cell(self.sublevel_width),
            cell(self.cone_norm),
            cell(self.cone_norm_p),
            cell(self.besov_q1_sp),
            cell(self.carleson_log),
            cell(self.weak_hp),
            self.protas_dyadic_sum.to_string(),
            self.corollary_f_sum.to_string(),
            self.corollary_f_truncated.to_string(),
            self.verbitskii_sum.to_string(),
            cell(self.stolz_aperture),
            self.depth_sum.to_string(),
            self.flags.join(";"),
            self.errors
                .iter()
                .map(|e| format!("{}: {}", e.functional, e.message))
                .collect::<Vec<_>>()
                .join(";"),
        ]
    }

    /// Header plus one row.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(REPORT_COLUMNS).expect("in-memory write");
        w.write_record(self.csv_fields()).expect("in-memory write");
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    pub fn value(&self, f: Functional) -> Option<f64> {
        match f {
            Functional::HpNormP => self.hp_norm_p,
            Functional::SublevelIc => self.sublevel_ic,
            Functional::ConeNormP => self.cone_norm_p,
            Functional::BesovQ1Sp => self.besov_q1_sp,
            Functional::CarlesonLog => self.carleson_log,
            Functional::WeakHp => self.weak_hp,
            Functional::ProtasDyadicSum => Some(self.protas_dyadic_sum),
            Functional::CorollaryFSum => Some(self.corollary_f_sum),
            Functional::VerbitskiiSum => Some(self.verbitskii_sum),
            Functional::DepthSum => Some(self.depth_sum),
        }
    }
}

/// `max_n |z_n - v| / (1 - |z_n|)` with `v` over the deepest zero.
pub fn stolz_aperture(zeros: &ZeroList) -> Option<f64> {
    let deepest = zeros
        .entries()
        .iter()
        .min_by(|a, b| a.point.depth().total_cmp(&b.point.depth()))?;
    let vertex = Complex64::from_polar(1.0, deepest.point.argument());
    Some(
        zeros
            .entries()
            .iter()
            .map(|e| (e.z() - vertex).norm() / e.point.depth())
            .fold(1.0, f64::max),
    )
}

pub fn functional_report(zeros: &ZeroList, params: &ReportParams, cfg: &QuadratureConfig) -> Result<FunctionalReport> {
    params.validate()?;
    cfg.validate()?;
    let ReportParams { p, alpha, c, .. } = *params;
    let b = product_of(zeros)?;
    let norms = NormReport::compute(&b, p, alpha, c, cfg);
    let mut errors: Vec<FunctionalError> = norms
        .errors
        .iter()
        .map(|(functional, message)| FunctionalError {
            functional: functional.clone(),
            message: message.clone(),
        })
        .collect();
    let cone = match cone_norm(&b, alpha, p) {
        Ok(v) => Some(v),
        Err(e) => {
            errors.push(FunctionalError {
                functional: "cone_norm".into(),
                message: e.to_string(),
            });
            None
        }
    };
    let tree = build_tree(zeros, params.dyadic_levels)?;
    let families = maximal_families(&tree, params.n_max)?;
    let fsum = family_sum(&families, p);

    let mut flags = Vec::new();
    if !(p > 0.5 && p < 1.0) {
        flags.push("p outside (1/2, 1)".to_string());
    }
    if tree.overflow_count() > 0 {
        flags.push(format!(
            "{} zeros deeper than dyadic level {}",
            tree.overflow_count(),
            params.dyadic_levels
        ));
    }
    if fsum.truncated {
        flags.push(format!("maximal-family sum truncated at N = {}", params.n_max));
    }

    Ok(FunctionalReport {
        schema_version: SCHEMA_VERSION,
        degree: zeros.degree(),
        p,
        alpha,
        c,
        hp_norm: norms.hp_norm,
        hp_norm_p: norms.hp_norm_p,
        sublevel_ic: norms.sublevel_ic,
        sublevel_width: norms.sublevel_width,
        cone_norm: cone,
        cone_norm_p: cone.map(|v| v.powf(p)),
        besov_q1_sp: norms.besov_q1_sp,
        carleson_log: norms.carleson_log,
        weak_hp: norms.weak_hp,
        protas_dyadic_sum: protas_dyadic_sum(&tree, p),
        corollary_f_sum: fsum.value,
        corollary_f_truncated: fsum.truncated,
        verbitskii_sum: verbitskii_profile(zeros, p)?.sum,
        stolz_aperture: stolz_aperture(zeros),
        depth_sum: zeros.depth_power_sum(1.0 - p),
        flags,
        errors,
        params: *params,
        config: cfg.clone(),
    })
}

/// A scalar functional that can be swept over a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Functional {
    HpNormP,
    SublevelIc,
    ConeNormP,
    BesovQ1Sp,
    CarlesonLog,
    WeakHp,
    ProtasDyadicSum,
    CorollaryFSum,
    VerbitskiiSum,
    DepthSum,
}

impl Functional {
    pub const ALL: [Functional; 10] = [
        Functional::HpNormP,
        Functional::SublevelIc,
        Functional::ConeNormP,
        Functional::BesovQ1Sp,
        Functional::CarlesonLog,
        Functional::WeakHp,
        Functional::ProtasDyadicSum,
        Functional::CorollaryFSum,
        Functional::VerbitskiiSum,
        Functional::DepthSum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Functional::HpNormP => "hp_norm_p",
            Functional::SublevelIc => "sublevel_ic",
            Functional::ConeNormP => "cone_norm_p",
            Functional::BesovQ1Sp => "besov_q1_sp",
            Functional::CarlesonLog => "carleson_log",
            Functional::WeakHp => "weak_hp",
            Functional::ProtasDyadicSum => "protas_dyadic_sum",
            Functional::CorollaryFSum => "corollary_f_sum",
            Functional::VerbitskiiSum => "verbitskii_sum",
            Functional::DepthSum => "depth_sum",
        }
    }

    /// Computes just this functional.
    pub fn evaluate(self, zeros: &ZeroList, params: &ReportParams, cfg: &QuadratureConfig) -> Result<f64> {
        params.validate()?;
        let ReportParams { p, alpha, c, .. } = *params;
        let b = product_of(zeros)?;
        match self {
            Functional::HpNormP => Ok(hp_norm(&b, p, cfg)?.powf(p)),
            Functional::SublevelIc => sublevel_integral(&b, c, p, cfg),
            Functional::ConeNormP => Ok(cone_norm(&b, alpha, p)?.powf(p)),
            Functional::BesovQ1Sp => crate::norms::besov_norm(&b, 1.0, p, cfg),
            Functional::CarlesonLog => crate::norms::carleson_integral(&b, p, cfg),
            Functional::WeakHp => crate::norms::weak_hp_quasinorm(&b, p, cfg),
            Functional::ProtasDyadicSum => Ok(protas_dyadic_sum(&build_tree(zeros, params.dyadic_levels)?, p)),
            Functional::CorollaryFSum => {
                let tree = build_tree(zeros, params.dyadic_levels)?;
                Ok(family_sum(&maximal_families(&tree, params.n_max)?, p).value)
            }
            Functional::VerbitskiiSum => Ok(verbitskii_profile(zeros, p)?.sum),
            Functional::DepthSum => Ok(zeros.depth_power_sum(1.0 - p)),
        }
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Functional {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Functional::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidFamily(format!("unknown functional {s:?}")))
    }
}

/// A family member with its driving parameter (`δ` for single zeros).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMember {
    pub x: f64,
    pub spec: FamilySpec,
}

/// Single zeros `(1 - δ) e^{iθ}` over a grid of `δ`.
pub fn single_zero_family(deltas: &[f64], theta: f64) -> Vec<SweepMember> {
    deltas
        .iter()
        .map(|&delta| SweepMember {
            x: delta,
            spec: FamilySpec::SingleZeroScaling { delta, theta },
        })
        .collect()
}

/// `δ = 2^{-k}` for `k = k_min..=k_max`.
pub fn dyadic_deltas(k_min: u32, k_max: u32) -> Vec<f64> {
    (k_min..=k_max).map(|k| 0.5f64.powi(k as i32)).collect()
}

/// Radial families `1 - 2^{-j}, j <= J`, driven by the depth `2^{-J}` of the
/// deepest zero.
pub fn radial_family(depths: impl IntoIterator<Item = u32>) -> Vec<SweepMember> {
    depths
        .into_iter()
        .map(|depth| SweepMember {
            x: 0.5f64.powi(depth as i32),
            spec: FamilySpec::RadialSeparated { depth },
        })
        .collect()
}

/// Least-squares line through `(log x, log y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in `log y`.
    pub residual: f64,
    pub members: usize,
}

/// Fits `y ≈ e^{intercept} x^{slope}`; needs at least 5 points spanning two
/// decades of `x`, all with positive finite coordinates.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<ExponentFit> {
    if points.len() < 5 {
        return Err(Error::DegenerateGrid(format!(
            "{} members, need at least 5",
            points.len()
        )));
    }
    if let Some(&(x, y)) = points
        .iter()
        .find(|(x, y)| !(x.is_finite() && *x > 0.0 && y.is_finite() && *y > 0.0))
    {
        return Err(Error::DegenerateGrid(format!("point ({x}, {y}) has no logarithm")));
    }
    let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.0).fold(0.0, f64::max);
    if hi / lo < 100.0 {
        return Err(Error::DegenerateGrid(format!(
            "grid spans {:.2} decades, need 2",
            (hi / lo).log10()
        )));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(ExponentFit {
        slope,
        intercept,
        residual,
        members: points.len(),
    })
}

/// Log–log slope of one functional across a one-parameter family.
pub fn sweep_exponent(
    members: &[SweepMember],
    functional: Functional,
    params: &ReportParams,
    cfg: &QuadratureConfig,
) -> Result<ExponentFit> {
    let points = members
        .iter()
        .map(|m| Ok((m.x, functional.evaluate(&generate(&m.spec)?, params, cfg)?)))
        .collect::<Result<Vec<_>>>()?;
    fit_exponent(&points)
}

/// `(min, max)` of a ratio across a family, with `spread = max / min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub min: f64,
    pub max: f64,
    pub spread: f64,
    pub members: usize,
}

impl Band {
    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Option<Band> {
        let mut band: Option<Band> = None;
        for v in values.into_iter().filter(|v| v.is_finite() && *v > 0.0) {
            let b = band.get_or_insert(Band {
                min: v,
                max: v,
                spread: 1.0,
                members: 0,
            });
            b.min = b.min.min(v);
            b.max = b.max.max(v);
            b.members += 1;
        }
        band.map(|mut b| {
            b.spread = b.max / b.min;
            b
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberReport {
    pub label: String,
    pub x: Option<f64>,
    pub report: FunctionalReport,
    /// Named ratios used for the bands of the enclosing sweep.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub ratios: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub family: String,
    pub params: ReportParams,
    pub config: QuadratureConfig,
    pub members: Vec<MemberReport>,
    /// Fitted log–log slopes, only for functionals defined on every member
    /// of a grid spanning two decades.
    pub slopes: BTreeMap<String, ExponentFit>,
    pub bands: BTreeMap<String, Band>,
}

impl SweepReport {
    /// `(x, value)` pairs of one functional, for plotting.
    pub fn series(&self, f: Functional) -> Vec<(f64, f64)> {
        self.members
            .iter()
            .filter_map(|m| Some((m.x?, m.report.value(f)?)))
            .collect()
    }

    /// One CSV row per member: label, x, then the report columns.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["label", "x"];
        header.extend(REPORT_COLUMNS);
        w.write_record(&header).expect("in-memory write");
        for m in &self.members {
            let mut row = vec![m.label.clone(), cell(m.x)];
            row.extend(m.report.csv_fields());
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}

/// Full reports for every member plus the slope of every functional.
pub fn run_sweep(
    family: &str,
    members: &[SweepMember],
    params: &ReportParams,
    cfg: &QuadratureConfig,
) -> Result<SweepReport> {
    let mut out = Vec::with_capacity(members.len());
    for m in members {
        out.push(MemberReport {
            label: m.spec.describe(),
            x: Some(m.x),
            report: functional_report(&generate(&m.spec)?, params, cfg)?,
            ratios: BTreeMap::new(),
        });
    }
    let mut report = SweepReport {
        schema_version: SCHEMA_VERSION,
        family: family.to_string(),
        params: *params,
        config: cfg.clone(),
        members: out,
        slopes: BTreeMap::new(),
        bands: BTreeMap::new(),
    };
    for f in Functional::ALL {
        let series = report.series(f);
        if series.len() == members.len() {
            if let Ok(fit) = fit_exponent(&series) {
                report.slopes.insert(f.name().to_string(), fit);
            }
        }
    }
    Ok(report)
}

/// Apertures and levels swept for the robustness bands.
pub const ROBUST_ALPHAS: [f64; 3] = [1.5, 2.0, 4.0];
pub const ROBUST_LEVELS: [f64; 3] = [0.25, 0.5, 0.75];

/// Ratios `I(c)^{1/p} / ‖B'‖_{H^p}`, `‖F_α‖_p / ‖B'‖_{H^p}` and
/// `‖B‖_{B^1_p} / ‖B'‖_{H^p}^p` over a list of families, with their bands.
///
/// Band keys: `sublevel_over_hp`, `cone_over_hp`, `besov_over_hp_p` at the
/// given `(α, c)`, and `cone_over_hp@alpha=…`, `sublevel_over_hp@c=…` over
/// [`ROBUST_ALPHAS`] and [`ROBUST_LEVELS`].
pub fn theorem1_ratios(specs: &[FamilySpec], params: &ReportParams, cfg: &QuadratureConfig) -> Result<SweepReport> {
    params.validate()?;
    let p = params.p;
    let mut members = Vec::with_capacity(specs.len());
    for spec in specs {
        let zeros = generate(spec)?;
        let report = functional_report(&zeros, params, cfg)?;
        let mut ratios = BTreeMap::new();
        if let Some(hp) = report.hp_norm.filter(|&h| h > 0.0) {
            let b = product_of(&zeros)?;
            if let Some(i) = report.sublevel_ic {
                ratios.insert("sublevel_over_hp".to_string(), i.powf(1.0 / p) / hp);
            }
            if let Some(f) = report.cone_norm {
                ratios.insert("cone_over_hp".to_string(), f / hp);
            }
            if let Some(bs) = report.besov_q1_sp {
                ratios.insert("besov_over_hp_p".to_string(), bs / hp.powf(p));
            }
            for alpha in ROBUST_ALPHAS {
                let f = cone_norm(&b, alpha, p)?;
                ratios.insert(format!("cone_over_hp@alpha={alpha}"), f / hp);
            }
            for c in ROBUST_LEVELS {
                let value = if c == params.c {
                    report.sublevel_ic.ok_or(())
                } else {
                    sublevel_integral(&b, c, p, cfg).map_err(|_| ())
                };
                if let Ok(i) = value {
                    ratios.insert(format!("sublevel_over_hp@c={c}"), i.powf(1.0 / p) / hp);
                }
            }
        }
        members.push(MemberReport {
            label: spec.describe(),
            x: None,
            report,
            ratios,
        });
    }
    let mut names: Vec<String> = members.iter().flat_map(|m| m.ratios.keys().cloned()).collect();
    names.sort();
    names.dedup();
    let bands = names
        .into_iter()
        .filter_map(|name| {
            let band = Band::from_values(members.iter().filter_map(|m| m.ratios.get(&name).copied()))?;
            Some((name, band))
        })
        .collect();
    Ok(SweepReport {
        schema_version: SCHEMA_VERSION,
        family: format!("{} heterogeneous members", specs.len()),
        params: *params,
        config: cfg.clone(),
        members,
        slopes: BTreeMap::new(),
        bands,
    })
}

/// Preimages of `a` and the sum `Σ (1 - |z_k(a)|)^{1-p}` over them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrostmanReport {
    pub schema_version: u32,
    pub a: ComplexRecord,
    pub p: f64,
    /// The shifted product `(a - B) / (1 - ā B)`.
    pub shifted: ZeroFile,
    pub degree: usize,
    pub sum: f64,
    pub max_residual: f64,
    pub root_tol: f64,
}

pub fn frostman_report(b: &BlaschkeProduct, a: DiskPoint, p: f64, cfg: &QuadratureConfig) -> Result<FrostmanReport> {
    check_range("p", p, p > 0.0 && p < 1.0, "in (0, 1)")?;
    let shifted = b.frostman_shift(a, cfg.root_tol)?;
    let max_residual = shifted
        .zeros()
        .expanded()
        .map(|z| (b.evaluate(z) - a.z()).norm())
        .fold(0.0, f64::max);
    Ok(FrostmanReport {
        schema_version: SCHEMA_VERSION,
        a: ComplexRecord { re: a.re(), im: a.im() },
        p,
        degree: shifted.degree(),
        sum: shifted.zeros().depth_power_sum(1.0 - p),
        shifted: shifted.to_file(),
        max_residual,
        root_tol: cfg.root_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn radial_family_examples() {
        let z = generate(&FamilySpec::RadialSeparated { depth: 3 }).unwrap();
        let moduli: Vec<f64> = z.expanded().map(|z| z.re).collect();
        assert_eq!(moduli, vec![0.5, 0.75, 0.875]);
        assert!(generate(&FamilySpec::RadialSeparated { depth: 60 }).is_err());
    }

    #[test]
    fn stolz_with_unit_counts_is_radial() {
        let stolz = generate(&FamilySpec::StolzConfined {
            beta: 2.0,
            counts: vec![1; 6],
        })
        .unwrap();
        let radial = generate(&FamilySpec::RadialSeparated { depth: 6 }).unwrap();
        assert_eq!(stolz, radial);
    }

    #[test]
    fn stolz_points_lie_in_the_cone() {
        let zeros = generate(&FamilySpec::StolzConfined {
            beta: 2.0,
            counts: vec![1, 2, 4],
        })
        .unwrap();
        assert_eq!(zeros.degree(), 7);
        let cone = crate::cone::StolzAngle::new(crate::disk::BoundaryPoint::new(0.0), 2.0).unwrap();
        assert!(zeros.entries().iter().all(|e| cone.contains(e.point)));
    }

    #[test]
    fn full_level_pattern_fills_level() {
        let zeros = generate(&FamilySpec::full_level(5, 1).unwrap()).unwrap();
        let tree = build_tree(&zeros, 10).unwrap();
        for j in 1..=16 {
            assert_eq!(tree.count(&DyadicSector::new(5, j).unwrap()), 1);
        }
    }

    #[test]
    fn random_family_is_reproducible() {
        let spec = FamilySpec::UniformRandom {
            n: 100,
            seed: 7,
            min_depth: 1e-3,
            rng: RngAlgorithm::Chacha8,
        };
        let a = generate(&spec).unwrap();
        assert_eq!(a, generate(&spec).unwrap());
        assert_eq!(a.degree(), 100);
        assert!(a.min_depth() >= 1e-3);
        let other = generate(&FamilySpec::UniformRandom {
            n: 100,
            seed: 8,
            min_depth: 1e-3,
            rng: RngAlgorithm::Chacha8,
        })
        .unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn random_spec_names_its_generator() {
        let spec: FamilySpec = serde_json::from_str(r#"{"kind": "uniform_random", "n": 3, "seed": 1}"#).unwrap();
        assert!(serde_json::to_string(&spec).unwrap().contains(r#""rng":"chacha8""#));
        let bad = r#"{"kind": "uniform_random", "n": 3, "seed": 1, "rng": "pcg64"}"#;
        assert!(serde_json::from_str::<FamilySpec>(bad).is_err());
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = FamilySpec::StolzConfined {
            beta: 2.0,
            counts: vec![1, 2],
        };
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains("\"kind\":\"stolz_confined\""));
        assert_eq!(serde_json::from_str::<FamilySpec>(&text).unwrap(), spec);
        let single: FamilySpec = serde_json::from_str(r#"{"kind":"single_zero_scaling","delta":0.01}"#).unwrap();
        assert_eq!(generate(&single).unwrap().degree(), 1);
    }

    #[test]
    fn report_of_origin_zero() {
        let zeros = ZeroList::from_points([Complex64::new(0.0, 0.0)]).unwrap();
        let r = functional_report(&zeros, &ReportParams::default(), &cfg()).unwrap();
        assert!((r.hp_norm.unwrap() - 1.0).abs() < 1e-12);
        assert!((r.cone_norm_p.unwrap() - 1.0).abs() < 1e-12);
        let p = 0.75;
        let exact = TAU * crate::norms::radial_weight_mass(0.0, 0.5, p);
        assert!((r.sublevel_ic.unwrap() - exact).abs() < 1e-3 * exact);
        assert!(r.errors.is_empty());
        let csv = r.to_csv();
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.starts_with("schema_version,degree,p,"));
    }

    #[test]
    fn report_of_empty_list_is_all_zero() {
        let r = functional_report(&ZeroList::empty(), &ReportParams::default(), &cfg()).unwrap();
        for f in Functional::ALL {
            assert_eq!(r.value(f), Some(0.0), "{f}");
        }
        assert_eq!(r.hp_norm, Some(0.0));
        assert_eq!(r.cone_norm, Some(0.0));
    }

    #[test]
    fn report_is_deterministic() {
        let zeros = generate(&FamilySpec::UniformRandom {
            n: 12,
            seed: 3,
            min_depth: 1e-2,
            rng: RngAlgorithm::Chacha8,
        })
        .unwrap();
        let a = functional_report(&zeros, &ReportParams::default(), &cfg()).unwrap();
        let b = functional_report(&zeros, &ReportParams::default(), &cfg()).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn report_flags_out_of_range_p() {
        let zeros = generate(&FamilySpec::RadialSeparated { depth: 2 }).unwrap();
        let params = ReportParams {
            p: 0.25,
            ..Default::default()
        };
        let r = functional_report(&zeros, &params, &cfg()).unwrap();
        assert!(r.flags.iter().any(|f| f.contains("outside")));
        assert!(functional_report(
            &zeros,
            &ReportParams {
                alpha: 1.0,
                ..Default::default()
            },
            &cfg()
        )
        .is_err());
    }

    #[test]
    fn fit_recovers_power_law() {
        let points: Vec<(f64, f64)> = dyadic_deltas(2, 10).iter().map(|&d| (d, 3.0 * d.powf(0.25))).collect();
        let fit = fit_exponent(&points).unwrap();
        assert!((fit.slope - 0.25).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn fit_rejects_degenerate_grids() {
        let short: Vec<(f64, f64)> = dyadic_deltas(2, 5).iter().map(|&d| (d, d)).collect();
        assert!(matches!(fit_exponent(&short), Err(Error::DegenerateGrid(_))));
        let narrow: Vec<(f64, f64)> = (0..8).map(|k| (1.0 + k as f64, 1.0)).collect();
        assert!(matches!(fit_exponent(&narrow), Err(Error::DegenerateGrid(_))));
        let mut bad: Vec<(f64, f64)> = dyadic_deltas(2, 10).iter().map(|&d| (d, d)).collect();
        bad[3].1 = 0.0;
        assert!(matches!(fit_exponent(&bad), Err(Error::DegenerateGrid(_))));
    }

    #[test]
    fn cone_slope_for_single_zeros() {
        let members = single_zero_family(&dyadic_deltas(4, 12), 0.0);
        let fit = sweep_exponent(&members, Functional::ConeNormP, &ReportParams::default(), &cfg()).unwrap();
        assert!((fit.slope - 0.25).abs() < 0.02, "{fit:?}");
    }

    #[test]
    fn radial_functionals_grow_with_depth() {
        let params = ReportParams::default();
        let mut prev: Option<FunctionalReport> = None;
        for depth in 1..=6 {
            let zeros = generate(&FamilySpec::RadialSeparated { depth }).unwrap();
            let r = functional_report(&zeros, &params, &cfg()).unwrap();
            if let Some(prev) = &prev {
                for f in Functional::ALL {
                    if f == Functional::WeakHp || f == Functional::SublevelIc {
                        continue;
                    }
                    assert!(r.value(f).unwrap() >= prev.value(f).unwrap(), "{f} at J={depth}");
                }
            }
            prev = Some(r);
        }
    }

    #[test]
    fn frostman_report_for_square() {
        let b = BlaschkeProduct::new(
            ZeroList::new(vec![Zero {
                point: DiskPoint::ORIGIN,
                mult: 2,
            }])
            .unwrap(),
        )
        .unwrap();
        let r = frostman_report(&b, DiskPoint::new(0.25, 0.0).unwrap(), 0.75, &cfg()).unwrap();
        assert_eq!(r.degree, 2);
        assert!((r.sum - 2.0 * 0.5f64.powf(0.25)).abs() < 1e-12);
        assert!(r.max_residual < 1e-12);
    }

    #[test]
    fn band_collects_extremes() {
        let b = Band::from_values([2.0, 8.0, f64::NAN, 4.0]).unwrap();
        assert_eq!((b.min, b.max, b.spread, b.members), (2.0, 8.0, 4.0, 3));
        assert!(Band::from_values([]).is_none());
    }
}
