use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};

use blaschke::lab::{PatternCell, ReportParams};
use blaschke::{FamilySpec, QuadratureConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Radial,
    Stolz,
    Dyadic,
    Random,
    Single,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Family kind; ignored when --spec is given.
    #[arg(long, value_enum, required_unless_present = "spec")]
    pub kind: Option<Kind>,
    /// Family recipe as a JSON file or inline JSON object.
    #[arg(long, conflicts_with = "kind")]
    pub spec: Option<String>,
    /// Radial: number of levels J.
    #[arg(long)]
    pub depth: Option<u32>,
    /// Stolz: aperture.
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    /// Stolz: points per level, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub counts: Vec<u32>,
    /// Dyadic: cells as level:index:count, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub cells: Vec<String>,
    /// Dyadic: fill every sector of this level (with --count zeros each).
    #[arg(long, conflicts_with = "cells")]
    pub level: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub count: u32,
    /// Random: number of zeros.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-3)]
    pub min_depth: f64,
    /// Single: depth 1 - |z|.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
    /// Output file; defaults to zeros.json in the output directory.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn parse_cell(s: &str) -> Result<PatternCell> {
    let parts: Vec<&str> = s.split(':').collect();
    let [level, index, count] = parts.as_slice() else {
        bail!("cell {s:?} is not level:index:count");
    };
    Ok(PatternCell {
        level: level.trim().parse().with_context(|| format!("cell {s:?}: level"))?,
        index: index.trim().parse().with_context(|| format!("cell {s:?}: index"))?,
        count: count.trim().parse().with_context(|| format!("cell {s:?}: count"))?,
    })
}

fn need<T: Copy>(v: Option<T>, flag: &str, kind: &str) -> Result<T> {
    v.with_context(|| format!("--kind {kind} needs {flag}"))
}

impl GenArgs {
    pub fn spec(&self) -> Result<FamilySpec> {
        if let Some(s) = &self.spec {
            return read_json_arg(s).context("reading --spec");
        }
        Ok(match self.kind.expect("clap enforces --kind or --spec") {
            Kind::Radial => FamilySpec::RadialSeparated {
                depth: need(self.depth, "--depth", "radial")?,
            },
            Kind::Stolz => {
                if self.counts.is_empty() {
                    bail!("--kind stolz needs --counts");
                }
                FamilySpec::StolzConfined {
                    beta: self.beta,
                    counts: self.counts.clone(),
                }
            }
            Kind::Dyadic => match self.level {
                Some(level) => FamilySpec::full_level(level, self.count)?,
                None if self.cells.is_empty() => bail!("--kind dyadic needs --cells or --level"),
                None => FamilySpec::DyadicPattern {
                    cells: self.cells.iter().map(|c| parse_cell(c)).collect::<Result<_>>()?,
                },
            },
            Kind::Random => FamilySpec::UniformRandom {
                n: need(self.n, "--n", "random")?,
                seed: self.seed,
                min_depth: self.min_depth,
                rng: Default::default(),
            },
            Kind::Single => FamilySpec::SingleZeroScaling {
                delta: need(self.delta, "--delta", "single")?,
                theta: self.theta,
            },
        })
    }
}

/// A JSON value given inline (starting with `{` or `[`) or as a file path.
pub fn read_json_arg<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T> {
    let text = if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    };
    Ok(serde_json::from_str(&text).map_err(blaschke::Error::from)?)
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long, default_value_t = 0.75)]
    pub p: f64,
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub c: f64,
    /// Depth of the dyadic tree.
    #[arg(long, default_value_t = 40)]
    pub depth: u32,
    /// Largest N in the maximal-family sum.
    #[arg(long, default_value_t = 64)]
    pub n_max: u32,
}

impl ParamArgs {
    pub fn params(&self) -> Result<ReportParams> {
        let params = ReportParams {
            p: self.p,
            alpha: self.alpha,
            c: self.c,
            dyadic_levels: self.depth,
            n_max: self.n_max,
        };
        params.validate()?;
        Ok(params)
    }
}

/// Overrides of the quadrature defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct QuadArgs {
    #[arg(long)]
    pub boundary_samples: Option<usize>,
    #[arg(long)]
    pub radial_levels: Option<usize>,
    #[arg(long)]
    pub refinement_depth: Option<u32>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub radial_offset: Option<f64>,
    #[arg(long)]
    pub max_doublings: Option<u32>,
    #[arg(long)]
    pub gauss_nodes: Option<usize>,
    #[arg(long)]
    pub root_tol: Option<f64>,
}

impl QuadArgs {
    pub fn config(&self) -> Result<QuadratureConfig> {
        let mut cfg = QuadratureConfig::default();
        macro_rules! set {
            ($($f:ident),*) => {$( if let Some(v) = self.$f { cfg.$f = v; } )*};
        }
        set!(
            boundary_samples,
            radial_levels,
            refinement_depth,
            rel_tol,
            radial_offset,
            max_doublings,
            gauss_nodes,
            root_tol
        );
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct NormsArgs {
    /// Zero list JSON.
    pub input: PathBuf,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Also evaluate the Besov norm with these `q` and `s`.
    #[arg(long, requires = "s")]
    pub q: Option<f64>,
    #[arg(long, requires = "q")]
    pub s: Option<f64>,
    #[command(flatten)]
    pub quad: QuadArgs,
    /// Output JSON; the CSV row goes next to it. Defaults to report.json.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DyadicArgs {
    /// Zero list JSON.
    #[arg(required_unless_present = "tree")]
    pub input: Option<PathBuf>,
    /// Start from a tree dump instead of a zero list.
    #[arg(long, conflicts_with = "input")]
    pub tree: Option<PathBuf>,
    #[arg(long, default_value_t = 0.75)]
    pub p: f64,
    /// Depth of the tree; ignored with --tree.
    #[arg(long, default_value_t = 40)]
    pub depth: u32,
    #[arg(long, default_value_t = 64)]
    pub n_max: u32,
    /// Output JSON. Defaults to dyadic.json.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepFamily {
    /// Single zeros at depth 2^-k.
    Single,
    /// Radial families with J = k levels.
    Radial,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value_t = SweepFamily::Single, conflicts_with = "specs")]
    pub family: SweepFamily,
    #[arg(long, default_value_t = 4)]
    pub k_min: u32,
    #[arg(long, default_value_t = 12)]
    pub k_max: u32,
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
    /// Functionals whose slopes must be fitted; fails if one cannot be.
    #[arg(long, value_delimiter = ',')]
    pub functional: Vec<String>,
    /// Ratio bands over a JSON list of family recipes instead of a sweep.
    #[arg(long)]
    pub specs: Option<String>,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
    /// Output JSON; CSV and series files go next to it. Defaults to sweep.json.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PreimageArgs {
    /// Zero list JSON.
    pub input: PathBuf,
    /// The point a, as re,im.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub a: Vec<f64>,
    #[arg(long, default_value_t = 0.75)]
    pub p: f64,
    #[command(flatten)]
    pub quad: QuadArgs,
    /// Output JSON. Defaults to preimage.json.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConeArgs {
    /// Zero list JSON.
    pub input: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.75)]
    pub p: f64,
    /// Level arcs {F > 2^N} for N = 1..=levels.
    #[arg(long, default_value_t = 8)]
    pub levels: u32,
    /// Output JSON; the profile CSV goes next to it. Defaults to cone.json.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}
