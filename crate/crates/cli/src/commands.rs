use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use blaschke::cone::BoundaryArcSet;
use blaschke::dyadic::{family_sum, MaximalFamily, TreeDump};
use blaschke::lab::{
    dyadic_deltas, fit_exponent, frostman_report, radial_family, single_zero_family, FunctionalReport, SCHEMA_VERSION,
};
use blaschke::{
    besov_norm, build_tree, functional_report, generate, maximal_families, protas_dyadic_sum, run_sweep,
    separation_constant, theorem1_ratios, BlaschkeProduct, ConeProfile, DiskPoint, DyadicTree, FamilySpec, Functional,
    ZeroFile,
};

use crate::args::{read_json_arg, ConeArgs, DyadicArgs, GenArgs, NormsArgs, PreimageArgs, SweepArgs, SweepFamily};

/// A computation finished but some numeric step failed; outputs were still
/// written.
#[derive(Debug)]
pub struct NumericFailure(pub String);

impl fmt::Display for NumericFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for NumericFailure {}

fn output_path(explicit: &Option<PathBuf>, out_dir: &Path, default: &str) -> PathBuf {
    explicit.clone().unwrap_or_else(|| out_dir.join(default))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).context("serializing output")?;
    text.push('\n');
    write_text(path, &text)
}

/// `dir/stem.suffix` next to `path`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn read_product(path: &Path) -> Result<BlaschkeProduct> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file = ZeroFile::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    BlaschkeProduct::from_file(&file).with_context(|| format!("zeros in {}", path.display()))
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(blaschke::Error::InvalidParameter {
            name: "p",
            value: p,
            expected: "in (0, 1)",
        }
        .into())
    }
}

pub fn gen(args: &GenArgs, out_dir: &Path) -> Result<()> {
    let spec = args.spec()?;
    let zeros = generate(&spec)?;
    let path = output_path(&args.output, out_dir, "zeros.json");
    let mut text = ZeroFile::from_list(&zeros).to_json();
    text.push('\n');
    write_text(&path, &text)?;
    let separation = match separation_constant(&zeros) {
        Ok(d) => d.to_string(),
        Err(_) => "n/a".to_string(),
    };
    println!("{}: {}", path.display(), spec.describe());
    println!("degree {}, separation {separation}", zeros.degree());
    Ok(())
}

#[derive(Serialize)]
struct BesovValue {
    q: f64,
    s: f64,
    value: f64,
}

#[derive(Serialize)]
struct NormsOutput<'a> {
    #[serde(flatten)]
    report: &'a FunctionalReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    besov: Option<BesovValue>,
}

pub fn norms(args: &NormsArgs, out_dir: &Path) -> Result<()> {
    let params = args.params.params()?;
    let cfg = args.quad.config()?;
    let b = read_product(&args.input)?;
    let report = functional_report(b.zeros(), &params, &cfg)?;
    let besov = match (args.q, args.s) {
        (Some(q), Some(s)) => Some(BesovValue {
            q,
            s,
            value: besov_norm(&b, q, s, &cfg)?,
        }),
        _ => None,
    };
    let path = output_path(&args.output, out_dir, "report.json");
    write_json(&path, &NormsOutput { report: &report, besov })?;
    let csv = report.to_csv();
    write_text(&sibling(&path, "csv"), &csv)?;
    print!("{csv}");
    for flag in &report.flags {
        eprintln!("note: {flag}");
    }
    if !report.errors.is_empty() {
        let failed: Vec<String> = report
            .errors
            .iter()
            .map(|e| format!("{}: {}", e.functional, e.message))
            .collect();
        return Err(NumericFailure(format!("some functionals failed: {}", failed.join("; "))).into());
    }
    Ok(())
}

#[derive(Serialize)]
struct DyadicReport {
    schema_version: u32,
    p: f64,
    max_level: u32,
    n_max: u32,
    overflow: u64,
    tree: TreeDump,
    families: Vec<MaximalFamily>,
    corollary_f_sum: f64,
    corollary_f_truncated: bool,
    protas_dyadic_sum: f64,
}

pub fn dyadic(args: &DyadicArgs, out_dir: &Path) -> Result<()> {
    check_p(args.p)?;
    let tree = match (&args.input, &args.tree) {
        (_, Some(dump)) => DyadicTree::from_dump(&read_json_arg(&dump.to_string_lossy())?)?,
        (Some(input), None) => build_tree(read_product(input)?.zeros(), args.depth)?,
        (None, None) => bail!("give a zero list or --tree"),
    };
    let families = maximal_families(&tree, args.n_max)?;
    let sum = family_sum(&families, args.p);
    let report = DyadicReport {
        schema_version: SCHEMA_VERSION,
        p: args.p,
        max_level: tree.max_level(),
        n_max: args.n_max,
        overflow: tree.overflow_count(),
        tree: tree.dump(),
        corollary_f_sum: sum.value,
        corollary_f_truncated: sum.truncated,
        protas_dyadic_sum: protas_dyadic_sum(&tree, args.p),
        families,
    };
    let path = output_path(&args.output, out_dir, "dyadic.json");
    write_json(&path, &report)?;
    if report.overflow > 0 {
        eprintln!(
            "warning: {} zeros lie deeper than level {} and are not counted",
            report.overflow, report.max_level
        );
    }
    if sum.truncated {
        eprintln!("warning: family sum truncated at N = {}", args.n_max);
    }
    println!("{}: {} occupied sectors", path.display(), report.tree.sectors.len());
    println!(
        "corollary_f_sum {}, protas_dyadic_sum {}",
        report.corollary_f_sum, report.protas_dyadic_sum
    );
    Ok(())
}

pub fn sweep(args: &SweepArgs, out_dir: &Path) -> Result<()> {
    let params = args.params.params()?;
    let cfg = args.quad.config()?;
    let wanted = args
        .functional
        .iter()
        .map(|name| name.parse::<Functional>())
        .collect::<Result<Vec<_>, _>>()?;
    let path = output_path(&args.output, out_dir, "sweep.json");

    if let Some(specs) = &args.specs {
        let specs: Vec<FamilySpec> = read_json_arg(specs).context("reading --specs")?;
        let report = theorem1_ratios(&specs, &params, &cfg)?;
        write_json(&path, &report)?;
        write_text(&sibling(&path, "csv"), &report.to_csv())?;
        for (name, band) in &report.bands {
            println!(
                "{name}: [{}, {}] spread {} over {}",
                band.min, band.max, band.spread, band.members
            );
        }
        return Ok(());
    }

    if args.k_min > args.k_max {
        bail!(blaschke::Error::DegenerateGrid(format!(
            "k range {}..={} is empty",
            args.k_min, args.k_max
        )));
    }
    let (name, members) = match args.family {
        SweepFamily::Single => (
            format!(
                "single zeros (1 - 2^-k) e^(i{}), k = {}..={}",
                args.theta, args.k_min, args.k_max
            ),
            single_zero_family(&dyadic_deltas(args.k_min, args.k_max), args.theta),
        ),
        SweepFamily::Radial => (
            format!("radial 1 - 2^-j, j <= J, J = {}..={}", args.k_min, args.k_max),
            radial_family(args.k_min..=args.k_max),
        ),
    };
    let report = run_sweep(&name, &members, &params, &cfg)?;
    write_json(&path, &report)?;
    write_text(&sibling(&path, "csv"), &report.to_csv())?;
    for f in Functional::ALL {
        let series = report.series(f);
        if series.is_empty() {
            continue;
        }
        let mut text = String::from("x,y\n");
        for (x, y) in &series {
            text.push_str(&format!("{x},{y}\n"));
        }
        write_text(&sibling(&path, &format!("{}.csv", f.name())), &text)?;
    }
    for (f, fit) in &report.slopes {
        println!("{f}: slope {} (rms residual {})", fit.slope, fit.residual);
    }
    for f in wanted {
        if report.slopes.contains_key(f.name()) {
            continue;
        }
        let failures: Vec<String> = report
            .members
            .iter()
            .flat_map(|m| m.report.errors.iter())
            .filter(|e| e.functional == f.name())
            .map(|e| e.message.clone())
            .collect();
        if !failures.is_empty() {
            return Err(NumericFailure(format!("{f} failed on some members: {}", failures.join("; "))).into());
        }
        fit_exponent(&report.series(f))?;
    }
    Ok(())
}

pub fn preimage(args: &PreimageArgs, out_dir: &Path) -> Result<()> {
    check_p(args.p)?;
    let cfg = args.quad.config()?;
    let &[re, im] = args.a.as_slice() else {
        bail!("--a needs two numbers re,im");
    };
    let a = DiskPoint::new(re, im)?;
    let b = read_product(&args.input)?;
    let report = frostman_report(&b, a, args.p, &cfg)?;
    let path = output_path(&args.output, out_dir, "preimage.json");
    write_json(&path, &report)?;
    println!("{}: {} preimages", path.display(), report.degree);
    println!("sum {}, max residual {:e}", report.sum, report.max_residual);
    Ok(())
}

#[derive(Serialize)]
struct LevelArcs {
    #[serde(rename = "N")]
    n: u32,
    threshold: f64,
    normalized_length: f64,
    #[serde(flatten)]
    arcs: BoundaryArcSet,
}

#[derive(Serialize)]
struct ConeReport {
    schema_version: u32,
    alpha: f64,
    p: f64,
    norm: f64,
    norm_p: f64,
    segments: usize,
    levels: Vec<LevelArcs>,
}

pub fn cone(args: &ConeArgs, out_dir: &Path) -> Result<()> {
    check_p(args.p)?;
    let b = read_product(&args.input)?;
    let profile = ConeProfile::new(b.zeros(), args.alpha)?;
    let norm_p = profile.power_mean(args.p);
    let levels = (1..=args.levels)
        .map(|n| {
            let threshold = 2f64.powi(n as i32);
            let arcs = profile.superlevel_arcs(threshold);
            LevelArcs {
                n,
                threshold,
                normalized_length: arcs.normalized_length(),
                arcs,
            }
        })
        .collect();
    let report = ConeReport {
        schema_version: SCHEMA_VERSION,
        alpha: args.alpha,
        p: args.p,
        norm: norm_p.powf(1.0 / args.p),
        norm_p,
        segments: profile.segments.len(),
        levels,
    };
    let path = output_path(&args.output, out_dir, "cone.json");
    write_json(&path, &report)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["start", "end", "value"])?;
    for s in &profile.segments {
        w.write_record([s.start.to_string(), s.end.to_string(), s.value.to_string()])?;
    }
    write_text(&sibling(&path, "profile.csv"), &String::from_utf8(w.into_inner()?)?)?;
    println!(
        "{}: norm {} over {} segments",
        path.display(),
        report.norm,
        report.segments
    );
    Ok(())
}
