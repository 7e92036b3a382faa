//! Dyadic sectors of the disk and the counting functionals built on them.
//!
//! The sector `Q(n, j)` for `n >= 1`, `1 <= j <= 2^{n-1}` sits over the arc
//! `I = [(j-1)·2π·2^{1-n}, j·2π·2^{1-n})` and has normalized length
//! `ℓ(Q) = 2^{1-n}`. Its top part is `T(Q) = {r e^{iθ} : θ ∈ I,
//! 1 - ℓ(Q) <= r < 1 - ℓ(Q)/2}`, so a point with `1 - |z| ∈ (2^{-n}, 2^{1-n}]`
//! belongs to the top part of a level-`n` sector. The level-1 sector is the
//! whole disk; it is stored (it holds zeros with `|z| < 1/2`) but never takes
//! part in densities, families, or sums.
//!
//! Densities `F(Q) = Σ_{ℓ(R) >= ℓ(Q), Q ⊂ 3R} N(R) / ℓ(R)` are integers and
//! are computed exactly. A sector `Q` lies in `3R` for a coarser or equal `R`
//! exactly when the ancestor of `Q` at the level of `R` is `R` or one of its
//! two neighbours, the circle wrapping around.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::disk::{pseudo_distance, DiskPoint};
use crate::error::{check_range, Error, Result};
use crate::zeros::{Zero, ZeroList};

/// Deepest level a tree may have.
pub const MAX_LEVEL: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicSector {
    pub level: u32,
    /// 1-based position along the circle.
    pub index: u64,
}

impl DyadicSector {
    pub fn new(level: u32, index: u64) -> Result<Self> {
        check_range("level", level as f64, (1..=MAX_LEVEL).contains(&level), "in 1..=40")?;
        let count = Self::count_at(level);
        check_range(
            "index",
            index as f64,
            (1..=count).contains(&index),
            "in 1..=2^(level-1)",
        )?;
        Ok(DyadicSector { level, index })
    }

    /// Number of sectors at `level`.
    pub fn count_at(level: u32) -> u64 {
        1u64 << (level - 1)
    }

    /// `ℓ(Q) = 2^{1-n}`.
    pub fn length(&self) -> f64 {
        0.5f64.powi(self.level as i32 - 1)
    }

    /// `1 / ℓ(Q)` as an exact integer.
    fn inverse_length(&self) -> u128 {
        1u128 << (self.level - 1)
    }

    /// The base arc in radians.
    pub fn arc(&self) -> (f64, f64) {
        let width = TAU * self.length();
        ((self.index - 1) as f64 * width, self.index as f64 * width)
    }

    /// Radii `[1 - ℓ, 1 - ℓ/2)` of the top part.
    pub fn top_part(&self) -> (f64, f64) {
        let l = self.length();
        (1.0 - l, 1.0 - 0.5 * l)
    }

    /// The point of the top part at mid-radius over the middle of the arc.
    pub fn top_center(&self) -> DiskPoint {
        let (a, b) = self.arc();
        DiskPoint::from_polar(1.0 - 0.75 * self.length(), 0.5 * (a + b)).expect("inside the disk")
    }

    pub fn parent(&self) -> Option<Self> {
        (self.level > 1).then(|| DyadicSector {
            level: self.level - 1,
            index: self.index.div_ceil(2),
        })
    }

    pub fn children(&self) -> [Self; 2] {
        let level = self.level + 1;
        [
            DyadicSector {
                level,
                index: 2 * self.index - 1,
            },
            DyadicSector {
                level,
                index: 2 * self.index,
            },
        ]
    }

    /// Ancestor at a coarser (or equal) level.
    pub fn ancestor(&self, level: u32) -> Self {
        assert!(level >= 1 && level <= self.level);
        DyadicSector {
            level,
            index: ((self.index - 1) >> (self.level - level)) + 1,
        }
    }

    /// `self ⊆ other`.
    pub fn is_within(&self, other: &Self) -> bool {
        other.level <= self.level && self.ancestor(other.level) == *other
    }

    /// This sector and its two neighbours on the same level, without repeats.
    pub fn neighbourhood(&self) -> Vec<Self> {
        let count = Self::count_at(self.level);
        let mut out: Vec<Self> = [count - 1, 0, 1]
            .iter()
            .map(|&shift| DyadicSector {
                level: self.level,
                index: (self.index - 1 + shift) % count + 1,
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// The sector whose top part contains `z`, if it is no deeper than
    /// [`MAX_LEVEL`].
    pub fn containing(z: DiskPoint) -> Option<Self> {
        let level = depth_level(z.depth());
        (level <= MAX_LEVEL).then(|| Self::at_angle(level, z.argument()))
    }

    fn at_angle(level: u32, theta: f64) -> Self {
        let count = Self::count_at(level);
        let k = ((theta / TAU) * count as f64).floor() as u64;
        DyadicSector {
            level,
            index: k.min(count - 1) + 1,
        }
    }
}

/// The `n` with `2^{-n} < t <= 2^{1-n}`, for `0 < t <= 1`.
pub fn depth_level(t: f64) -> u32 {
    let mut n = (-t.log2()).floor().max(0.0) as i64 + 1;
    // log2 can be off by an ulp; settle the band with exact powers of two
    while n > 1 && t > 0.5f64.powi(n as i32 - 1) {
        n -= 1;
    }
    while t <= 0.5f64.powi(n as i32) {
        n += 1;
    }
    n as u32
}

/// Sparse dyadic tree: every occupied sector and all of its ancestors.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicTree {
    max_level: u32,
    counts: BTreeMap<DyadicSector, u64>,
    /// Zeros (with multiplicity) below `max_level`.
    overflow: Vec<Zero>,
}

/// Assigns every zero to the top part containing it.
pub fn build_tree(zeros: &ZeroList, max_level: u32) -> Result<DyadicTree> {
    check_range(
        "max_level",
        max_level as f64,
        (1..=MAX_LEVEL).contains(&max_level),
        "in 1..=40",
    )?;
    let mut tree = DyadicTree {
        max_level,
        counts: BTreeMap::new(),
        overflow: Vec::new(),
    };
    for e in zeros.entries() {
        let level = depth_level(e.point.depth());
        if level > max_level {
            tree.overflow.push(*e);
            continue;
        }
        tree.add(DyadicSector::at_angle(level, e.point.argument()), e.mult as u64);
    }
    Ok(tree)
}

/// Maximal sectors with `F(Q) > 2^N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalFamily {
    #[serde(rename = "N")]
    pub n: u32,
    pub sectors: Vec<SectorRecord>,
    pub total_length: f64,
}

/// One sector with its count and density, as it appears in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorRecord {
    pub level: u32,
    pub index: u64,
    #[serde(rename = "N")]
    pub count: u64,
    #[serde(rename = "F")]
    pub density: u128,
}

impl SectorRecord {
    pub fn sector(&self) -> DyadicSector {
        DyadicSector {
            level: self.level,
            index: self.index,
        }
    }
}

/// Serializable form of a tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeDump {
    pub max_level: u32,
    /// Number of zeros, with multiplicity, deeper than `max_level`.
    pub overflow: u64,
    pub sectors: Vec<SectorRecord>,
}

impl DyadicTree {
    fn add(&mut self, sector: DyadicSector, count: u64) {
        *self.counts.entry(sector).or_insert(0) += count;
        let mut s = sector;
        while let Some(parent) = s.parent() {
            self.counts.entry(parent).or_insert(0);
            s = parent;
        }
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    /// `N(Q)`.
    pub fn count(&self, sector: &DyadicSector) -> u64 {
        self.counts.get(sector).copied().unwrap_or(0)
    }

    /// Every stored sector with its count, in (level, index) order.
    pub fn sectors(&self) -> impl Iterator<Item = (DyadicSector, u64)> + '_ {
        self.counts.iter().map(|(s, &n)| (*s, n))
    }

    /// Sectors with `N(Q) > 0`.
    pub fn occupied(&self) -> impl Iterator<Item = (DyadicSector, u64)> + '_ {
        self.sectors().filter(|&(_, n)| n > 0)
    }

    pub fn overflow(&self) -> &[Zero] {
        &self.overflow
    }

    pub fn overflow_count(&self) -> u64 {
        self.overflow.iter().map(|z| z.mult as u64).sum()
    }

    /// Total of all stored counts.
    pub fn total_count(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `F(Q)` as an exact integer.
    pub fn density_exact(&self, q: &DyadicSector) -> u128 {
        (2..=q.level)
            .map(|m| {
                let a = q.ancestor(m);
                a.neighbourhood()
                    .iter()
                    .map(|r| self.count(r) as u128 * r.inverse_length())
                    .sum::<u128>()
            })
            .sum()
    }

    /// Sectors whose density can exceed that of their parent, or that have
    /// such a sector below them.
    fn relevant(&self) -> BTreeSet<DyadicSector> {
        let mut out = BTreeSet::new();
        for (s, _) in self.occupied().filter(|(s, _)| s.level >= 2) {
            for m in 2..=s.level {
                out.extend(s.ancestor(m).neighbourhood());
            }
        }
        out
    }

    fn record(&self, s: DyadicSector) -> SectorRecord {
        SectorRecord {
            level: s.level,
            index: s.index,
            count: self.count(&s),
            density: self.density_exact(&s),
        }
    }

    pub fn dump(&self) -> TreeDump {
        TreeDump {
            max_level: self.max_level,
            overflow: self.overflow_count(),
            sectors: self.occupied().map(|(s, _)| self.record(s)).collect(),
        }
    }

    /// Rebuilds a tree from a dump; overflowed zeros are not recoverable and
    /// only their count is kept.
    pub fn from_dump(dump: &TreeDump) -> Result<Self> {
        check_range(
            "max_level",
            dump.max_level as f64,
            (1..=MAX_LEVEL).contains(&dump.max_level),
            "in 1..=40",
        )?;
        let mut tree = DyadicTree {
            max_level: dump.max_level,
            counts: BTreeMap::new(),
            overflow: Vec::new(),
        };
        for r in &dump.sectors {
            let s = DyadicSector::new(r.level, r.index)?;
            if s.level > dump.max_level {
                return Err(Error::InvalidParameter {
                    name: "level",
                    value: s.level as f64,
                    expected: "<= max_level",
                });
            }
            tree.add(s, r.count);
        }
        if dump.overflow > 0 {
            // keep the count through a placeholder at the origin
            tree.overflow.push(Zero {
                point: DiskPoint::ORIGIN,
                mult: dump.overflow as u32,
            });
        }
        Ok(tree)
    }
}

/// `F(Q) = Σ N(R) / ℓ(R)` over `R` with `ℓ(R) >= ℓ(Q)` and `Q ⊂ 3R`.
pub fn sector_density(tree: &DyadicTree, q: &DyadicSector) -> f64 {
    tree.density_exact(q) as f64
}

/// `E_N` for `N = 1..=n_max`.
pub fn maximal_families(tree: &DyadicTree, n_max: u32) -> Result<Vec<MaximalFamily>> {
    check_range("N_max", n_max as f64, (1..=120).contains(&n_max), "in 1..=120")?;
    let relevant = tree.relevant();
    let mut families = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let threshold = 1u128 << n;
        let mut found = Vec::new();
        let mut stack: Vec<DyadicSector> = [2u64, 1]
            .iter()
            .map(|&index| DyadicSector { level: 2, index })
            .filter(|s| relevant.contains(s))
            .collect();
        while let Some(q) = stack.pop() {
            let f = tree.density_exact(&q);
            if f > threshold {
                found.push(SectorRecord {
                    level: q.level,
                    index: q.index,
                    count: tree.count(&q),
                    density: f,
                });
                continue;
            }
            let [a, b] = q.children();
            for c in [b, a] {
                if relevant.contains(&c) {
                    stack.push(c);
                }
            }
        }
        found.sort_by_key(|r| (r.level, r.index));
        let total_length = found.iter().map(|r| r.sector().length()).sum();
        families.push(MaximalFamily {
            n,
            sectors: found,
            total_length,
        });
    }
    Ok(families)
}

/// `Σ_{N=1}^{N_max} 2^{Np} ℓ(E_N)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilySum {
    pub value: f64,
    /// `ℓ(E_{N_max}) > 0`: later terms were cut off.
    pub truncated: bool,
}

pub fn corollary_f_sum(tree: &DyadicTree, p: f64, n_max: u32) -> Result<FamilySum> {
    check_range("p", p, p > 0.0, "positive and finite")?;
    let families = maximal_families(tree, n_max)?;
    Ok(family_sum(&families, p))
}

/// The same sum from families already computed.
pub fn family_sum(families: &[MaximalFamily], p: f64) -> FamilySum {
    let value = families
        .iter()
        .map(|f| 2f64.powf(f.n as f64 * p) * f.total_length)
        .fold(0.0, |acc, x| acc + x);
    FamilySum {
        value,
        truncated: families.last().is_some_and(|f| f.total_length > 0.0),
    }
}

/// `Σ N(Q)^p ℓ(Q)^{1-p}` over occupied proper sectors.
pub fn protas_dyadic_sum(tree: &DyadicTree, p: f64) -> f64 {
    tree.occupied()
        .filter(|(s, _)| s.level >= 2)
        .map(|(s, n)| (n as f64).powf(p) * s.length().powf(1.0 - p))
        .fold(0.0, |acc, x| acc + x)
}

/// Proper subsectors of `Q0` whose density `N(Q)/ℓ(Q)` is within a factor
/// `1 ± ε` of that of `Q0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonFamily {
    pub sectors: Vec<DyadicSector>,
    pub total_length: f64,
    /// `Σ ℓ(Q) / ℓ(Q0)`.
    pub ratio: f64,
}

pub fn epsilon_family(tree: &DyadicTree, q0: &DyadicSector, eps: f64) -> Result<EpsilonFamily> {
    check_range("eps", eps, eps > 0.0 && eps < 1.0, "in (0, 1)")?;
    let n0 = tree.count(q0);
    if n0 == 0 {
        return Err(Error::InvalidParameter {
            name: "N(Q0)",
            value: 0.0,
            expected: "> 0",
        });
    }
    let target = n0 as f64 / q0.length();
    let (lo, hi) = ((1.0 - eps) * target, (1.0 + eps) * target);
    let mut sectors = Vec::new();
    for level in q0.level + 1..=tree.max_level {
        let shift = level - q0.level;
        let first = DyadicSector {
            level,
            index: ((q0.index - 1) << shift) + 1,
        };
        let last = DyadicSector {
            level,
            index: q0.index << shift,
        };
        for (s, &n) in tree.counts.range(first..=last) {
            let d = n as f64 / s.length();
            if n > 0 && lo <= d && d <= hi {
                sectors.push(*s);
            }
        }
    }
    let total_length: f64 = sectors.iter().map(DyadicSector::length).sum();
    Ok(EpsilonFamily {
        sectors,
        total_length,
        ratio: total_length / q0.length(),
    })
}

/// Level counts `N_j = #{z_n : 2^{-j} < 1 - |z_n| <= 2^{1-j}}` and
/// `Σ_j 2^{-j(1-p)} N_j^p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerbitskiiProfile {
    /// `counts[j - 1] = N_j`.
    pub counts: Vec<u64>,
    pub sum: f64,
}

pub fn verbitskii_profile(zeros: &ZeroList, p: f64) -> Result<VerbitskiiProfile> {
    check_range("p", p, p > 0.0, "positive and finite")?;
    let mut counts: Vec<u64> = Vec::new();
    for e in zeros.entries() {
        let j = depth_level(e.point.depth()) as usize;
        if counts.len() < j {
            counts.resize(j, 0);
        }
        counts[j - 1] += e.mult as u64;
    }
    let sum = counts
        .iter()
        .enumerate()
        .filter(|(_, &n)| n > 0)
        .map(|(i, &n)| 2f64.powf(-((i + 1) as f64) * (1.0 - p)) * (n as f64).powf(p))
        .fold(0.0, |acc, x| acc + x);
    Ok(VerbitskiiProfile { counts, sum })
}

/// `inf_{n≠m} ρ(z_n, z_m)`, and 0 if any zero is repeated.
///
/// Pairs are scanned in order of hyperbolic distance from the origin; since
/// `ρ(z, w) >= ρ(|z|, |w|)`, the scan for each point stops as soon as the
/// radial separation alone exceeds the best distance found so far.
pub fn separation_constant(zeros: &ZeroList) -> Result<f64> {
    if zeros.entries().iter().any(|e| e.mult >= 2) {
        return Ok(0.0);
    }
    if zeros.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "zeros",
            value: zeros.len() as f64,
            expected: "at least two distinct zeros",
        });
    }
    let mut pts: Vec<(f64, DiskPoint)> = zeros
        .entries()
        .iter()
        .map(|e| (e.point.modulus().atanh(), e.point))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if (pts[j].0 - pts[i].0).tanh() >= best {
                break;
            }
            best = best.min(pseudo_distance(pts[i].1, pts[j].1));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn list_at(points: &[(f64, f64)]) -> ZeroList {
        ZeroList::from_points(points.iter().map(|&(r, th)| Complex64::from_polar(r, th))).unwrap()
    }

    fn sector(level: u32, index: u64) -> DyadicSector {
        DyadicSector::new(level, index).unwrap()
    }

    #[test]
    fn depth_bands() {
        assert_eq!(depth_level(1.0), 1);
        assert_eq!(depth_level(0.75), 1);
        assert_eq!(depth_level(0.5), 2);
        assert_eq!(depth_level(0.3), 2);
        assert_eq!(depth_level(0.25), 3);
        for n in 1..60 {
            let t = 0.5f64.powi(n);
            assert_eq!(depth_level(t), n as u32 + 1);
            assert_eq!(depth_level(t * 1.000001), n as u32);
        }
    }

    #[test]
    fn sector_geometry() {
        let q = sector(3, 2);
        assert_eq!(q.length(), 0.25);
        let (a, b) = q.arc();
        assert!((a - TAU / 4.0).abs() < 1e-15 && (b - TAU / 2.0).abs() < 1e-15);
        assert_eq!(q.top_part(), (0.75, 0.875));
        assert_eq!(q.parent(), Some(sector(2, 1)));
        assert_eq!(q.children(), [sector(4, 3), sector(4, 4)]);
        assert_eq!(sector(5, 11).ancestor(3), sector(3, 3));
        assert!(sector(5, 11).is_within(&sector(3, 3)));
        assert_eq!(
            sector(3, 1).neighbourhood(),
            vec![sector(3, 1), sector(3, 2), sector(3, 4)]
        );
        assert_eq!(sector(2, 1).neighbourhood(), vec![sector(2, 1), sector(2, 2)]);
        assert!(DyadicSector::new(3, 5).is_err());
        let c = sector(4, 3).top_center();
        assert_eq!(DyadicSector::containing(c), Some(sector(4, 3)));
        assert_eq!(
            build_tree(&ZeroList::new(vec![Zero { point: c, mult: 1 }]).unwrap(), 10)
                .unwrap()
                .occupied()
                .collect::<Vec<_>>(),
            vec![(sector(4, 3), 1)]
        );
    }

    #[test]
    fn zero_lands_at_its_band() {
        // 1 - |z| = 0.1 is in (2^{-4}, 2^{-3}]
        let tree = build_tree(&list_at(&[(0.9, 1.0)]), 10).unwrap();
        let occupied: Vec<_> = tree.occupied().collect();
        assert_eq!(occupied.len(), 1);
        assert_eq!(occupied[0].0.level, 4);
        let (a, b) = occupied[0].0.arc();
        assert!(a <= 1.0 && 1.0 < b);
    }

    #[test]
    fn full_level_of_centres() {
        let n = 6;
        let points: Vec<Zero> = (1..=DyadicSector::count_at(n))
            .map(|j| Zero {
                point: sector(n, j).top_center(),
                mult: 1,
            })
            .collect();
        let tree = build_tree(&ZeroList::new(points).unwrap(), 10).unwrap();
        for j in 1..=DyadicSector::count_at(n) {
            assert_eq!(tree.count(&sector(n, j)), 1);
        }
        assert_eq!(tree.total_count(), 32);
    }

    #[test]
    fn overflow_is_reported() {
        let tree = build_tree(&list_at(&[(1.0 - 1e-6, 0.0), (0.5, 0.0)]), 10).unwrap();
        assert_eq!(tree.overflow_count(), 1);
        assert_eq!(tree.total_count(), 1);
        assert!(build_tree(&ZeroList::empty(), 41).is_err());
    }

    #[test]
    fn single_zero_density_and_families() {
        // one zero in T(Q0) with ℓ(Q0) = 2^{-3}
        let q0 = sector(4, 5);
        let tree = build_tree(
            &ZeroList::new(vec![Zero {
                point: q0.top_center(),
                mult: 1,
            }])
            .unwrap(),
            10,
        )
        .unwrap();
        assert_eq!(sector_density(&tree, &q0), 8.0);
        assert_eq!(sector_density(&tree, &q0.parent().unwrap()), 0.0);

        let families = maximal_families(&tree, 4).unwrap();
        let nonempty: Vec<u32> = families.iter().filter(|f| !f.sectors.is_empty()).map(|f| f.n).collect();
        assert_eq!(nonempty, vec![1, 2]);
        // Q0 and its two neighbours, each with F = 8
        let f1 = &families[0];
        assert_eq!(
            f1.sectors.iter().map(|r| r.sector()).collect::<Vec<_>>(),
            vec![sector(4, 4), q0, sector(4, 6)]
        );
        assert_eq!(f1.total_length, 3.0 / 8.0);
        let p = 0.75;
        let sum = corollary_f_sum(&tree, p, 4).unwrap();
        let expect = 2f64.powf(p) * 0.375 + 2f64.powf(2.0 * p) * 0.375;
        assert!((sum.value - expect).abs() < 1e-15);
        assert!(!sum.truncated);
        assert!(corollary_f_sum(&tree, p, 2).unwrap().truncated);
    }

    #[test]
    fn empty_tree() {
        let tree = build_tree(&ZeroList::empty(), 10).unwrap();
        assert!(maximal_families(&tree, 5).unwrap().iter().all(|f| f.sectors.is_empty()));
        assert_eq!(corollary_f_sum(&tree, 0.75, 5).unwrap().value, 0.0);
        assert_eq!(protas_dyadic_sum(&tree, 0.75), 0.0);
    }

    #[test]
    fn protas_examples() {
        let q = sector(5, 7);
        let p = 0.75;
        let one = ZeroList::new(vec![Zero {
            point: q.top_center(),
            mult: 1,
        }])
        .unwrap();
        let tree = build_tree(&one, 10).unwrap();
        assert!((protas_dyadic_sum(&tree, p) - (1.0f64 / 16.0).powf(1.0 - p)).abs() < 1e-15);
        let five = ZeroList::new(vec![Zero {
            point: q.top_center(),
            mult: 5,
        }])
        .unwrap();
        let tree = build_tree(&five, 10).unwrap();
        assert!((protas_dyadic_sum(&tree, p) - 5f64.powf(p) * (1.0f64 / 16.0).powf(1.0 - p)).abs() < 1e-15);
    }

    #[test]
    fn doubling_multiplicities_doubles_densities() {
        let zeros = list_at(&[(0.9, 1.0), (0.97, 1.1), (0.8, 4.0)]);
        let doubled = zeros.scale_multiplicities(2).unwrap();
        let t1 = build_tree(&zeros, 10).unwrap();
        let t2 = build_tree(&doubled, 10).unwrap();
        for (s, _) in t1.sectors() {
            assert_eq!(t2.density_exact(&s), 2 * t1.density_exact(&s));
        }
        // E_{N+1} for the doubled zeros is E_N for the original ones
        let f1 = maximal_families(&t1, 8).unwrap();
        let f2 = maximal_families(&t2, 9).unwrap();
        for n in 0..8 {
            assert_eq!(
                f1[n].sectors.iter().map(|r| r.sector()).collect::<Vec<_>>(),
                f2[n + 1].sectors.iter().map(|r| r.sector()).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn epsilon_family_examples() {
        let q0 = sector(3, 2);
        let p0 = ZeroList::new(vec![Zero {
            point: q0.top_center(),
            mult: 4,
        }])
        .unwrap();
        let tree = build_tree(&p0, 10).unwrap();
        let fam = epsilon_family(&tree, &q0, 0.5).unwrap();
        assert!(fam.sectors.is_empty());
        assert_eq!(fam.ratio, 0.0);
        assert!(epsilon_family(&tree, &sector(3, 1), 0.5).is_err());

        // a child with the same count has twice the density
        let child = q0.children()[0];
        let zeros = ZeroList::new(vec![
            Zero {
                point: q0.top_center(),
                mult: 4,
            },
            Zero {
                point: child.top_center(),
                mult: 4,
            },
        ])
        .unwrap();
        let tree = build_tree(&zeros, 10).unwrap();
        assert!(epsilon_family(&tree, &q0, 0.5).unwrap().sectors.is_empty());
    }

    #[test]
    fn doubling_cascade_fills_epsilon_family() {
        // N(Q) = N(Q0) ℓ(Q)/ℓ(Q0) on every subsector, D levels down
        let depth = 6u32;
        let q0 = sector(3, 1);
        let mut entries = vec![Zero {
            point: q0.top_center(),
            mult: 1 << depth,
        }];
        let mut level_sectors = vec![q0];
        for k in 1..=depth {
            level_sectors = level_sectors.iter().flat_map(|s| s.children()).collect();
            for s in &level_sectors {
                entries.push(Zero {
                    point: s.top_center(),
                    mult: 1 << (depth - k),
                });
            }
        }
        let tree = build_tree(&ZeroList::new(entries).unwrap(), 12).unwrap();
        let fam = epsilon_family(&tree, &q0, 0.1).unwrap();
        assert_eq!(fam.sectors.len(), (1 << (depth + 1)) - 2);
        assert_eq!(fam.ratio, depth as f64);
    }

    #[test]
    fn verbitskii_bins() {
        let p = 0.75;
        // 1 - |z| = 2^{1-j} lands in bin j
        let zeros = list_at(
            &(1..=8)
                .map(|j| (1.0 - 0.5f64.powi(j - 1), 0.0))
                .filter(|&(r, _)| r > 0.0)
                .collect::<Vec<_>>(),
        );
        let profile = verbitskii_profile(&zeros, p).unwrap();
        assert_eq!(profile.counts, vec![0, 1, 1, 1, 1, 1, 1, 1]);
        let expect: f64 = (2..=8).map(|j| 2f64.powf(-(j as f64) * (1.0 - p))).sum();
        assert!((profile.sum - expect).abs() < 1e-14);
        // and 1 - |z| = 2^{-j} in bin j + 1
        let zeros = list_at(&(1..=5).map(|j| (1.0 - 0.5f64.powi(j), 0.0)).collect::<Vec<_>>());
        assert_eq!(verbitskii_profile(&zeros, p).unwrap().counts, vec![0, 1, 1, 1, 1, 1]);
        assert_eq!(verbitskii_profile(&ZeroList::empty(), p).unwrap().sum, 0.0);
    }

    #[test]
    fn separation_examples() {
        assert_eq!(separation_constant(&list_at(&[(0.0, 0.0), (0.5, 0.0)])).unwrap(), 0.5);
        let doubled = list_at(&[(0.3, 0.0), (0.3, 0.0), (0.9, 1.0)]);
        assert_eq!(separation_constant(&doubled).unwrap(), 0.0);
        assert!(separation_constant(&list_at(&[(0.5, 0.0)])).is_err());
        // radial 1 - 2^{-j}: the closest pair is the first one, ρ(1/2, 3/4) = 0.4
        let radial = list_at(&(1..=2).map(|j| (1.0 - 0.5f64.powi(j), 0.0)).collect::<Vec<_>>());
        assert!((separation_constant(&radial).unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn dump_round_trip() {
        let zeros = list_at(&[(0.9, 1.0), (0.97, 1.1), (0.8, 4.0), (0.999, 6.0), (0.2, 2.0)]);
        let tree = build_tree(&zeros, 10).unwrap();
        let dump = tree.dump();
        let text = serde_json::to_string(&dump).unwrap();
        assert!(text.contains("\"N\"") && text.contains("\"F\""));
        let back = DyadicTree::from_dump(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.dump(), dump);
        assert_eq!(maximal_families(&back, 6).unwrap(), maximal_families(&tree, 6).unwrap());
    }

    fn arb_zeros() -> impl Strategy<Value = ZeroList> {
        prop::collection::vec((0.0f64..1.0, 1u32..10, 0.0f64..TAU, 1u32..3), 1..40).prop_map(|v| {
            let entries: Vec<Zero> = v
                .into_iter()
                .enumerate()
                .map(|(i, (u, level, th, mult))| {
                    // depth inside the band of `level`, distinct per index
                    let t = 0.5f64.powi(level as i32) * (1.0 + 0.98 * u) + 1e-12 * i as f64;
                    Zero {
                        point: DiskPoint::from_polar(1.0 - t, th).unwrap(),
                        mult,
                    }
                })
                .collect();
            ZeroList::new(entries).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn every_zero_counted_once(zeros in arb_zeros()) {
            let tree = build_tree(&zeros, 12).unwrap();
            prop_assert_eq!(tree.total_count() + tree.overflow_count(), zeros.degree() as u64);
            for level in 1..=12 {
                let at_level: u64 = tree.sectors().filter(|(s, _)| s.level == level).map(|(_, n)| n).sum();
                prop_assert!(at_level <= zeros.degree() as u64);
            }
        }

        #[test]
        fn adding_a_zero_never_lowers_density(zeros in arb_zeros(), extra in (0.0f64..0.999, 0.0f64..TAU)) {
            let bigger = zeros.union(&ZeroList::from_points([Complex64::from_polar(extra.0, extra.1)]).unwrap()).unwrap();
            let t1 = build_tree(&zeros, 12).unwrap();
            let t2 = build_tree(&bigger, 12).unwrap();
            for (s, _) in t2.sectors() {
                prop_assert!(t2.density_exact(&s) >= t1.density_exact(&s));
            }
        }

        #[test]
        fn families_are_maximal_and_nested(zeros in arb_zeros()) {
            let tree = build_tree(&zeros, 12).unwrap();
            let families = maximal_families(&tree, 10).unwrap();
            for fam in &families {
                let threshold = 1u128 << fam.n;
                for r in &fam.sectors {
                    prop_assert!(r.density > threshold);
                    let parent = r.sector().parent().unwrap();
                    prop_assert!(parent.level == 1 || tree.density_exact(&parent) <= threshold);
                }
            }
            for w in families.windows(2) {
                prop_assert!(w[1].total_length <= w[0].total_length);
                for r in &w[1].sectors {
                    prop_assert!(w[0].sectors.iter().any(|o| r.sector().is_within(&o.sector())));
                }
            }
        }

        #[test]
        fn density_grows_with_depth(zeros in arb_zeros(), level in 2u32..14, th in 0.0f64..TAU) {
            let tree = build_tree(&zeros, 12).unwrap();
            let q = DyadicSector::at_angle(level, th);
            let parent = q.parent().unwrap();
            prop_assert!(tree.density_exact(&q) >= tree.density_exact(&parent));
        }

        #[test]
        fn separation_matches_all_pairs(zeros in arb_zeros()) {
            prop_assume!(zeros.len() >= 2);
            let got = separation_constant(&zeros).unwrap();
            let entries = zeros.entries();
            let mut brute = f64::INFINITY;
            if entries.iter().any(|e| e.mult >= 2) {
                brute = 0.0;
            } else {
                for i in 0..entries.len() {
                    for j in i + 1..entries.len() {
                        brute = brute.min(pseudo_distance(entries[i].point, entries[j].point));
                    }
                }
            }
            prop_assert_eq!(got, brute);
        }
    }
}
