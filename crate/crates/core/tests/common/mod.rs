//! Shared helpers for the integration tests: seeded instance builders and a
//! brute-force dyadic oracle that shares no code with the library's tree.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use blaschke::{ZeroList, ZeroRecord};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` points with `1 - |z|` log-uniform on `[min_depth, 1]`.
pub fn random_points(rng: &mut ChaCha8Rng, n: usize, min_depth: f64) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let t = min_depth.powf(rng.random::<f64>());
            Complex64::from_polar(1.0 - t, TAU * rng.random::<f64>())
        })
        .collect()
}

pub fn random_list(rng: &mut ChaCha8Rng, n: usize, min_depth: f64) -> ZeroList {
    ZeroList::from_points(random_points(rng, n, min_depth)).unwrap()
}

/// Raw records of a list, for building an oracle from plain numbers.
pub fn records(zeros: &ZeroList) -> Vec<ZeroRecord> {
    blaschke::ZeroFile::from_list(zeros).zeros
}

/// Brute-force dyadic counts on levels `1..=levels`, with every arc held as
/// an integer range of ticks on a circle of `2^(levels-1)` ticks.
pub struct DyadicOracle {
    pub levels: u32,
    /// `(level, index) -> N`, only occupied cells.
    pub counts: BTreeMap<(u32, u64), u64>,
    /// `F` of every sector on levels `2..=levels`.
    pub densities: BTreeMap<(u32, u64), u128>,
}

impl DyadicOracle {
    pub fn new(zeros: &[ZeroRecord], levels: u32) -> Self {
        let mut counts = BTreeMap::new();
        for z in zeros {
            let t = 1.0 - z.re.hypot(z.im);
            // smallest n with t > 2^{-n}
            let mut n = 1u32;
            while t <= (-(n as f64)).exp2() {
                n += 1;
            }
            if n > levels {
                continue;
            }
            let theta = z.im.atan2(z.re).rem_euclid(TAU);
            let cells = 1u64 << (n - 1);
            let k = ((theta / TAU * cells as f64).floor() as u64).min(cells - 1);
            *counts.entry((n, k + 1)).or_insert(0) += z.mult as u64;
        }
        let mut oracle = DyadicOracle {
            levels,
            counts,
            densities: BTreeMap::new(),
        };
        let all: Vec<(u32, u64)> = oracle.all_sectors().collect();
        for (l, i) in all {
            let f = oracle.density(l, i);
            oracle.densities.insert((l, i), f);
        }
        oracle
    }

    fn ticks(&self) -> u64 {
        1u64 << (self.levels - 1)
    }

    /// Tick range `[start, start + width)` of a sector.
    fn span(&self, level: u32, index: u64) -> (u64, u64) {
        let width = 1u64 << (self.levels - level);
        ((index - 1) * width, width)
    }

    /// Is `Q(level, index)` inside the tripled arc of `R(rl, ri)`?
    pub fn in_tripled(&self, level: u32, index: u64, rl: u32, ri: u64) -> bool {
        let m = self.ticks();
        let (qs, qw) = self.span(level, index);
        let (rs, rw) = self.span(rl, ri);
        if 3 * rw >= m {
            return true;
        }
        let left = (rs + m - rw) % m;
        (qs + m - left) % m + qw <= 3 * rw
    }

    /// `F(Q) = Σ N(R) / ℓ(R)` over sectors `R` of levels `2..=level(Q)`
    /// whose tripled arc contains `Q`.
    pub fn density(&self, level: u32, index: u64) -> u128 {
        self.counts
            .iter()
            .filter(|(&(rl, _), _)| rl >= 2 && rl <= level)
            .filter(|(&(rl, ri), _)| self.in_tripled(level, index, rl, ri))
            .map(|(&(rl, _), &n)| n as u128 * (1u128 << (rl - 1)))
            .sum()
    }

    pub fn all_sectors(&self) -> impl Iterator<Item = (u32, u64)> {
        (2..=self.levels).flat_map(|l| (1..=(1u64 << (l - 1))).map(move |i| (l, i)))
    }

    /// Sectors with `F > 2^N` none of whose proper ancestors (level >= 2)
    /// qualify, as `(level, index, count, density)`.
    pub fn maximal(&self, n: u32) -> Vec<(u32, u64, u64, u128)> {
        let threshold = 1u128 << n;
        let mut out = Vec::new();
        for (&(level, index), &f) in &self.densities {
            if f <= threshold {
                continue;
            }
            let dominated = (2..level).any(|al| {
                let ai = ((index - 1) >> (level - al)) + 1;
                self.densities[&(al, ai)] > threshold
            });
            if !dominated {
                let count = self.counts.get(&(level, index)).copied().unwrap_or(0);
                out.push((level, index, count, f));
            }
        }
        out
    }

    pub fn family_length(family: &[(u32, u64, u64, u128)]) -> f64 {
        family.iter().map(|&(l, ..)| (1.0 - l as f64).exp2()).sum()
    }
}
