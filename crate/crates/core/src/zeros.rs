//! Zero sets of finite Blaschke products and their JSON interchange format.
//!
//! The on-disk schema is
//!
//! ```json
//! {"zeros": [{"re": 0.5, "im": 0.0, "mult": 1}], "unimodular": {"re": 1.0, "im": 0.0}}
//! ```
//!
//! where `unimodular` is optional. Every command-line tool and every report
//! reads and writes zero sets in this form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disk::DiskPoint;
use crate::error::{Error, Result};

/// Default cap on the total degree of a zero list.
pub const DEFAULT_MAX_DEGREE: usize = 4096;

/// A zero of given multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero {
    pub point: DiskPoint,
    pub mult: u32,
}

impl Zero {
    pub fn z(&self) -> Complex64 {
        self.point.z()
    }
}

/// A finite multiset of disk points, stored as distinct points with counts.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ZeroList {
    entries: Vec<Zero>,
    degree: usize,
}

impl ZeroList {
    pub fn new(entries: Vec<Zero>) -> Result<Self> {
        Self::with_max_degree(entries, DEFAULT_MAX_DEGREE)
    }

    pub fn with_max_degree(entries: Vec<Zero>, max_degree: usize) -> Result<Self> {
        let mut degree = 0usize;
        for (i, e) in entries.iter().enumerate() {
            if e.mult == 0 {
                return Err(Error::ZeroMultiplicity);
            }
            if entries[..i].iter().any(|o| o.point == e.point) {
                return Err(Error::DuplicateZero {
                    re: e.point.re(),
                    im: e.point.im(),
                });
            }
            degree += e.mult as usize;
        }
        if degree > max_degree {
            return Err(Error::DegreeTooLarge {
                degree,
                max: max_degree,
            });
        }
        Ok(ZeroList { entries, degree })
    }

    /// Builds a list from raw points, merging exact repeats into multiplicities.
    pub fn from_points<I>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = Complex64>,
    {
        let mut entries: Vec<Zero> = Vec::new();
        for z in points {
            let point = DiskPoint::from_complex(z).map_err(|_| Error::ZeroOutsideDisk { re: z.re, im: z.im })?;
            match entries.iter_mut().find(|e| e.point == point) {
                Some(e) => e.mult += 1,
                None => entries.push(Zero { point, mult: 1 }),
            }
        }
        ZeroList::new(entries)
    }

    pub fn empty() -> Self {
        ZeroList::default()
    }

    pub fn entries(&self) -> &[Zero] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total multiplicity.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Every zero repeated according to its multiplicity.
    pub fn expanded(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.z(), e.mult as usize))
    }

    /// Concatenation of two zero sets (the zeros of a product of products).
    pub fn union(&self, other: &ZeroList) -> Result<ZeroList> {
        let mut entries = self.entries.clone();
        for e in &other.entries {
            match entries.iter_mut().find(|x| x.point == e.point) {
                Some(x) => x.mult += e.mult,
                None => entries.push(*e),
            }
        }
        ZeroList::new(entries)
    }

    /// Same points, every multiplicity multiplied by `factor`.
    pub fn scale_multiplicities(&self, factor: u32) -> Result<ZeroList> {
        ZeroList::new(
            self.entries
                .iter()
                .map(|e| Zero {
                    point: e.point,
                    mult: e.mult * factor,
                })
                .collect(),
        )
    }

    /// Smallest `1 - |z_n|`, or 1 for the empty list.
    pub fn min_depth(&self) -> f64 {
        self.entries.iter().map(|e| e.point.depth()).fold(1.0, f64::min)
    }

    /// Largest `|z_n|`, or 0 for the empty list.
    pub fn max_modulus(&self) -> f64 {
        self.entries.iter().map(|e| e.point.modulus()).fold(0.0, f64::max)
    }

    /// `Σ mult_n (1 - |z_n|)^{exponent}`.
    pub fn depth_power_sum(&self, exponent: f64) -> f64 {
        self.entries
            .iter()
            .map(|e| e.mult as f64 * e.point.depth().powf(exponent))
            .fold(0.0, |acc, x| acc + x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub re: f64,
    pub im: f64,
    pub mult: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexRecord {
    pub re: f64,
    pub im: f64,
}

/// Serialized form of a zero list, optionally with a unimodular factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroFile {
    pub zeros: Vec<ZeroRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unimodular: Option<ComplexRecord>,
}

impl ZeroFile {
    pub fn from_list(list: &ZeroList) -> Self {
        ZeroFile {
            zeros: list
                .entries()
                .iter()
                .map(|e| ZeroRecord {
                    re: e.point.re(),
                    im: e.point.im(),
                    mult: e.mult,
                })
                .collect(),
            unimodular: None,
        }
    }

    pub fn zero_list(&self) -> Result<ZeroList> {
        let entries = self
            .zeros
            .iter()
            .map(|r| {
                let point = DiskPoint::new(r.re, r.im).map_err(|_| Error::ZeroOutsideDisk { re: r.re, im: r.im })?;
                Ok(Zero { point, mult: r.mult })
            })
            .collect::<Result<Vec<_>>>()?;
        ZeroList::new(entries)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("zero file serializes")
    }
}

impl Serialize for ZeroList {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ZeroFile::from_list(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ZeroList {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        ZeroFile::deserialize(d)?.zero_list().map_err(serde::de::Error::custom)
    }
}
