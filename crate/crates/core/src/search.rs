//! Exhaustive search for `n = x^2 + y^2 + z^k` with `z` in a residue class.
//!
//! The search walks every admissible `z` in a finite window and asks whether
//! `n - z^k` is a sum of two squares. The window is split into chunks that are
//! scanned in parallel; results are merged in ascending `z` so the output never
//! depends on scheduling.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{integer_nth_root, INPUT_LIMIT};
use crate::error::{Error, Result};
use crate::two_squares::{is_sum_of_two_squares, two_square_representations, ENUMERATION_BOUND};

/// Maximum number of admissible `z` values in one search window.
pub const Z_BUDGET: u128 = 10_000_000;

const CHUNK: u128 = 2048;

/// The constraint `z = r mod m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawClass")]
pub struct ResidueClass {
    r: u64,
    m: u64,
}

#[derive(Deserialize)]
struct RawClass {
    r: u64,
    m: u64,
}

impl TryFrom<RawClass> for ResidueClass {
    type Error = Error;
    fn try_from(raw: RawClass) -> Result<Self> {
        ResidueClass::new(raw.r, raw.m)
    }
}

impl ResidueClass {
    /// `0 mod 1`: no constraint.
    pub const ANY: ResidueClass = ResidueClass { r: 0, m: 1 };

    pub fn new(r: u64, m: u64) -> Result<Self> {
        if m == 0 || r >= m {
            return Err(Error::InvalidClass {
                r: r as i128,
                m: m as i128,
            });
        }
        Ok(ResidueClass { r, m })
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn is_trivial(&self) -> bool {
        self.m == 1
    }

    pub fn contains(&self, z: i128) -> bool {
        z.rem_euclid(self.m as i128) == self.r as i128
    }

    /// Smallest member of the class that is `>= z`.
    pub fn first_at_or_above(&self, z: i128) -> i128 {
        let m = self.m as i128;
        z + (self.r as i128 - z).rem_euclid(m)
    }

    /// Number of members in `[lo, hi]`.
    pub fn count_in(&self, lo: i128, hi: i128) -> u128 {
        if lo > hi {
            return 0;
        }
        let first = self.first_at_or_above(lo);
        if first > hi {
            return 0;
        }
        ((hi - first) as u128) / self.m as u128 + 1
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.r, self.m)
    }
}

impl FromStr for ResidueClass {
    type Err = Error;

    /// Parses `R/M`.
    fn from_str(s: &str) -> Result<Self> {
        let bad =
            || Error::InvalidParameter(format!("malformed residue class {s:?}, expected R/M"));
        let (r, m) = s.split_once('/').ok_or_else(bad)?;
        let r: u64 = r.trim().parse().map_err(|_| bad())?;
        let m: u64 = m.trim().parse().map_err(|_| bad())?;
        ResidueClass::new(r, m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpec {
    #[serde(with = "crate::dec")]
    pub n: u128,
    pub k: u32,
    pub z_class: ResidueClass,
    #[serde(with = "crate::dec")]
    pub z_min: i128,
    #[serde(with = "crate::dec")]
    pub z_max: i128,
    pub require_positive: bool,
}

impl SearchSpec {
    pub fn new(
        n: u128,
        k: u32,
        z_class: ResidueClass,
        z_min: i128,
        z_max: i128,
        require_positive: bool,
    ) -> Result<Self> {
        let spec = SearchSpec {
            n,
            k,
            z_class,
            z_min,
            z_max,
            require_positive,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Window `[0 or 1, floor(n^(1/k))]`, the fallback when nothing better is known.
    pub fn with_default_window(
        n: u128,
        k: u32,
        z_class: ResidueClass,
        require_positive: bool,
    ) -> Result<Self> {
        let lo = if require_positive { 1 } else { 0 };
        let hi = (integer_nth_root(n, k.max(1)) as i128).max(lo);
        Self::new(n, k, z_class, lo, hi, require_positive)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n >= INPUT_LIMIT {
            return Err(Error::InvalidParameter(format!(
                "target n = {} must lie in [1, 2^127)",
                self.n
            )));
        }
        if self.k < 2 {
            return Err(Error::InvalidParameter(format!(
                "exponent k = {} must be at least 2",
                self.k
            )));
        }
        if self.z_min > self.z_max {
            return Err(Error::InvalidWindow(format!(
                "z_min {} exceeds z_max {}",
                self.z_min, self.z_max
            )));
        }
        if self.require_positive && self.z_min < 1 {
            return Err(Error::InvalidWindow(format!(
                "positive search needs z_min >= 1, got {}",
                self.z_min
            )));
        }
        Ok(())
    }

    /// Number of admissible `z` in the window.
    pub fn admissible_count(&self) -> u128 {
        self.z_class.count_in(self.z_min, self.z_max)
    }
}

/// One solution `x^2 + y^2 + z^k = n` with `x <= y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Representation {
    pub x: u64,
    pub y: u64,
    #[serde(with = "crate::dec")]
    pub z: i128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub exhausted_window: bool,
    pub count_checked: u64,
    pub found: Option<Representation>,
}

/// Largest `z` worth trying when `x, y, z >= 1`: `x^2 + y^2 >= 2` forces
/// `z^k <= n - 2`.
pub fn positive_z_bound(n: u128, k: u32) -> u128 {
    integer_nth_root(n.saturating_sub(2), k)
}

pub fn find_representations(spec: &SearchSpec) -> Result<Vec<Representation>> {
    spec.validate()?;
    let count = spec.admissible_count();
    if count > Z_BUDGET {
        return Err(Error::Budget {
            what: "admissible z values in window",
            actual: count,
            limit: Z_BUDGET,
        });
    }
    let first = spec.z_class.first_at_or_above(spec.z_min);
    let step = spec.z_class.m() as i128;
    let chunks = count.div_ceil(CHUNK);
    let per_chunk: Vec<Result<Vec<Representation>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = count.min(start + CHUNK);
            let mut out = Vec::new();
            for i in start..end {
                let z = first + i as i128 * step;
                out.extend(representations_at(spec, z)?);
            }
            Ok(out)
        })
        .collect();
    let mut reps = Vec::new();
    for chunk in per_chunk {
        reps.extend(chunk?);
    }
    Ok(reps)
}

/// Exhausts the window and reports the first representation, if any.
pub fn verify_none(spec: &SearchSpec) -> Result<Verification> {
    let reps = find_representations(spec)?;
    Ok(Verification {
        exhausted_window: true,
        count_checked: spec.admissible_count() as u64,
        found: reps.first().copied(),
    })
}

fn representations_at(spec: &SearchSpec, z: i128) -> Result<Vec<Representation>> {
    let n = spec.n as i128;
    let rest = match z.checked_pow(spec.k) {
        Some(zk) => n.checked_sub(zk),
        None if z > 0 || spec.k.is_multiple_of(2) => return Ok(Vec::new()),
        None => None,
    };
    let Some(rest) = rest else {
        return Err(Error::Magnitude {
            z,
            value: "beyond 2^127".into(),
            limit: ENUMERATION_BOUND as u128,
        });
    };
    if rest > ENUMERATION_BOUND as i128 {
        return Err(Error::Magnitude {
            z,
            value: rest.to_string(),
            limit: ENUMERATION_BOUND as u128,
        });
    }
    let floor = if spec.require_positive { 2 } else { 0 };
    if rest < floor || !is_sum_of_two_squares(rest as u128)? {
        return Ok(Vec::new());
    }
    Ok(two_square_representations(rest as u64)?
        .into_iter()
        .filter(|&(x, _)| !spec.require_positive || x >= 1)
        .map(|(x, y)| Representation { x, y, z })
        .collect())
}
