//! Integer sets, representation counts and B*[g] verification.
//!
//! A set `S` is a B*[g] set when every integer has at most `g` ordered
//! representations `s1 + s2` with `s1, s2` in `S`. With a modulus `n` the sums
//! are taken mod `n` instead.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest element accepted in an [`IntSet`]; keeps every pairwise sum inside `u64`.
pub const MAX_ELEMENT: u64 = u64::MAX / 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetError {
    #[error("duplicate element {0}")]
    Duplicate(u64),
    #[error("element {element} is not a residue mod {modulus}")]
    OutOfRange { element: u64, modulus: u64 },
    #[error("element {0} exceeds the supported maximum")]
    TooLarge(u64),
    #[error("modulus must be positive")]
    ZeroModulus,
}

/// A finite set of nonnegative integers, optionally living in `Z/nZ`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawIntSet", into = "RawIntSet")]
pub struct IntSet {
    elements: Vec<u64>,
    modulus: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawIntSet {
    modulus: Option<u64>,
    elements: Vec<u64>,
}

impl TryFrom<RawIntSet> for IntSet {
    type Error = SetError;

    fn try_from(raw: RawIntSet) -> Result<Self, Self::Error> {
        IntSet::new(raw.elements, raw.modulus)
    }
}

impl From<IntSet> for RawIntSet {
    fn from(set: IntSet) -> Self {
        RawIntSet {
            modulus: set.modulus,
            elements: set.elements,
        }
    }
}

impl IntSet {
    /// Builds a set from arbitrary-order elements. Duplicates are rejected rather
    /// than merged.
    pub fn new(
        elements: impl IntoIterator<Item = u64>,
        modulus: Option<u64>,
    ) -> Result<Self, SetError> {
        match modulus {
            Some(0) => return Err(SetError::ZeroModulus),
            Some(n) if n > MAX_ELEMENT => return Err(SetError::TooLarge(n)),
            _ => {}
        }
        let mut elements: Vec<u64> = elements.into_iter().collect();
        elements.sort_unstable();
        for w in elements.windows(2) {
            if w[0] == w[1] {
                return Err(SetError::Duplicate(w[0]));
            }
        }
        if let Some(&last) = elements.last() {
            if last > MAX_ELEMENT {
                return Err(SetError::TooLarge(last));
            }
            if let Some(n) = modulus {
                if last >= n {
                    return Err(SetError::OutOfRange {
                        element: last,
                        modulus: n,
                    });
                }
            }
        }
        Ok(IntSet { elements, modulus })
    }

    pub fn integer(elements: impl IntoIterator<Item = u64>) -> Result<Self, SetError> {
        Self::new(elements, None)
    }

    pub fn modular(elements: impl IntoIterator<Item = u64>, n: u64) -> Result<Self, SetError> {
        Self::new(elements, Some(n))
    }

    /// Reduces every element mod `n` and drops the resulting duplicates.
    pub fn reduced(elements: impl IntoIterator<Item = u64>, n: u64) -> Result<Self, SetError> {
        if n == 0 {
            return Err(SetError::ZeroModulus);
        }
        let mut v: Vec<u64> = elements.into_iter().map(|e| e % n).collect();
        v.sort_unstable();
        v.dedup();
        Self::new(v, Some(n))
    }

    pub fn empty(modulus: Option<u64>) -> Self {
        IntSet {
            elements: Vec::new(),
            modulus,
        }
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn min(&self) -> Option<u64> {
        self.elements.first().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.elements.last().copied()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Adds `c` to every element (mod n for modular sets).
    pub fn translate(&self, c: u64) -> Result<Self, SetError> {
        match self.modulus {
            Some(n) => Self::reduced(self.elements.iter().map(|&e| (e + c % n) % n), n),
            None => {
                let shifted = self
                    .elements
                    .iter()
                    .map(|&e| e.checked_add(c).ok_or(SetError::TooLarge(e)))
                    .collect::<Result<Vec<_>, _>>()?;
                Self::new(shifted, None)
            }
        }
    }

    /// Multiplies every element by `u` mod `n`. Only meaningful for modular sets;
    /// integer sets are scaled without reduction.
    pub fn dilate(&self, u: u64) -> Result<Self, SetError> {
        match self.modulus {
            Some(n) => Self::reduced(
                self.elements
                    .iter()
                    .map(|&e| ((e as u128 * u as u128) % n as u128) as u64),
                n,
            ),
            None => {
                let scaled = self
                    .elements
                    .iter()
                    .map(|&e| e.checked_mul(u).ok_or(SetError::TooLarge(e)))
                    .collect::<Result<Vec<_>, _>>()?;
                Self::new(scaled, None)
            }
        }
    }

    /// Same elements viewed as residues mod `n`.
    pub fn with_modulus(&self, n: u64) -> Result<Self, SetError> {
        Self::new(self.elements.iter().copied(), Some(n))
    }

    pub fn without_modulus(&self) -> Self {
        IntSet {
            elements: self.elements.clone(),
            modulus: None,
        }
    }
}

impl fmt::Debug for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")?;
        if let Some(n) = self.modulus {
            write!(f, " mod {n}")?;
        }
        Ok(())
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The representation-count function `t -> #{(x, y) in S^2 : x + y = t}`.
///
/// Stored densely. For integer sets index `i` holds the count of `offset + i`,
/// with `offset = 2 min(S)`; for modular sets the array has length `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepProfile {
    modulus: Option<u64>,
    offset: u64,
    counts: Vec<u64>,
}

impl RepProfile {
    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    pub fn get(&self, t: u64) -> u64 {
        let t = match self.modulus {
            Some(n) => t % n,
            None => t,
        };
        if t < self.offset {
            return 0;
        }
        self.counts
            .get((t - self.offset) as usize)
            .copied()
            .unwrap_or(0)
    }

    /// Nonzero `(t, r(t))` pairs in increasing `t`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(move |(i, &c)| (self.offset + i as u64, c))
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn max(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Number of `t` with `r(t) > 0`.
    pub fn support_size(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

pub fn representation_counts(set: &IntSet) -> RepProfile {
    let el = set.elements();
    match set.modulus() {
        Some(n) => {
            let mut counts = vec![0u64; n as usize];
            for (i, &a) in el.iter().enumerate() {
                counts[((2 * a) % n) as usize] += 1;
                for &b in &el[i + 1..] {
                    counts[((a + b) % n) as usize] += 2;
                }
            }
            RepProfile {
                modulus: Some(n),
                offset: 0,
                counts,
            }
        }
        None => {
            let (lo, hi) = match (set.min(), set.max()) {
                (Some(lo), Some(hi)) => (lo, hi),
                _ => {
                    return RepProfile {
                        modulus: None,
                        offset: 0,
                        counts: Vec::new(),
                    }
                }
            };
            let offset = 2 * lo;
            let mut counts = vec![0u64; (2 * (hi - lo) + 1) as usize];
            for (i, &a) in el.iter().enumerate() {
                counts[(2 * a - offset) as usize] += 1;
                for &b in &el[i + 1..] {
                    counts[(a + b - offset) as usize] += 2;
                }
            }
            RepProfile {
                modulus: None,
                offset,
                counts,
            }
        }
    }
}

/// `max_t r(t)`; zero for the empty set.
pub fn max_rep(set: &IntSet) -> u64 {
    representation_counts(set).max()
}

pub fn is_bstar(set: &IntSet, g: u64) -> bool {
    max_rep(set) <= g
}
