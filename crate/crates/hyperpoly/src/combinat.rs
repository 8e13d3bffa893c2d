//! Edge-length validation and short/long subset combinatorics.
//!
//! Subsets of the ground set {1,...,n} are stored as bitmasks with bit i-1
//! standing for the 1-based index i. All user-facing output uses sorted
//! 1-based element lists.

use crate::error::Error;
use crate::Rat;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Largest ambient size for which the exhaustive genericity scan is allowed.
pub const MAX_EDGES: usize = 24;

/// Validated edge-length vector: positive exact rationals, certified generic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alpha {
    n: usize,
    lengths: Vec<Rat>,
    total: Rat,
}

/// Subset of {1,...,n} as an n-bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    mask: u32,
    n: usize,
}

impl Alpha {
    /// Parses and validates edge lengths, certifying genericity by an
    /// exhaustive subset-sum scan.
    pub fn validate(lengths: &[&str]) -> Result<Alpha, Error> {
        let parsed: Result<Vec<Rat>, Error> =
            lengths.iter().map(|s| crate::parse_rational(s)).collect();
        Alpha::new(parsed?)
    }

    pub fn new(lengths: Vec<Rat>) -> Result<Alpha, Error> {
        let n = lengths.len();
        if n < 3 {
            return Err(Error::TooFewEdges(n));
        }
        if n > MAX_EDGES {
            return Err(Error::DegreeBoundExceeded {
                degree: n,
                count: 1 << (n.min(63)),
                budget: 1 << MAX_EDGES,
            });
        }
        for len in &lengths {
            if *len <= Rat::zero() {
                return Err(Error::NonPositiveLength(len.to_string()));
            }
        }
        let total: Rat = lengths.iter().sum();
        // Scan all splits; the first balanced one (in mask order) is the witness.
        for mask in 1u32..(1 << n) {
            let s = Subset { mask, n };
            let sum = s.sum_with(&lengths);
            if &sum + &sum == total {
                return Err(Error::NonGenericAlpha {
                    witness: s.elements(),
                });
            }
        }
        Ok(Alpha { n, lengths, total })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lengths(&self) -> &[Rat] {
        &self.lengths
    }

    pub fn length(&self, i: usize) -> &Rat {
        &self.lengths[i - 1]
    }

    pub fn total(&self) -> &Rat {
        &self.total
    }

    /// True iff Σ_{i∈S} α_i < Σ_{j∈S^c} α_j.
    pub fn is_short(&self, s: Subset) -> Result<bool, Error> {
        if s.n != self.n {
            return Err(Error::DimensionMismatch(s.n, self.n));
        }
        let sum = s.sum_with(&self.lengths);
        Ok(&sum + &sum < self.total)
    }

    pub fn is_long(&self, s: Subset) -> Result<bool, Error> {
        Ok(!self.is_short(s)?)
    }

    /// All short subsets of size >= `min_size`, sorted by (cardinality, lex).
    pub fn enumerate_shorts(&self, min_size: usize) -> Vec<Subset> {
        let mut out: Vec<Subset> = (0u32..(1 << self.n))
            .map(|mask| Subset { mask, n: self.n })
            .filter(|s| s.len() >= min_size && self.is_short(*s).unwrap())
            .collect();
        out.sort_by_key(|s| (s.len(), s.elements()));
        out
    }

    /// Nonempty short subsets, the index set of the equivariant relations.
    pub fn nonempty_shorts(&self) -> Vec<Subset> {
        self.enumerate_shorts(1)
    }

    /// The set 𝒮′ of short subsets of size >= 2 (one core component each).
    pub fn shorts_geq2(&self) -> Vec<Subset> {
        self.enumerate_shorts(2)
    }

    /// Applies a permutation to the edge lengths: new index i gets the length
    /// of old index perm[i-1].
    pub fn permuted(&self, perm: &[usize]) -> Result<Alpha, Error> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch(perm.len(), self.n));
        }
        let lengths = perm.iter().map(|&old| self.lengths[old - 1].clone()).collect();
        Alpha::new(lengths)
    }
}

impl Subset {
    pub fn from_elements(elements: &[usize], n: usize) -> Result<Subset, Error> {
        let mut mask = 0u32;
        for &e in elements {
            if e < 1 || e > n {
                return Err(Error::IndexOutOfRange(e));
            }
            mask |= 1 << (e - 1);
        }
        Ok(Subset { mask, n })
    }

    pub fn from_mask(mask: u32, n: usize) -> Subset {
        debug_assert!(mask < (1 << n));
        Subset { mask, n }
    }

    pub fn empty(n: usize) -> Subset {
        Subset { mask: 0, n }
    }

    pub fn full(n: usize) -> Subset {
        Subset {
            mask: (1 << n) - 1,
            n,
        }
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_full(&self) -> bool {
        self.mask == (1 << self.n) - 1
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= 1 && i <= self.n && (self.mask >> (i - 1)) & 1 == 1
    }

    pub fn complement(&self) -> Subset {
        Subset {
            mask: !self.mask & ((1 << self.n) - 1),
            n: self.n,
        }
    }

    pub fn union(&self, other: Subset) -> Subset {
        Subset {
            mask: self.mask | other.mask,
            n: self.n,
        }
    }

    pub fn intersection(&self, other: Subset) -> Subset {
        Subset {
            mask: self.mask & other.mask,
            n: self.n,
        }
    }

    pub fn minus(&self, other: Subset) -> Subset {
        Subset {
            mask: self.mask & !other.mask,
            n: self.n,
        }
    }

    pub fn is_subset_of(&self, other: Subset) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn insert(&self, i: usize) -> Subset {
        Subset {
            mask: self.mask | (1 << (i - 1)),
            n: self.n,
        }
    }

    pub fn remove(&self, i: usize) -> Subset {
        Subset {
            mask: self.mask & !(1 << (i - 1)),
            n: self.n,
        }
    }

    /// Sorted 1-based element list.
    pub fn elements(&self) -> Vec<usize> {
        (1..=self.n).filter(|&i| self.contains(i)).collect()
    }

    pub fn min_element(&self) -> Option<usize> {
        if self.mask == 0 {
            None
        } else {
            Some(self.mask.trailing_zeros() as usize + 1)
        }
    }

    /// (m_S, n_S, S̄, S̄^c): minima of S and S^c and the sets with them removed.
    pub fn markers(&self) -> Result<Markers, Error> {
        let m_s = self.min_element().ok_or(Error::EmptySubset)?;
        let comp = self.complement();
        let n_s = comp.min_element().ok_or(Error::FullSubset)?;
        Ok(Markers {
            m_s,
            n_s,
            s_bar: self.remove(m_s),
            sc_bar: comp.remove(n_s),
        })
    }

    /// All subsets of self, in increasing mask order.
    pub fn subsets(&self) -> Vec<Subset> {
        let n = self.n;
        let full = self.mask;
        let mut out = Vec::with_capacity(1 << self.len());
        let mut sub = 0u32;
        loop {
            out.push(Subset { mask: sub, n });
            if sub == full {
                break;
            }
            sub = (sub.wrapping_sub(full)) & full;
        }
        out.sort_by_key(|s| s.mask);
        out
    }

    fn sum_with(&self, lengths: &[Rat]) -> Rat {
        lengths
            .iter()
            .enumerate()
            .filter(|(i, _)| (self.mask >> i) & 1 == 1)
            .map(|(_, l)| l.clone())
            .sum()
    }

    /// Stable identifier fragment like `1_2_3` for DOT node names.
    pub fn id_fragment(&self) -> String {
        self.elements()
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join("_")
    }
}

/// Marker data (m_S, n_S, S̄, S̄^c) of a proper nonempty subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Markers {
    pub m_s: usize,
    pub n_s: usize,
    pub s_bar: Subset,
    pub sc_bar: Subset,
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, e) in self.elements().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Subset {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        self.elements().serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let elements: Vec<usize> = Vec::deserialize(de)?;
        let n = elements.iter().copied().max().unwrap_or(1);
        Subset::from_elements(&elements, n).map_err(serde::de::Error::custom)
    }
}
