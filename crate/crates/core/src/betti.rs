//! Graded Betti tables and rank vectors.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ideal::Monomial;

/// `(i, multidegree) → count` for `R/I`, with `β_{0,1} = 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedBettiTable {
    entries: BTreeMap<(usize, Monomial), u64>,
}

impl GradedBettiTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, i: usize, mdeg: Monomial, count: u64) {
        if count > 0 {
            *self.entries.entry((i, mdeg)).or_default() += count;
        }
    }

    pub fn get(&self, i: usize, mdeg: &Monomial) -> u64 {
        self.entries.get(&(i, mdeg.clone())).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &Monomial, u64)> {
        self.entries.iter().map(|((i, m), c)| (*i, m, *c))
    }

    /// Totals `β_i`, trailing zeros trimmed.
    pub fn totals(&self) -> RankVector {
        let mut v = Vec::new();
        for ((i, _), c) in &self.entries {
            if v.len() <= *i {
                v.resize(i + 1, 0);
            }
            v[*i] += *c;
        }
        RankVector::new(v)
    }

    /// `(i, total degree) → count`.
    pub fn graded(&self) -> BTreeMap<(usize, u64), u64> {
        let mut out = BTreeMap::new();
        for ((i, m), c) in &self.entries {
            *out.entry((*i, m.degree())).or_default() += *c;
        }
        out
    }

    pub fn pd(&self) -> usize {
        self.entries.keys().map(|(i, _)| *i).max().unwrap_or(0)
    }

    /// Componentwise `self ≥ other` over all multidegrees.
    pub fn dominates(&self, other: &Self) -> bool {
        other.entries.iter().all(|(k, c)| self.entries.get(k).copied().unwrap_or(0) >= *c)
    }

    /// Re-index multidegrees (e.g. after a change of variables).
    pub fn map_degrees(&self, f: impl Fn(&Monomial) -> Monomial) -> Self {
        let mut out = Self::new();
        for ((i, m), c) in &self.entries {
            out.add(*i, f(m), *c);
        }
        out
    }

    /// Betti table of a tensor product of resolutions in disjoint variables
    /// given as blocks of a shared variable vector.
    pub fn convolve(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for ((i, a), c) in &self.entries {
            for ((j, b), d) in &other.entries {
                let m = a.mul(b).expect("tables over the same ring");
                out.add(i + j, m, c * d);
            }
        }
        out
    }

    pub fn to_json(&self) -> BettiJson {
        BettiJson {
            totals: self.totals().0,
            graded: self.graded().into_iter().map(|((i, deg), count)| GradedEntry { i, deg, count }).collect(),
            multigraded: self
                .entries
                .iter()
                .map(|((i, m), c)| MultigradedEntry { i: *i, mdeg: m.exponents().to_vec(), count: *c })
                .collect(),
            pd: self.pd(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedEntry {
    pub i: usize,
    pub deg: u64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultigradedEntry {
    pub i: usize,
    pub mdeg: Vec<u32>,
    pub count: u64,
}

/// JSON form of a Betti table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiJson {
    pub totals: Vec<u64>,
    pub graded: Vec<GradedEntry>,
    pub multigraded: Vec<MultigradedEntry>,
    pub pd: usize,
}

/// Ranks of the free modules of a resolution, `ranks[0] = 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RankVector(pub Vec<u64>);

impl RankVector {
    pub fn new(mut v: Vec<u64>) -> Self {
        while v.last() == Some(&0) {
            v.pop();
        }
        Self(v)
    }

    pub fn from_counts(v: &[usize]) -> Self {
        Self::new(v.iter().map(|&c| c as u64).collect())
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Index of the last nonzero entry.
    pub fn pd(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    /// Componentwise `self ≤ other`.
    pub fn dominated_by(&self, other: &Self) -> bool {
        (0..self.0.len().max(other.0.len())).all(|i| self.get(i) <= other.get(i))
    }

    /// Totals of a tensor product.
    pub fn convolve(&self, other: &Self) -> Self {
        let mut v = vec![0u64; self.0.len() + other.0.len()];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::new(v)
    }
}

impl fmt::Display for RankVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl<const N: usize> PartialEq<[u64; N]> for RankVector {
    fn eq(&self, other: &[u64; N]) -> bool {
        self.0.as_slice() == other.as_slice()
    }
}
