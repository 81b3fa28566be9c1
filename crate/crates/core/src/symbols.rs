//! Taylor symbols (subsets of the generators), their lcms, incidence signs
//! and the facet digraph of the Taylor simplex.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ideal::{Monomial, MonomialIdeal};

/// Largest generator count a [`Symbol`] can address.
pub const MAX_GENERATORS: usize = 63;
/// Largest generator count for which every symbol's lcm is tabulated.
pub const MAX_DENSE: usize = 22;

/// A subset of generator indices, stored as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Symbol(pub u64);

impl Symbol {
    pub const EMPTY: Symbol = Symbol(0);

    pub fn full(n: usize) -> Self {
        Symbol(if n >= 64 { u64::MAX } else { (1u64 << n) - 1 })
    }

    pub fn singleton(g: usize) -> Self {
        Symbol(1 << g)
    }

    pub fn from_indices(idx: impl IntoIterator<Item = usize>) -> Self {
        Symbol(idx.into_iter().fold(0, |m, g| m | (1 << g)))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, g: usize) -> bool {
        self.0 >> g & 1 == 1
    }

    pub fn with(self, g: usize) -> Self {
        Symbol(self.0 | 1 << g)
    }

    pub fn without(self, g: usize) -> Self {
        Symbol(self.0 & !(1 << g))
    }

    pub fn toggle(self, g: usize) -> Self {
        Symbol(self.0 ^ 1 << g)
    }

    pub fn is_subset(self, other: Symbol) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Symbol) -> Self {
        Symbol(self.0 | other.0)
    }

    pub fn intersection(self, other: Symbol) -> Self {
        Symbol(self.0 & other.0)
    }

    /// Generator indices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let g = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(g)
            }
        })
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Parse `0,2,3` (generator indices); empty text is the empty symbol.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let text = text.trim().trim_start_matches('{').trim_end_matches('}');
        let mut s = Symbol::EMPTY;
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let g: usize = part.parse().map_err(|_| Error::Parse(format!("bad generator index {part:?}")))?;
            if g >= n {
                return Err(Error::Parse(format!("generator index {g} out of range 0..{n}")));
            }
            s = s.with(g);
        }
        Ok(s)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|g| g.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.indices().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let idx = Vec::<usize>::deserialize(d)?;
        if let Some(&g) = idx.iter().find(|&&g| g >= MAX_GENERATORS) {
            return Err(serde::de::Error::custom(format!("generator index {g} exceeds capacity")));
        }
        Ok(Symbol::from_indices(idx))
    }
}

/// lcm of the selected generators; the empty symbol maps to 1.
pub fn symbol_lcm(sigma: Symbol, ideal: &MonomialIdeal) -> Monomial {
    sigma.iter().fold(Monomial::one(ideal.nvars()), |acc, g| acc.join(ideal.gen(g)))
}

/// `[σ:σ′]`: nonzero only for facets; removing the element at ascending
/// position `k` gives `(-1)^k`.
pub fn incidence(sigma: Symbol, facet: Symbol) -> i64 {
    if !facet.is_subset(sigma) || sigma.len() != facet.len() + 1 {
        return 0;
    }
    let g = (sigma.0 & !facet.0).trailing_zeros();
    sign_of_removal(sigma, g as usize)
}

#[inline]
pub(crate) fn sign_of_removal(sigma: Symbol, g: usize) -> i64 {
    let below = (sigma.0 & ((1u64 << g) - 1)).count_ones();
    if below.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Symbols of cardinality exactly `k` among `n` generators, ascending.
pub fn symbols_of_card(n: usize, k: usize) -> impl Iterator<Item = Symbol> {
    // Gosper's hack over a u64.
    let limit: u128 = 1u128 << n;
    let mut cur: u128 = if k > n { limit } else { (1u128 << k) - 1 };
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done || cur >= limit {
            return None;
        }
        let out = Symbol(cur as u64);
        if k == 0 {
            done = true;
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            cur = (((r ^ cur) >> 2) / c) | r;
        }
        Some(out)
    })
}

/// All nonempty symbols (or all of one cardinality), in ascending mask order.
pub fn enumerate_symbols(n: usize, k: Option<usize>) -> Result<Vec<Symbol>> {
    if n > MAX_GENERATORS {
        return Err(Error::Capacity(format!("{n} generators exceed {MAX_GENERATORS}")));
    }
    match k {
        Some(k) if k > n => Ok(Vec::new()),
        Some(k) => {
            check_dense(n)?;
            Ok(symbols_of_card(n, k).collect())
        }
        None => {
            check_dense(n)?;
            Ok((1..1u64 << n).map(Symbol).collect())
        }
    }
}

pub(crate) fn check_dense(n: usize) -> Result<()> {
    if n > MAX_DENSE {
        Err(Error::Capacity(format!("full enumeration needs at most {MAX_DENSE} generators, got {n}")))
    } else {
        Ok(())
    }
}

/// Down-edges `σ → σ∖g` of the Taylor simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseDigraph {
    pub down_edges: Vec<(Symbol, Symbol)>,
}

pub fn base_digraph(n: usize) -> Result<BaseDigraph> {
    check_dense(n)?;
    let mut down_edges = Vec::with_capacity(n << n.saturating_sub(1));
    for m in 1..1u64 << n {
        let s = Symbol(m);
        for g in s.iter() {
            down_edges.push((s, s.without(g)));
        }
    }
    Ok(BaseDigraph { down_edges })
}

/// Dense lcm memo: every symbol's lcm is interned into the lcm lattice and
/// referenced by id.
#[derive(Clone, Debug)]
pub struct LcmTable {
    n: usize,
    ids: Vec<u32>,
    lattice: Vec<Monomial>,
}

impl LcmTable {
    pub fn new(ideal: &MonomialIdeal) -> Result<Self> {
        let n = ideal.ngens();
        check_dense(n)?;
        let size = 1usize << n;
        let mut ids = vec![0u32; size];
        let mut lattice = vec![Monomial::one(ideal.nvars())];
        let mut intern: HashMap<Monomial, u32> = HashMap::new();
        intern.insert(lattice[0].clone(), 0);
        for mask in 1..size {
            let g = mask.trailing_zeros() as usize;
            let prev = mask & (mask - 1);
            let m = lattice[ids[prev] as usize].join(ideal.gen(g));
            let next = lattice.len() as u32;
            let id = *intern.entry(m.clone()).or_insert_with(|| {
                lattice.push(m);
                next
            });
            ids[mask] = id;
        }
        Ok(Self { n, ids, lattice })
    }

    pub fn ngens(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn id(&self, s: Symbol) -> u32 {
        self.ids[s.0 as usize]
    }

    pub fn lcm(&self, s: Symbol) -> &Monomial {
        &self.lattice[self.id(s) as usize]
    }

    pub fn monomial(&self, id: u32) -> &Monomial {
        &self.lattice[id as usize]
    }

    /// Distinct lcms, including 1 (id 0).
    pub fn lattice(&self) -> &[Monomial] {
        &self.lattice
    }

    #[inline]
    pub fn same_lcm(&self, a: Symbol, b: Symbol) -> bool {
        self.id(a) == self.id(b)
    }

    pub fn all_symbols(&self) -> impl Iterator<Item = Symbol> {
        (0..1u64 << self.n).map(Symbol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_cycle() -> MonomialIdeal {
        MonomialIdeal::from_strs(&["x", "y", "z", "w"], &["x*w", "x*y", "y*z", "z*w"]).unwrap()
    }

    #[test]
    fn lcm_of_symbols() {
        let i = four_cycle();
        let c = i.ctx();
        assert_eq!(symbol_lcm(Symbol::full(4), &i), c.parse_monomial("x*y*z*w").unwrap());
        assert!(symbol_lcm(Symbol::EMPTY, &i).is_one());
        assert_eq!(symbol_lcm(Symbol::from_indices([0, 1]), &i), c.parse_monomial("x*y*w").unwrap());
        let t = LcmTable::new(&i).unwrap();
        for s in t.all_symbols() {
            assert_eq!(t.lcm(s), &symbol_lcm(s, &i));
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_symbols(4, Some(4)).unwrap().len(), 1);
        assert_eq!(enumerate_symbols(4, None).unwrap().len(), 15);
        assert_eq!(enumerate_symbols(4, Some(3)).unwrap().len(), 4);
        assert_eq!(enumerate_symbols(4, Some(5)).unwrap().len(), 0);
        assert_eq!(enumerate_symbols(4, Some(0)).unwrap(), vec![Symbol::EMPTY]);
        let all = enumerate_symbols(6, Some(3)).unwrap();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(enumerate_symbols(30, None).is_err());
    }

    #[test]
    fn incidence_signs() {
        let s = Symbol::from_indices([0, 1]);
        assert_eq!(incidence(s, Symbol::singleton(1)), 1);
        assert_eq!(incidence(s, Symbol::singleton(0)), -1);
        assert_eq!(incidence(s, Symbol::EMPTY), 0);
        assert_eq!(incidence(s, Symbol::singleton(2)), 0);
    }

    #[test]
    fn boundary_squares_to_zero() {
        for m in 1u64..1 << 7 {
            let s = Symbol(m);
            let mut acc: HashMap<Symbol, i64> = HashMap::new();
            for g in s.iter() {
                let f = s.without(g);
                for h in f.iter() {
                    *acc.entry(f.without(h)).or_default() += incidence(s, f) * incidence(f, f.without(h));
                }
            }
            assert!(acc.values().all(|&v| v == 0), "{s}");
        }
    }

    #[test]
    fn digraph_sizes() {
        let d = base_digraph(2).unwrap();
        assert_eq!(d.down_edges.len(), 4);
        assert_eq!(base_digraph(4).unwrap().down_edges.len(), 32);
        for n in 1..10 {
            assert_eq!(base_digraph(n).unwrap().down_edges.len(), n << (n - 1));
        }
    }

    #[test]
    fn symbol_json_roundtrip() {
        let s = Symbol::from_indices([3, 0, 5]);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, "[0,3,5]");
        assert_eq!(serde_json::from_str::<Symbol>(&j).unwrap(), s);
        assert_eq!(Symbol::parse("0,3,5", 6).unwrap(), s);
        assert!(Symbol::parse("7", 6).is_err());
    }
}
