//! Gradient flows, the Morse differential, and minimality verdicts.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use crate::betti::{GradedBettiTable, RankVector};
use crate::error::{Error, Result};
use crate::ideal::{GenOrder, Monomial};
use crate::linalg::FieldSpec;
use crate::matching::{bridge_matching, critical_symbols, Matching};
use crate::symbols::{sign_of_removal, LcmTable, Symbol};

/// `σ″ → Σ_P m(P)` over gradient paths ending at critical `σ″`; sorted.
pub type Flow = Vec<(Symbol, i64)>;

/// Memoized gradient flows for one matching.
pub struct FlowCache<'a> {
    m: &'a Matching,
    memo: HashMap<Symbol, Flow>,
}

impl<'a> FlowCache<'a> {
    pub fn new(m: &'a Matching) -> Self {
        Self { m, memo: HashMap::new() }
    }

    /// Flow from `start` to the criticals of its cardinality. Only paths
    /// that climb through matched pairs can return to the start level, so
    /// the only inputs are the critical/matched status of same-level cells.
    pub fn flow(&mut self, start: Symbol) -> Result<&Flow> {
        let mut stack = vec![start];
        let mut expanded: HashSet<Symbol> = HashSet::new();
        while let Some(&tau) = stack.last() {
            if self.memo.contains_key(&tau) {
                stack.pop();
                continue;
            }
            let Some(e) = self.m.edge_into(tau).copied() else {
                let f = if self.m.is_matched(tau) { Vec::new() } else { vec![(tau, 1)] };
                self.memo.insert(tau, f);
                continue;
            };
            let rho = e.source;
            let pending: Vec<Symbol> = rho
                .iter()
                .filter(|&g| g != e.pivot)
                .map(|g| rho.without(g))
                .filter(|f| !self.memo.contains_key(f))
                .collect();
            if pending.is_empty() {
                let up = -sign_of_removal(rho, e.pivot);
                let mut acc: BTreeMap<Symbol, i64> = BTreeMap::new();
                for g in rho.iter().filter(|&g| g != e.pivot) {
                    let w = up * sign_of_removal(rho, g);
                    for &(c, v) in &self.memo[&rho.without(g)] {
                        let slot = acc.entry(c).or_default();
                        *slot = v.checked_mul(w).and_then(|x| slot.checked_add(x)).ok_or(Error::CoefficientOverflow)?;
                    }
                }
                self.memo.insert(tau, acc.into_iter().filter(|&(_, v)| v != 0).collect());
                expanded.remove(&tau);
            } else {
                // Returning to an expanded cell with unresolved inputs, or
                // needing an ancestor, both mean a directed cycle.
                if !expanded.insert(tau) || pending.iter().any(|f| expanded.contains(f)) {
                    return Err(Error::Precondition("matching is not acyclic".into()));
                }
                stack.extend(pending);
            }
        }
        Ok(&self.memo[&start])
    }
}

pub fn gradient_flow(start: Symbol, m: &Matching) -> Result<Flow> {
    FlowCache::new(m).flow(start).cloned()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffEntry {
    pub row: usize,
    pub col: usize,
    pub coeff: i64,
    pub monomial: Monomial,
}

/// `∂_r`: rows are the criticals of cardinality `r−1`, columns those of
/// cardinality `r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffMatrix {
    pub degree: usize,
    pub rows: Vec<Symbol>,
    pub cols: Vec<Symbol>,
    pub entries: Vec<DiffEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseDifferential {
    pub criticals: Vec<Vec<Symbol>>,
    /// `matrices[r-1]` is `∂_r`.
    pub matrices: Vec<DiffMatrix>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
    /// No entry is a nonzero constant.
    pub minimal: bool,
    /// No two criticals of adjacent cardinality share an lcm (sufficient).
    pub lcm_separated: bool,
}

pub fn differential(m: &Matching, t: &LcmTable) -> Result<MorseDifferential> {
    let criticals = critical_symbols(m, t.ngens());
    let mut cache = FlowCache::new(m);
    let mut matrices = Vec::new();
    for r in 1..criticals.len() {
        let rows = criticals[r - 1].clone();
        let cols = criticals[r].clone();
        let row_of: HashMap<Symbol, usize> = rows.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut entries = Vec::new();
        for (ci, &sigma) in cols.iter().enumerate() {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for g in sigma.iter() {
                let inc = sign_of_removal(sigma, g);
                for &(c, v) in cache.flow(sigma.without(g))? {
                    let slot = acc.entry(row_of[&c]).or_default();
                    *slot = slot.checked_add(inc * v).ok_or(Error::CoefficientOverflow)?;
                }
            }
            for (ri, coeff) in acc {
                if coeff == 0 {
                    continue;
                }
                let monomial = t
                    .lcm(sigma)
                    .quotient(t.lcm(rows[ri]))
                    .ok_or_else(|| Error::Precondition("matching is not lcm-homogeneous".into()))?;
                entries.push(DiffEntry { row: ri, col: ci, coeff, monomial });
            }
        }
        matrices.push(DiffMatrix { degree: r, rows, cols, entries });
    }
    Ok(MorseDifferential { criticals, matrices })
}

impl MorseDifferential {
    pub fn ranks(&self) -> RankVector {
        RankVector::new(self.criticals.iter().map(|c| c.len() as u64).collect())
    }

    pub fn is_minimal(&self) -> bool {
        self.matrices.iter().all(|d| d.entries.iter().all(|e| e.coeff == 0 || !e.monomial.is_one()))
    }

    /// No constant entry survives reduction into `field`.
    pub fn is_minimal_over(&self, field: FieldSpec) -> bool {
        let p = field.characteristic() as i64;
        self.matrices.iter().all(|d| {
            d.entries.iter().all(|e| !e.monomial.is_one() || if p == 0 { e.coeff == 0 } else { e.coeff % p == 0 })
        })
    }

    pub fn minimality(&self, t: &LcmTable) -> MinimalityReport {
        let lcm_separated = self.criticals.windows(2).all(|w| {
            let below: std::collections::HashSet<u32> = w[0].iter().map(|&s| t.id(s)).collect();
            w[1].iter().all(|&s| !below.contains(&t.id(s)))
        });
        MinimalityReport { minimal: self.is_minimal(), lcm_separated }
    }

    /// `∂_{r-1} ∘ ∂_r = 0` with monomial bookkeeping; returns the first
    /// offending `(r, row, col)`.
    pub fn check_square_zero(&self) -> std::result::Result<(), (usize, Symbol, Symbol)> {
        for w in self.matrices.windows(2) {
            let (lower, upper) = (&w[0], &w[1]);
            let mut by_row: HashMap<usize, Vec<&DiffEntry>> = HashMap::new();
            for e in &lower.entries {
                by_row.entry(e.col).or_default().push(e);
            }
            let mut acc: BTreeMap<(usize, usize, Monomial), i128> = BTreeMap::new();
            for u in &upper.entries {
                for l in by_row.get(&u.row).into_iter().flatten() {
                    let mono = l.monomial.mul(&u.monomial).expect("same ring");
                    *acc.entry((l.row, u.col, mono)).or_default() += u.coeff as i128 * l.coeff as i128;
                }
            }
            if let Some(((row, col, _), _)) = acc.iter().find(|(_, &v)| v != 0) {
                return Err((upper.degree, lower.rows[*row], upper.cols[*col]));
            }
        }
        Ok(())
    }

    /// The differential with one coefficient negated; for mutation tests.
    pub fn with_flipped_sign(&self, r: usize, entry: usize) -> Self {
        let mut out = self.clone();
        out.matrices[r - 1].entries[entry].coeff *= -1;
        out
    }

    pub fn to_json(&self, t: &LcmTable) -> ResolutionJson {
        ResolutionJson {
            ranks: self.ranks().0,
            criticals: self.criticals.clone(),
            matrices: self
                .matrices
                .iter()
                .map(|d| MatrixJson {
                    degree: d.degree,
                    rows: d.rows.clone(),
                    cols: d.cols.clone(),
                    entries: d
                        .entries
                        .iter()
                        .map(|e| (e.row, e.col, e.coeff, e.monomial.exponents().to_vec()))
                        .collect(),
                })
                .collect(),
            minimality: self.minimality(t),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixJson {
    pub degree: usize,
    pub rows: Vec<Symbol>,
    pub cols: Vec<Symbol>,
    /// `(row, col, coeff, monomial exponents)`.
    pub entries: Vec<(usize, usize, i64, Vec<u32>)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResolutionJson {
    pub ranks: Vec<u64>,
    pub criticals: Vec<Vec<Symbol>>,
    pub matrices: Vec<MatrixJson>,
    pub minimality: MinimalityReport,
}

/// Counts of criticals by cardinality and lcm: an upper bound for the
/// Betti table, attained iff the resolution is minimal.
pub fn betti_from_criticals(m: &Matching, t: &LcmTable) -> GradedBettiTable {
    let mut table = GradedBettiTable::new();
    for (r, level) in critical_symbols(m, t.ngens()).iter().enumerate() {
        for &s in level {
            table.add(r, t.lcm(s).clone(), 1);
        }
    }
    table
}

/// Characteristic-zero minimality of the bridge resolution for `ord`.
pub fn is_bridge_minimal(t: &LcmTable, ord: &GenOrder) -> Result<bool> {
    Ok(differential(&bridge_matching(t, ord), t)?.is_minimal())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::MonomialIdeal;

    fn four_cycle() -> LcmTable {
        let i = MonomialIdeal::from_strs(&["x", "y", "z", "w"], &["x*w", "x*y", "y*z", "z*w"]).unwrap();
        LcmTable::new(&i).unwrap()
    }

    #[test]
    fn four_cycle_resolution() {
        let t = four_cycle();
        let m = bridge_matching(&t, &GenOrder::identity(4));
        let d = differential(&m, &t).unwrap();
        assert_eq!(d.ranks(), [1, 4, 4, 1]);
        assert_eq!(d.matrices.len(), 3);
        assert_eq!((d.matrices[1].rows.len(), d.matrices[1].cols.len()), (4, 4));
        assert_eq!((d.matrices[2].rows.len(), d.matrices[2].cols.len()), (4, 1));
        assert!(d.is_minimal());
        assert!(d.minimality(&t).lcm_separated);
        assert_eq!(d.check_square_zero(), Ok(()));
        let crit = crate::matching::critical_symbols(&m, 4)[2][0];
        assert_eq!(gradient_flow(crit, &m).unwrap(), vec![(crit, 1)]);
        for e in d.matrices.iter().flat_map(|d| &d.entries) {
            assert!(e.coeff.abs() == 1);
        }
    }

    #[test]
    fn empty_matching_gives_taylor() {
        let i = MonomialIdeal::from_strs(&["x", "y"], &["x", "y"]).unwrap();
        let t = LcmTable::new(&i).unwrap();
        let d = differential(&Matching::default(), &t).unwrap();
        assert_eq!(d.ranks(), [1, 2, 1]);
        assert!(d.is_minimal());
        let koszul: Vec<i64> = d.matrices[1].entries.iter().map(|e| e.coeff).collect();
        assert_eq!(koszul, vec![-1, 1]);
        assert_eq!(d.check_square_zero(), Ok(()));
    }

    #[test]
    fn order_dependence() {
        let i = MonomialIdeal::from_strs(&["x", "y", "z"], &["x^2*y^2", "y^2*z^2", "x*z^2", "x^2*z"]).unwrap();
        let t = LcmTable::new(&i).unwrap();
        let first = GenOrder::identity(4);
        let second = GenOrder::new(vec![2, 3, 0, 1]).unwrap();
        let d1 = differential(&bridge_matching(&t, &first), &t).unwrap();
        let d2 = differential(&bridge_matching(&t, &second), &t).unwrap();
        assert_eq!(d1.ranks(), [1, 4, 3]);
        assert!(d1.is_minimal());
        assert_eq!(d2.ranks(), [1, 4, 4, 1]);
        assert!(!d2.is_minimal());
        assert!(is_bridge_minimal(&t, &first).unwrap());
        assert!(!is_bridge_minimal(&t, &second).unwrap());
    }
}
