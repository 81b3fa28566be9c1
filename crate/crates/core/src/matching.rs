//! The bridge-matching algorithm (batched and eager variants), validation of
//! the acyclic-matching axioms, critical symbols and the Morse digraph.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::bridges::{sbridge, SymbolClass};
use crate::ideal::GenOrder;
use crate::symbols::{sign_of_removal, symbols_of_card, LcmTable, Symbol};

/// A directed edge `source → source∖{pivot}` of the Taylor simplex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MatchEdge {
    pub source: Symbol,
    pub target: Symbol,
    #[serde(rename = "sbridge")]
    pub pivot: usize,
}

impl MatchEdge {
    pub fn new(source: Symbol, pivot: usize) -> Self {
        Self { source, target: source.without(pivot), pivot }
    }
}

/// A set of matched edges with lookup by either endpoint.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching {
    edges: Vec<MatchEdge>,
    by_source: HashMap<Symbol, usize>,
    by_target: HashMap<Symbol, usize>,
    potential_sources: BTreeSet<Symbol>,
}

impl Matching {
    /// Index the given edges; later duplicates of an endpoint are kept in
    /// `edges` (so [`validate_matching`] can see them) but not re-indexed.
    pub fn from_edges(mut edges: Vec<MatchEdge>, potential_sources: BTreeSet<Symbol>) -> Self {
        edges.sort();
        edges.dedup();
        let mut by_source = HashMap::with_capacity(edges.len());
        let mut by_target = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            by_source.entry(e.source).or_insert(i);
            by_target.entry(e.target).or_insert(i);
        }
        Self { edges, by_source, by_target, potential_sources }
    }

    pub fn edges(&self) -> &[MatchEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Sources proposed before conflict pruning (all sources for matchings
    /// not produced by the bridge algorithm).
    pub fn potential_sources(&self) -> &BTreeSet<Symbol> {
        &self.potential_sources
    }

    pub fn edge_from(&self, s: Symbol) -> Option<&MatchEdge> {
        self.by_source.get(&s).map(|&i| &self.edges[i])
    }

    pub fn edge_into(&self, s: Symbol) -> Option<&MatchEdge> {
        self.by_target.get(&s).map(|&i| &self.edges[i])
    }

    pub fn is_matched(&self, s: Symbol) -> bool {
        self.by_source.contains_key(&s) || self.by_target.contains_key(&s)
    }

    /// Whether `(s, t)` is an edge of the matching.
    pub fn contains(&self, s: Symbol, t: Symbol) -> bool {
        self.edge_from(s).is_some_and(|e| e.target == t)
    }

    pub fn class_of(&self, s: Symbol) -> SymbolClass {
        if self.by_target.contains_key(&s) {
            SymbolClass::Type1
        } else if self.by_source.contains_key(&s) {
            SymbolClass::Type2
        } else if self.potential_sources.contains(&s) {
            SymbolClass::PotentialType2Only
        } else {
            SymbolClass::Critical
        }
    }
}

/// Dense record of one run over all `2^n` symbols; used directly by the
/// order search to avoid building hash maps per order.
pub(crate) struct DenseRun {
    /// pivot + 1 for proposed sources, 0 otherwise.
    pub proposed: Vec<u8>,
    /// Final pivot + 1 kept for each target, 0 if unmatched.
    pub kept_into: Vec<u8>,
    pub conflicts: usize,
}

impl DenseRun {
    pub fn run(t: &LcmTable, ord: &GenOrder) -> Self {
        let n = t.ngens();
        let size = 1usize << n;
        let mut proposed = vec![0u8; size];
        let mut kept_into = vec![0u8; size];
        let mut removed = vec![false; size];
        let mut conflicts = 0;
        for k in (3..=n).rev() {
            for s in symbols_of_card(n, k) {
                if removed[s.0 as usize] {
                    continue;
                }
                if let Some(b) = sbridge(t, s, ord) {
                    let target = s.without(b).0 as usize;
                    proposed[s.0 as usize] = b as u8 + 1;
                    match kept_into[target] {
                        0 => kept_into[target] = b as u8 + 1,
                        prev => {
                            conflicts += 1;
                            if ord.greater(prev as usize - 1, b) {
                                kept_into[target] = b as u8 + 1;
                            }
                        }
                    }
                    removed[target] = true;
                }
            }
        }
        Self { proposed, kept_into, conflicts }
    }

    pub fn is_friendly(&self) -> bool {
        self.conflicts == 0
    }

    /// Whether `mask` lies in no final edge.
    pub fn is_critical(&self, mask: usize) -> bool {
        if self.kept_into[mask] != 0 {
            return false;
        }
        match self.proposed[mask] {
            0 => true,
            p => {
                let target = mask & !(1usize << (p - 1));
                self.kept_into[target] != p
            }
        }
    }

    pub fn into_matching(self) -> Matching {
        let mut edges = Vec::new();
        let mut potential = BTreeSet::new();
        for (mask, &p) in self.proposed.iter().enumerate() {
            if p == 0 {
                continue;
            }
            let s = Symbol(mask as u64);
            potential.insert(s);
            let pivot = p as usize - 1;
            if self.kept_into[s.without(pivot).0 as usize] == p {
                edges.push(MatchEdge::new(s, pivot));
            }
        }
        Matching::from_edges(edges, potential)
    }
}

/// Batched variant: propose from the top cardinality down, then prune
/// conflicting proposals keeping the smallest sbridge per target.
pub fn bridge_matching(t: &LcmTable, ord: &GenOrder) -> Matching {
    DenseRun::run(t, ord).into_matching()
}

/// Eager variant: resolve each conflict as soon as it appears.
pub fn bridge_matching_eager(t: &LcmTable, ord: &GenOrder) -> Matching {
    let n = t.ngens();
    // target → (source, pivot)
    let mut into: HashMap<Symbol, (Symbol, usize)> = HashMap::new();
    let mut potential = BTreeSet::new();
    for k in (3..=n).rev() {
        for s in symbols_of_card(n, k) {
            if into.contains_key(&s) {
                continue;
            }
            let Some(b) = sbridge(t, s, ord) else { continue };
            potential.insert(s);
            let target = s.without(b);
            match into.get(&target) {
                Some(&(_, old)) if ord.greater(b, old) => {}
                _ => {
                    into.insert(target, (s, b));
                }
            }
        }
    }
    let edges = into.values().map(|&(s, b)| MatchEdge::new(s, b)).collect();
    Matching::from_edges(edges, potential)
}

/// First violated matching axiom, with a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatchingViolation {
    NotAFacet { source: Symbol, target: Symbol },
    NotHomogeneous { source: Symbol, target: Symbol },
    Repeated { symbol: Symbol },
    Cycle { cycle: Vec<Symbol> },
}

/// Check the matching, homogeneity and acyclicity axioms. A directed cycle
/// of `G^A` keeps a constant lcm, so only same-lcm edges are traversed.
pub fn validate_matching(m: &Matching, t: &LcmTable) -> Result<(), MatchingViolation> {
    let mut seen = BTreeSet::new();
    for e in m.edges() {
        let ok = e.source.contains(e.pivot) && e.target == e.source.without(e.pivot) && (e.source.0 >> t.ngens()) == 0;
        if !ok {
            return Err(MatchingViolation::NotAFacet { source: e.source, target: e.target });
        }
        if !t.same_lcm(e.source, e.target) {
            return Err(MatchingViolation::NotHomogeneous { source: e.source, target: e.target });
        }
        for s in [e.source, e.target] {
            if !seen.insert(s) {
                return Err(MatchingViolation::Repeated { symbol: s });
            }
        }
    }
    find_cycle(m, t).map_or(Ok(()), |cycle| Err(MatchingViolation::Cycle { cycle }))
}

/// Same-lcm successors of `s` in `G^A`.
fn successors(m: &Matching, t: &LcmTable, s: Symbol) -> Vec<Symbol> {
    let mut out = Vec::new();
    if let Some(e) = m.edge_into(s) {
        out.push(e.source);
    }
    let matched_down = m.edge_from(s).map(|e| e.target);
    for g in s.iter() {
        let f = s.without(g);
        if Some(f) != matched_down && t.same_lcm(s, f) {
            out.push(f);
        }
    }
    out
}

fn find_cycle(m: &Matching, t: &LcmTable) -> Option<Vec<Symbol>> {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut color: HashMap<Symbol, u8> = HashMap::new();
    for root in t.all_symbols() {
        if color.contains_key(&root) {
            continue;
        }
        let mut stack: Vec<(Symbol, Vec<Symbol>, usize)> = vec![(root, successors(m, t, root), 0)];
        color.insert(root, 1);
        while let Some(top) = stack.last_mut() {
            if top.2 < top.1.len() {
                let next = top.1[top.2];
                top.2 += 1;
                match color.get(&next) {
                    Some(1) => {
                        let start = stack.iter().position(|f| f.0 == next).unwrap_or(0);
                        return Some(stack[start..].iter().map(|f| f.0).collect());
                    }
                    Some(_) => {}
                    None => {
                        color.insert(next, 1);
                        let succ = successors(m, t, next);
                        stack.push((next, succ, 0));
                    }
                }
            } else {
                color.insert(top.0, 2);
                stack.pop();
            }
        }
    }
    None
}

/// Symbols in no edge, grouped by cardinality (index = cardinality).
pub fn critical_symbols(m: &Matching, n: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new(); n + 1];
    for mask in 0..1u64 << n {
        let s = Symbol(mask);
        if !m.is_matched(s) {
            out[s.len()].push(s);
        }
    }
    while out.len() > 1 && out.last().is_some_and(Vec::is_empty) {
        out.pop();
    }
    out
}

pub fn critical_counts(m: &Matching, n: usize) -> Vec<usize> {
    critical_symbols(m, n).iter().map(Vec::len).collect()
}

/// Class of every symbol as read off the run (index = mask).
pub fn classify_by_run(m: &Matching, n: usize) -> Vec<SymbolClass> {
    (0..1u64 << n).map(|mask| m.class_of(Symbol(mask))).collect()
}

/// Every potentially-type-2 symbol kept its edge.
pub fn is_bridge_friendly(t: &LcmTable, ord: &GenOrder) -> bool {
    DenseRun::run(t, ord).is_friendly()
}

/// Edge of `G^A` with its weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MorseEdge {
    pub from: Symbol,
    pub to: Symbol,
    pub weight: i64,
}

/// `G^A`: the facet digraph with matched edges reversed.
#[derive(Clone, Debug, Serialize)]
pub struct MorseDigraph {
    pub edges: Vec<MorseEdge>,
}

/// Weight of a `G^A` edge: the incidence for down-edges, minus the
/// incidence of the original edge for reversed ones.
pub fn edge_weight(from: Symbol, to: Symbol, m: &Matching) -> Option<i64> {
    if to.len() == from.len() + 1 && from.is_subset(to) {
        m.contains(to, from).then(|| -incidence_of(to, from))
    } else if from.len() == to.len() + 1 && to.is_subset(from) && !m.contains(from, to) {
        Some(incidence_of(from, to))
    } else {
        None
    }
}

fn incidence_of(s: Symbol, f: Symbol) -> i64 {
    sign_of_removal(s, (s.0 & !f.0).trailing_zeros() as usize)
}

pub fn morse_digraph(m: &Matching, n: usize) -> MorseDigraph {
    let mut edges = Vec::new();
    for mask in 1..1u64 << n {
        let s = Symbol(mask);
        for g in s.iter() {
            let f = s.without(g);
            let w = sign_of_removal(s, g);
            if m.contains(s, f) {
                edges.push(MorseEdge { from: f, to: s, weight: -w });
            } else {
                edges.push(MorseEdge { from: s, to: f, weight: w });
            }
        }
    }
    MorseDigraph { edges }
}

/// JSON report of a matching.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatchingReport {
    pub edges: Vec<MatchEdge>,
    pub critical: Vec<Symbol>,
    pub classes: BTreeMap<String, Vec<Symbol>>,
}

impl MatchingReport {
    pub fn new(m: &Matching, n: usize) -> Self {
        let critical = critical_symbols(m, n).into_iter().flatten().collect();
        let mut classes: BTreeMap<String, Vec<Symbol>> = BTreeMap::new();
        for key in ["type1", "type2", "potential_type2_only"] {
            classes.insert(key.into(), Vec::new());
        }
        for mask in 0..1u64 << n {
            let s = Symbol(mask);
            let key = match m.class_of(s) {
                SymbolClass::Type1 => "type1",
                SymbolClass::Type2 => "type2",
                SymbolClass::PotentialType2Only => "potential_type2_only",
                SymbolClass::Critical => continue,
            };
            classes.get_mut(key).expect("key inserted").push(s);
        }
        Self { edges: m.edges().to_vec(), critical, classes }
    }

    /// Rebuild the matching described by a report.
    pub fn to_matching(&self) -> Matching {
        let mut potential: BTreeSet<Symbol> = self.edges.iter().map(|e| e.source).collect();
        if let Some(p) = self.classes.get("potential_type2_only") {
            potential.extend(p.iter().copied());
        }
        Matching::from_edges(self.edges.clone(), potential)
    }
}
