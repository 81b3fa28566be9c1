//! Taylor ranks, the Lyubeznik matching, the Scarf complex, and the
//! Yuzvinsky condition.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::betti::RankVector;
use crate::ideal::GenOrder;
use crate::matching::{bridge_matching, critical_counts, MatchEdge, Matching};
use crate::symbols::{LcmTable, Symbol};

/// `ranks[r] = C(n, r)`.
pub fn taylor_ranks(n: usize) -> RankVector {
    let mut v = vec![1u64];
    for r in 1..=n {
        let prev = v[r - 1];
        v.push(prev * (n - r + 1) as u64 / r as u64);
    }
    RankVector::new(v)
}

fn descending(sigma: Symbol, ord: &GenOrder) -> Vec<usize> {
    let mut v = sigma.indices();
    v.sort_by_key(|&g| ord.rank(g));
    v
}

fn gen_divides(t: &LcmTable, g: usize, s: Symbol) -> bool {
    t.lcm(Symbol::singleton(g)).divides_unchecked(t.lcm(s))
}

/// Largest `k` (1-based, on the descending listing of `σ`) such that some
/// generator below `m_k` divides `lcm(m_1..m_k)`; `None` is `−∞`.
pub fn lyubeznik_vl(t: &LcmTable, sigma: Symbol, ord: &GenOrder) -> Option<usize> {
    let list = descending(sigma, ord);
    let mut prefix = Vec::with_capacity(list.len());
    let mut acc = Symbol::EMPTY;
    for &g in &list {
        acc = acc.with(g);
        prefix.push(acc);
    }
    (1..=list.len()).rev().find(|&k| {
        let mk = list[k - 1];
        (0..t.ngens()).any(|m| ord.greater(mk, m) && gen_divides(t, m, prefix[k - 1]))
    })
}

/// The `>_I`-least generator dividing `lcm(m_1..m_{v_L})`.
pub fn lyubeznik_ml(t: &LcmTable, sigma: Symbol, ord: &GenOrder) -> Option<usize> {
    let k = lyubeznik_vl(t, sigma, ord)?;
    let head = Symbol::from_indices(descending(sigma, ord).into_iter().take(k));
    (0..t.ngens()).filter(|&m| gen_divides(t, m, head)).max_by_key(|&m| ord.rank(m))
}

/// `{(σ ∪ m_L(σ), σ ∖ m_L(σ))}` over all symbols with finite `v_L`.
pub fn lyubeznik_matching(t: &LcmTable, ord: &GenOrder) -> Matching {
    let edges: BTreeSet<MatchEdge> = t
        .all_symbols()
        .filter(|s| !s.is_empty())
        .filter_map(|s| lyubeznik_ml(t, s, ord).map(|m| MatchEdge::new(s.with(m), m)))
        .collect();
    let sources = edges.iter().map(|e| e.source).collect();
    Matching::from_edges(edges.into_iter().collect(), sources)
}

/// Symbols whose lcm no other symbol attains, by cardinality.
pub fn scarf_complex(t: &LcmTable) -> Vec<Vec<Symbol>> {
    let mut count = vec![0u32; t.lattice().len()];
    for s in t.all_symbols() {
        count[t.id(s) as usize] += 1;
    }
    let mut out = vec![Vec::new(); t.ngens() + 1];
    for s in t.all_symbols() {
        if count[t.id(s) as usize] == 1 {
            out[s.len()].push(s);
        }
    }
    while out.len() > 1 && out.last().is_some_and(Vec::is_empty) {
        out.pop();
    }
    out
}

pub fn scarf_ranks(t: &LcmTable) -> RankVector {
    RankVector::new(scarf_complex(t).iter().map(|l| l.len() as u64).collect())
}

/// Equal lcm implies the intersection has that lcm too. Checked per lcm
/// fibre via the intersection of the whole fibre, which is equivalent.
pub fn yuzvinsky_condition(t: &LcmTable) -> bool {
    let mut meet: Vec<Option<Symbol>> = vec![None; t.lattice().len()];
    for s in t.all_symbols() {
        let slot = &mut meet[t.id(s) as usize];
        *slot = Some(slot.map_or(s, |m| m.intersection(s)));
    }
    t.all_symbols().all(|s| {
        let m = meet[t.id(s) as usize].expect("fibre is nonempty");
        t.same_lcm(m, s)
    })
}

/// The four rank vectors of the comparison report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub taylor: RankVector,
    pub lyubeznik: RankVector,
    pub scarf: RankVector,
    pub barile_macchia: RankVector,
}

pub fn compare(t: &LcmTable, ord: &GenOrder) -> ComparisonReport {
    let n = t.ngens();
    ComparisonReport {
        taylor: taylor_ranks(n),
        lyubeznik: RankVector::from_counts(&critical_counts(&lyubeznik_matching(t, ord), n)),
        scarf: scarf_ranks(t),
        barile_macchia: RankVector::from_counts(&critical_counts(&bridge_matching(t, ord), n)),
    }
}
