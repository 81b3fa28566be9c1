//! Bridges, gaps, true gaps, the smallest-bridge function, and the
//! structural classification of symbols.

use serde::{Deserialize, Serialize};

use crate::ideal::GenOrder;
use crate::symbols::{LcmTable, Symbol};

/// Role of a symbol with respect to the bridge matching.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolClass {
    Type1,
    Type2,
    PotentialType2Only,
    Critical,
}

/// `g ∈ σ` and removing it keeps the lcm.
pub fn is_bridge(t: &LcmTable, g: usize, sigma: Symbol) -> bool {
    sigma.contains(g) && t.same_lcm(sigma, sigma.without(g))
}

/// `g ∉ σ` and adding it keeps the lcm.
pub fn is_gap(t: &LcmTable, g: usize, sigma: Symbol) -> bool {
    !sigma.contains(g) && t.same_lcm(sigma, sigma.with(g))
}

pub fn bridges(t: &LcmTable, sigma: Symbol) -> Symbol {
    Symbol::from_indices(sigma.iter().filter(|&g| is_bridge(t, g, sigma)))
}

pub fn gaps(t: &LcmTable, sigma: Symbol) -> Symbol {
    let outside = Symbol::full(t.ngens()).0 & !sigma.0;
    Symbol::from_indices(Symbol(outside).iter().filter(|&g| is_gap(t, g, sigma)))
}

/// The `>_I`-smallest element of a set.
pub fn smallest(set: Symbol, ord: &GenOrder) -> Option<usize> {
    set.iter().max_by_key(|&g| ord.rank(g))
}

pub fn sbridge(t: &LcmTable, sigma: Symbol, ord: &GenOrder) -> Option<usize> {
    let mut best: Option<usize> = None;
    for g in sigma.iter() {
        if t.same_lcm(sigma, sigma.without(g)) && best.is_none_or(|b| ord.rank(g) > ord.rank(b)) {
            best = Some(g);
        }
    }
    best
}

/// A gap whose insertion creates no new bridge that it dominates.
pub fn is_true_gap(t: &LcmTable, g: usize, sigma: Symbol, ord: &GenOrder) -> bool {
    if !is_gap(t, g, sigma) {
        return false;
    }
    let grown = sigma.with(g);
    grown.iter().all(|h| h == g || !ord.greater(g, h) || !is_bridge(t, h, grown) || is_bridge(t, h, sigma))
}

pub fn true_gaps(t: &LcmTable, sigma: Symbol, ord: &GenOrder) -> Symbol {
    let outside = Symbol::full(t.ngens()).0 & !sigma.0;
    Symbol::from_indices(Symbol(outside).iter().filter(|&g| is_true_gap(t, g, sigma, ord)))
}

/// Has a true gap dominating none of its bridges.
pub fn is_type1(t: &LcmTable, sigma: Symbol, ord: &GenOrder) -> bool {
    match smallest(true_gaps(t, sigma, ord), ord) {
        None => false,
        Some(tg) => sbridge(t, sigma, ord).is_none_or(|b| ord.greater(b, tg)),
    }
}

/// Has a bridge dominating none of its true gaps.
pub fn is_potentially_type2(t: &LcmTable, sigma: Symbol, ord: &GenOrder) -> bool {
    match sbridge(t, sigma, ord) {
        None => false,
        Some(b) => smallest(true_gaps(t, sigma, ord), ord).is_none_or(|tg| ord.greater(tg, b)),
    }
}

/// Classification from the structure theory alone, without running the
/// matching. Among potentially-type-2 symbols sharing `σ∖sbridge(σ)`, the
/// one with the smallest sbridge keeps its edge.
pub fn classify_structural(t: &LcmTable, sigma: Symbol, ord: &GenOrder) -> SymbolClass {
    if is_type1(t, sigma, ord) {
        return SymbolClass::Type1;
    }
    if !is_potentially_type2(t, sigma, ord) {
        return SymbolClass::Critical;
    }
    let b = sbridge(t, sigma, ord).expect("potentially-type-2 has a bridge");
    let base = sigma.without(b);
    let beaten = (0..t.ngens()).filter(|&h| h != b && !base.contains(h)).any(|h| {
        let rival = base.with(h);
        ord.greater(b, h) && sbridge(t, rival, ord) == Some(h) && is_potentially_type2(t, rival, ord)
    });
    if beaten {
        SymbolClass::PotentialType2Only
    } else {
        SymbolClass::Type2
    }
}

/// Outcome of the friendliness criterion; `witness` is `(σ, m)` where `σ`
/// is potentially-type-2 and `m` is a true gap of `σ∖sbridge(σ)` below
/// `sbridge(σ)` that is not a true gap of `σ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FriendlinessCheck {
    pub friendly: bool,
    pub witness: Option<(Symbol, usize)>,
}

pub fn check_friendliness_criterion(t: &LcmTable, ord: &GenOrder) -> FriendlinessCheck {
    for sigma in t.all_symbols().filter(|s| s.len() >= 3) {
        if !is_potentially_type2(t, sigma, ord) {
            continue;
        }
        let b = sbridge(t, sigma, ord).expect("bridge exists");
        let base = sigma.without(b);
        for m in true_gaps(t, base, ord).iter() {
            if ord.greater(b, m) && !is_true_gap(t, m, sigma, ord) {
                return FriendlinessCheck { friendly: false, witness: Some((sigma, m)) };
            }
        }
    }
    FriendlinessCheck { friendly: true, witness: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::MonomialIdeal;

    fn setup() -> (LcmTable, GenOrder) {
        let i = MonomialIdeal::from_strs(&["x", "y", "z", "w"], &["x*w", "x*y", "y*z", "z*w"]).unwrap();
        (LcmTable::new(&i).unwrap(), GenOrder::identity(4))
    }

    const XW: usize = 0;
    const XY: usize = 1;
    const YZ: usize = 2;
    const ZW: usize = 3;

    #[test]
    fn four_cycle_bridges_and_gaps() {
        let (t, o) = setup();
        let s1 = Symbol::from_indices([XW, XY, YZ]);
        assert!(is_bridge(&t, XY, s1));
        assert!(!is_bridge(&t, XW, s1));
        assert_eq!(bridges(&t, s1), Symbol::singleton(XY));
        assert!(!is_bridge(&t, XW, Symbol::singleton(XW)));
        assert_eq!(sbridge(&t, Symbol::full(4), &o), Some(ZW));
        let s2 = Symbol::from_indices([XW, XY, ZW]);
        assert_eq!(sbridge(&t, s2, &o), Some(XW));
        assert_eq!(sbridge(&t, Symbol::from_indices([XW, YZ]), &o), None);
        assert!(is_gap(&t, ZW, s1));
        assert_eq!(gaps(&t, s1), Symbol::singleton(ZW));
        assert!(is_gap(&t, YZ, s2));
        assert!(!is_gap(&t, XW, s2));
        assert!(is_true_gap(&t, ZW, s1, &o));
        assert!(!is_true_gap(&t, YZ, s2, &o));
    }

    #[test]
    fn four_cycle_structural_classes() {
        let (t, o) = setup();
        assert_eq!(classify_structural(&t, Symbol::full(4), &o), SymbolClass::Type2);
        assert_eq!(classify_structural(&t, Symbol::from_indices([XW, XY, ZW]), &o), SymbolClass::PotentialType2Only);
        assert_eq!(classify_structural(&t, Symbol::from_indices([XW, XY]), &o), SymbolClass::Critical);
        let c = check_friendliness_criterion(&t, &o);
        assert!(!c.friendly);
        assert_eq!(c.witness, Some((Symbol::from_indices([XW, XY, ZW]), YZ)));
    }

    #[test]
    fn bridge_free_ideal_is_vacuously_friendly() {
        let i = MonomialIdeal::from_strs(&["x", "y", "z"], &["x", "y", "z"]).unwrap();
        let t = LcmTable::new(&i).unwrap();
        assert!(check_friendliness_criterion(&t, &GenOrder::identity(3)).friendly);
    }
}
