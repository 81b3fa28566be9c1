//! Eliahou–Kervaire splittings, with the two nested splittings of the
//! edge ideal of an unweighted cycle.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::{Monomial, MonomialIdeal, RingContext};
use crate::linalg::FieldSpec;
use crate::oracle::tor_betti;

/// Largest `|G(J ∩ K)|` for which every subset is enumerated.
pub const MAX_INTERSECTION_GENERATORS: usize = 20;

/// `w ↦ (left gen, right gen)` on the minimal generators of `J ∩ K`,
/// stored as indices into `G(J)` and `G(K)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingMap {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// A decomposition `I = J + K` with `J ∩ K` and its splitting map.
#[derive(Clone, Debug)]
pub struct EkSplit {
    pub whole: MonomialIdeal,
    pub left: MonomialIdeal,
    pub right: MonomialIdeal,
    pub intersection: MonomialIdeal,
    pub map: SplittingMap,
}

/// The outer splitting of `I(C_n)` and the inner splitting of its
/// intersection ideal.
#[derive(Clone, Debug)]
pub struct CycleSplitting {
    pub outer: EkSplit,
    pub inner: EkSplit,
}

/// Minimal generators of `J ∩ K` (pairwise lcms, minimized).
pub fn ideal_intersection(j: &MonomialIdeal, k: &MonomialIdeal) -> Result<MonomialIdeal> {
    if j.nvars() != k.nvars() {
        return Err(Error::ContextMismatch { left: j.nvars(), right: k.nvars() });
    }
    let raw = j.gens().iter().flat_map(|a| k.gens().iter().map(move |b| a.join(b))).collect();
    MonomialIdeal::minimize_generators(j.ctx().clone(), raw)
}

fn strictly_divides(a: &Monomial, b: &Monomial) -> bool {
    a != b && a.divides_unchecked(b)
}

/// Both conditions of an E-K splitting. Errors unless `G(I)` is the
/// disjoint union of `G(J)` and `G(K)`, or when `J ∩ K` has too many
/// generators to enumerate.
pub fn validate_ek(
    i: &MonomialIdeal,
    j: &MonomialIdeal,
    k: &MonomialIdeal,
    inter: &MonomialIdeal,
    map: &SplittingMap,
) -> Result<bool> {
    let mut union: Vec<&Monomial> = j.gens().iter().chain(k.gens()).collect();
    let mut whole: Vec<&Monomial> = i.gens().iter().collect();
    union.sort();
    whole.sort();
    let disjoint = !j.gens().iter().any(|g| k.gens().contains(g));
    if !disjoint || union != whole {
        return Err(Error::Precondition("G(I) is not the disjoint union of G(J) and G(K)".into()));
    }
    let m = inter.ngens();
    if m > MAX_INTERSECTION_GENERATORS {
        return Err(Error::Capacity(format!(
            "{m} intersection generators exceed the subset limit {MAX_INTERSECTION_GENERATORS}"
        )));
    }
    if map.left.len() != m || map.right.len() != m {
        return Err(Error::Precondition("splitting map does not cover G(J ∩ K)".into()));
    }
    let phi = |w: usize| j.gen(map.left[w]);
    let psi = |w: usize| k.gen(map.right[w]);
    if (0..m).any(|w| phi(w).join(psi(w)) != *inter.gen(w)) {
        return Ok(false);
    }
    let one = Monomial::one(i.nvars());
    for subset in 1u32..1 << m {
        let (mut l, mut a, mut b) = (one.clone(), one.clone(), one.clone());
        for w in (0..m).filter(|&w| subset >> w & 1 == 1) {
            l = l.join(inter.gen(w));
            a = a.join(phi(w));
            b = b.join(psi(w));
        }
        if !strictly_divides(&a, &l) || !strictly_divides(&b, &l) {
            return Ok(false);
        }
    }
    Ok(true)
}

impl EkSplit {
    pub fn validate(&self) -> Result<bool> {
        validate_ek(&self.whole, &self.left, &self.right, &self.intersection, &self.map)
    }

    /// `β_{i,v}(I) = β_{i,v}(J) + β_{i,v}(K) + β_{i−1,v}(J ∩ K)` in ideal
    /// indexing, checked on every multidegree with the Tor oracle.
    pub fn betti_splitting_holds(&self, field: FieldSpec) -> Result<bool> {
        let [bi, bj, bk, bjk] = [&self.whole, &self.left, &self.right, &self.intersection].map(|x| tor_betti(x, field));
        let (bi, bj, bk, bjk) = (bi?, bj?, bk?, bjk?);
        let mut keys: Vec<(usize, &Monomial)> = Vec::new();
        for t in [&bi, &bj, &bk] {
            keys.extend(t.entries().filter(|&(r, _, _)| r >= 1).map(|(r, m, _)| (r, m)));
        }
        keys.extend(bjk.entries().filter(|&(r, _, _)| r >= 1).map(|(r, m, _)| (r + 1, m)));
        Ok(keys.into_iter().all(|(r, v)| {
            let extra = if r >= 2 { bjk.get(r - 1, v) } else { 0 };
            bi.get(r, v) == bj.get(r, v) + bk.get(r, v) + extra
        }))
    }
}

/// For each generator of `J ∩ K`, the first pair whose lcm equals it.
pub fn find_splitting_map(j: &MonomialIdeal, k: &MonomialIdeal, inter: &MonomialIdeal) -> Result<SplittingMap> {
    let mut map = SplittingMap { left: Vec::new(), right: Vec::new() };
    for w in inter.gens() {
        let (a, b) = (0..j.ngens())
            .flat_map(|a| (0..k.ngens()).map(move |b| (a, b)))
            .find(|&(a, b)| j.gen(a).join(k.gen(b)) == *w)
            .ok_or_else(|| Error::Precondition(format!("no pair of generators has lcm {w}")))?;
        map.left.push(a);
        map.right.push(b);
    }
    Ok(map)
}

struct CycleRing {
    ctx: RingContext,
    n: usize,
}

impl CycleRing {
    /// Squarefree monomial on 1-based variable indices.
    fn mono(&self, vars: &[usize]) -> Monomial {
        let mut e = vec![0u32; self.n];
        for &v in vars {
            e[v - 1] += 1;
        }
        Monomial::new(e)
    }

    fn ideal(&self, gens: Vec<Vec<usize>>) -> Result<MonomialIdeal> {
        MonomialIdeal::new(self.ctx.clone(), gens.iter().map(|g| self.mono(g)).collect())
    }

    fn index_of(ideal: &MonomialIdeal, m: &Monomial) -> usize {
        ideal.gens().iter().position(|g| g == m).expect("generator listed in the proof")
    }
}

/// `I(C_n) = J + K` with `J = (x_2x_3, …, x_{n−1}x_n)`, `K = (x_nx_1, x_1x_2)`,
/// and `J ∩ K = J′ + K′` with `J′ = x_1x_n(x_{n−1}, x_ix_{i+1} : 3 ≤ i ≤ n−3)`,
/// `K′ = x_1x_2(x_3, x_ix_{i+1} : 4 ≤ i ≤ n−2)`.
pub fn ek_split_cycle(n: usize) -> Result<CycleSplitting> {
    if n < 8 {
        return Err(Error::Precondition(format!("the nested splitting needs n ≥ 8, got {n}")));
    }
    let r = CycleRing { ctx: RingContext::new((1..=n).map(|i| format!("x{i}")))?, n };
    let whole = r.ideal((1..=n).map(|i| vec![i, i % n + 1]).collect())?;
    let j = r.ideal((2..n).map(|i| vec![i, i + 1]).collect())?;
    let k = r.ideal(vec![vec![n, 1], vec![1, 2]])?;

    // Listed generators of J ∩ K with their images under the splitting map.
    let mut listed: Vec<(Vec<usize>, Vec<usize>, Vec<usize>)> =
        vec![(vec![1, n - 1, n], vec![n - 1, n], vec![n, 1]), (vec![1, 2, 3], vec![2, 3], vec![1, 2])];
    listed.extend((3..=n - 3).map(|i| (vec![1, i, i + 1, n], vec![i, i + 1], vec![n, 1])));
    listed.extend((4..=n - 2).map(|i| (vec![1, 2, i, i + 1], vec![i, i + 1], vec![1, 2])));
    let inter = r.ideal(listed.iter().map(|(w, _, _)| w.clone()).collect())?;
    let map = SplittingMap {
        left: listed.iter().map(|(_, a, _)| CycleRing::index_of(&j, &r.mono(a))).collect(),
        right: listed.iter().map(|(_, _, b)| CycleRing::index_of(&k, &r.mono(b))).collect(),
    };
    let outer = EkSplit { whole, left: j, right: k, intersection: inter, map };

    let mut jp = vec![vec![1, n, n - 1]];
    jp.extend((3..=n - 3).map(|i| vec![1, n, i, i + 1]));
    let mut kp = vec![vec![1, 2, 3]];
    kp.extend((4..=n - 2).map(|i| vec![1, 2, i, i + 1]));
    let (jp, kp) = (r.ideal(jp)?, r.ideal(kp)?);
    let inner_inter = ideal_intersection(&jp, &kp)?;
    let inner_map = find_splitting_map(&jp, &kp, &inner_inter)?;
    let inner =
        EkSplit { whole: outer.intersection.clone(), left: jp, right: kp, intersection: inner_inter, map: inner_map };
    Ok(CycleSplitting { outer, inner })
}

/// The listed generators of `J′ ∩ K′ = x_1x_2x_n(x_3x_4, …, x_{n−2}x_{n−1}, x_3x_{n−1})`.
pub fn inner_intersection_listed(n: usize) -> Result<MonomialIdeal> {
    let r = CycleRing { ctx: RingContext::new((1..=n).map(|i| format!("x{i}")))?, n };
    let mut gens: Vec<Vec<usize>> = (3..=n - 2).map(|i| vec![1, 2, n, i, i + 1]).collect();
    gens.push(vec![1, 2, n, 3, n - 1]);
    r.ideal(gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(i: &MonomialIdeal) -> Vec<Monomial> {
        let mut v = i.gens().to_vec();
        v.sort();
        v
    }

    #[test]
    fn listed_intersection_is_the_intersection() {
        for n in 8..=11 {
            let s = ek_split_cycle(n).unwrap();
            let computed = ideal_intersection(&s.outer.left, &s.outer.right).unwrap();
            assert_eq!(sorted(&computed), sorted(&s.outer.intersection));
            assert_eq!(s.outer.intersection.ngens(), 2 * n - 8);
            assert_eq!(sorted(&s.inner.intersection), sorted(&inner_intersection_listed(n).unwrap()));
        }
    }

    #[test]
    fn both_levels_validate() {
        for n in 8..=11 {
            let s = ek_split_cycle(n).unwrap();
            assert!(s.outer.validate().unwrap(), "outer n={n}");
            assert!(s.inner.validate().unwrap(), "inner n={n}");
        }
    }

    #[test]
    fn first_listed_image() {
        let s = ek_split_cycle(8).unwrap();
        let ctx = s.outer.whole.ctx();
        assert_eq!(ctx.format(s.outer.intersection.gen(0)), "x1*x7*x8");
        assert_eq!(ctx.format(s.outer.left.gen(s.outer.map.left[0])), "x7*x8");
        assert_eq!(ctx.format(s.outer.right.gen(s.outer.map.right[0])), "x1*x8");
    }

    #[test]
    fn rejects_overlap_and_small_n() {
        let s = ek_split_cycle(8).unwrap();
        let o = &s.outer;
        assert!(matches!(
            validate_ek(&o.whole, &o.left, &o.left, &o.intersection, &o.map),
            Err(Error::Precondition(_))
        ));
        assert!(ek_split_cycle(7).is_err());
    }

    #[test]
    fn betti_splitting_small() {
        let s = ek_split_cycle(8).unwrap();
        assert!(s.outer.betti_splitting_holds(FieldSpec::default()).unwrap());
        assert!(s.inner.betti_splitting_holds(FieldSpec::default()).unwrap());
    }
}
