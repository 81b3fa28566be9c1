use bmres::bridges::{self, classify_structural, is_potentially_type2, is_type1, sbridge};
use bmres::graph::{disjoint_sum_order, random_forest, WeightedOrientedGraph};
use bmres::ideal::random_ideal;
use bmres::matching::{
    bridge_matching, bridge_matching_eager, classify_by_run, critical_counts, critical_symbols, is_bridge_friendly,
    validate_matching, MatchingReport,
};
use bmres::morse::{betti_from_criticals, differential};
use bmres::oracle::{strand_exactness, tor_betti_table};
use bmres::rivals::{lyubeznik_matching, scarf_complex, yuzvinsky_condition};
use bmres::symbols::{incidence, symbol_lcm};
use bmres::{FieldSpec, GenOrder, LcmTable, Monomial, MonomialIdeal, RankVector, RingContext, Symbol, SymbolClass};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A random ideal with at most `max_gens` generators and a random order.
fn instance(seed: u64, max_gens: usize) -> (MonomialIdeal, LcmTable, GenOrder) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ideal = random_ideal(&mut rng, max_gens, 4, 3);
    let mut perm: Vec<usize> = (0..ideal.ngens()).collect();
    perm.shuffle(&mut rng);
    let t = LcmTable::new(&ideal).unwrap();
    (ideal, t, GenOrder::new(perm).unwrap())
}

fn monomial(nv: usize) -> impl Strategy<Value = Monomial> {
    proptest::collection::vec(0u32..5, nv).prop_map(Monomial::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lcm_laws(a in monomial(3), b in monomial(3), c in monomial(3), d in monomial(3)) {
        let ab = a.lcm(&b).unwrap();
        prop_assert_eq!(&ab, &b.lcm(&a).unwrap());
        prop_assert_eq!(ab.lcm(&c).unwrap(), a.lcm(&b.lcm(&c).unwrap()).unwrap());
        prop_assert_eq!(a.lcm(&a).unwrap(), a.clone());
        prop_assert!(a.divides(&ab).unwrap() && b.divides(&ab).unwrap());
        let common = ab.mul(&d).unwrap();
        prop_assert!(ab.divides(&common).unwrap());
    }

    #[test]
    fn minimizing_is_idempotent(raw in proptest::collection::vec(monomial(3), 1..8)) {
        prop_assume!(raw.iter().any(|m| !m.is_one()));
        let ctx = RingContext::numbered(3);
        if let Ok(once) = MonomialIdeal::minimize_generators(ctx.clone(), raw) {
            let twice = MonomialIdeal::minimize_generators(ctx, once.gens().to_vec()).unwrap();
            prop_assert_eq!(once.gens(), twice.gens());
            for i in 0..once.ngens() {
                for j in 0..once.ngens() {
                    prop_assert!(i == j || !once.gen(i).divides(once.gen(j)).unwrap());
                }
            }
        }
    }

    #[test]
    fn text_and_json_round_trips(seed in any::<u64>()) {
        let (ideal, _, ord) = instance(seed, 7);
        prop_assert_eq!(MonomialIdeal::parse_any(&ideal.to_text()).unwrap(), ideal.clone());
        let json = serde_json::to_string(&ideal.to_json()).unwrap();
        prop_assert_eq!(MonomialIdeal::parse_any(&json).unwrap(), ideal.clone());
        for s in LcmTable::new(&ideal).unwrap().all_symbols() {
            let text = s.to_string();
            prop_assert_eq!(Symbol::parse(&text, ideal.ngens()).unwrap(), s);
            let back: Symbol = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
            prop_assert_eq!(back, s);
        }
        prop_assert_eq!(GenOrder::for_ideal(&ideal, ord.perm().to_vec()).unwrap(), ord);
        let g = random_forest(&mut ChaCha8Rng::seed_from_u64(seed), 7, 3);
        prop_assert_eq!(WeightedOrientedGraph::parse_any(&g.to_text()).unwrap(), g.clone());
        let gj = serde_json::to_string(&g.to_json()).unwrap();
        prop_assert_eq!(WeightedOrientedGraph::parse_any(&gj).unwrap(), g);
    }

    #[test]
    fn taylor_structure(seed in any::<u64>()) {
        let (ideal, t, _) = instance(seed, 7);
        for s in t.all_symbols() {
            for g in s.iter() {
                let f = s.without(g);
                prop_assert!(symbol_lcm(f, &ideal).divides(&symbol_lcm(s, &ideal)).unwrap());
                // ∂∂ = 0 on the Taylor simplex.
                if s.len() >= 2 {
                    for h in f.iter() {
                        let ff = f.without(h);
                        let other = s.without(h);
                        prop_assert_eq!(
                            incidence(s, f) * incidence(f, ff) + incidence(s, other) * incidence(other, ff),
                            0
                        );
                    }
                }
            }
            // No symbol of cardinality two has a bridge.
            if s.len() == 2 {
                prop_assert!(bridges::bridges(&t, s).is_empty());
            }
        }
    }

    #[test]
    fn matching_variants_agree_and_validate(seed in any::<u64>()) {
        let (ideal, t, ord) = instance(seed, 7);
        let batched = bridge_matching(&t, &ord);
        let eager = bridge_matching_eager(&t, &ord);
        prop_assert_eq!(&batched, &eager);
        prop_assert!(validate_matching(&batched, &t).is_ok());
        prop_assert!(validate_matching(&lyubeznik_matching(&t, &ord), &t).is_ok());
        let report = MatchingReport::new(&batched, ideal.ngens());
        let back: MatchingReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
        prop_assert_eq!(back.to_matching(), batched.clone());
        for e in batched.edges() {
            prop_assert!(batched.is_matched(e.target));
        }
    }

    #[test]
    fn run_and_structural_classes_agree(seed in any::<u64>()) {
        let (ideal, t, ord) = instance(seed, 7);
        let m = bridge_matching(&t, &ord);
        let run = classify_by_run(&m, ideal.ngens());
        let friendly = is_bridge_friendly(&t, &ord);
        for s in t.all_symbols() {
            let structural = classify_structural(&t, s, &ord);
            prop_assert_eq!(structural, run[s.mask() as usize], "{}", s);
            prop_assert!(!(is_type1(&t, s, &ord) && is_potentially_type2(&t, s, &ord)));
            if friendly && structural == SymbolClass::Critical {
                prop_assert!(bridges::bridges(&t, s).is_empty());
                prop_assert!(bridges::true_gaps(&t, s, &ord).is_empty());
            }
        }
    }

    #[test]
    fn gap_bridge_duality(seed in any::<u64>()) {
        let (ideal, t, ord) = instance(seed, 7);
        for s in t.all_symbols() {
            let b = bridges::bridges(&t, s);
            for g in 0..ideal.ngens() {
                let dominates_no_bridge = b.iter().all(|x| !ord.greater(g, x));
                let lhs = bridges::is_gap(&t, g, s) && sbridge(&t, s.with(g), &ord) == Some(g);
                let rhs = bridges::is_true_gap(&t, g, s, &ord) && dominates_no_bridge;
                prop_assert_eq!(lhs, rhs, "{} {}", s, g);
            }
            if let Some(g) = sbridge(&t, s, &ord) {
                let f = s.without(g);
                prop_assert!(bridges::is_true_gap(&t, g, f, &ord));
                prop_assert!(bridges::bridges(&t, f).iter().all(|x| !ord.greater(g, x)));
            }
        }
    }

    #[test]
    fn morse_complex_is_a_resolution(seed in any::<u64>()) {
        let (_, t, ord) = instance(seed, 6);
        let field = FieldSpec::default();
        let tor = tor_betti_table(&t, field).unwrap();
        for m in [bridge_matching(&t, &ord), lyubeznik_matching(&t, &ord)] {
            let d = differential(&m, &t).unwrap();
            prop_assert!(d.check_square_zero().is_ok());
            prop_assert!(strand_exactness(&d, &t, field).unwrap().is_ok());
            let bound = betti_from_criticals(&m, &t);
            prop_assert!(bound.dominates(&tor));
            prop_assert_eq!(bound == tor, d.is_minimal_over(field));
            if d.is_minimal() {
                prop_assert_eq!(tor.pd(), d.ranks().pd());
            }
        }
    }

    #[test]
    fn rival_relations(seed in any::<u64>()) {
        let (ideal, t, ord) = instance(seed, 7);
        let n = ideal.ngens();
        let lyu = lyubeznik_matching(&t, &ord);
        let lcrit: Vec<Symbol> = critical_symbols(&lyu, n).into_iter().flatten().collect();
        for s in &lcrit {
            for g in s.iter() {
                prop_assert!(lcrit.contains(&s.without(g)));
            }
        }
        let bm = RankVector::from_counts(&critical_counts(&bridge_matching(&t, &ord), n));
        if is_bridge_friendly(&t, &ord) {
            prop_assert!(bm.dominated_by(&RankVector::from_counts(&critical_counts(&lyu, n))));
        }
        if yuzvinsky_condition(&t) {
            let crit = critical_symbols(&bridge_matching(&t, &ord), n);
            let scarf = scarf_complex(&t);
            let flat = |v: Vec<Vec<Symbol>>| { let mut f: Vec<Symbol> = v.into_iter().flatten().collect(); f.sort(); f };
            prop_assert_eq!(flat(crit), flat(scarf));
        }
    }

    #[test]
    fn disjoint_sums_multiply_criticals(a in any::<u64>(), b in any::<u64>()) {
        let (i, ti, oi) = instance(a, 4);
        let (j0, _, oj) = instance(b, 4);
        let names: Vec<String> = j0.ctx().names().iter().map(|n| format!("{n}_")).collect();
        let j = MonomialIdeal::new(RingContext::new(names).unwrap(), j0.gens().to_vec()).unwrap();
        let tj = LcmTable::new(&j).unwrap();
        prop_assume!(is_bridge_friendly(&ti, &oi) && is_bridge_friendly(&tj, &oj));
        let (sum, ord) = disjoint_sum_order(&i, &j, &oi, &oj).unwrap();
        let ts = LcmTable::new(&sum).unwrap();
        prop_assert!(is_bridge_friendly(&ts, &ord));
        let ci: Vec<Symbol> = critical_symbols(&bridge_matching(&ti, &oi), i.ngens()).into_iter().flatten().collect();
        let cj: Vec<Symbol> = critical_symbols(&bridge_matching(&tj, &oj), j.ngens()).into_iter().flatten().collect();
        let shift = i.ngens();
        let mut want: Vec<Symbol> = ci
            .iter()
            .flat_map(|x| cj.iter().map(move |y| Symbol(x.mask() | (y.mask() << shift))))
            .collect();
        want.sort();
        let mut got: Vec<Symbol> = critical_symbols(&bridge_matching(&ts, &ord), sum.ngens()).into_iter().flatten().collect();
        got.sort();
        prop_assert_eq!(got, want);
    }
}
