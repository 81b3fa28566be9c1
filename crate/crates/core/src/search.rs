//! Search over total orders of the generators for one under which the
//! bridge matching is friendly, or the bridge resolution minimal.
//!
//! Orders are visited in lexicographic permutation order (or drawn from a
//! seeded generator), evaluated in parallel batches, and merged in visiting
//! order, so exhaustive reports do not depend on the thread count.

use std::collections::HashMap;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::{GenOrder, MonomialIdeal};
use crate::linalg::FieldSpec;
use crate::matching::DenseRun;
use crate::morse::differential;
use crate::oracle::tor_betti_table;
use crate::symbols::LcmTable;

/// Default largest generator count for exhaustive search.
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 10;
/// Hard limit with the override flag (`20!` still fits in `u64`).
pub const MAX_EXHAUSTIVE: usize = 20;
/// Orders drawn in random mode when no order budget is given.
pub const DEFAULT_RANDOM_ORDERS: u64 = 10_000;
const BATCH: usize = 2048;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    #[default]
    Exhaustive,
    Random,
}

impl std::str::FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Self::Exhaustive),
            "random" => Ok(Self::Random),
            other => Err(Error::Parse(format!("unknown search mode {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Found,
    ExhaustedNone,
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchOptions {
    pub mode: SearchMode,
    pub max_orders: Option<u64>,
    pub max_seconds: Option<f64>,
    pub seed: u64,
    /// Stop after this many witnesses.
    pub witness_cap: usize,
    /// Permit exhaustive search up to [`MAX_EXHAUSTIVE`] generators.
    pub allow_large: bool,
    /// Visit one order per dihedral class (standard cycle ideals only).
    pub cycle_reduction: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            mode: SearchMode::Exhaustive,
            max_orders: None,
            max_seconds: None,
            seed: 0,
            witness_cap: 1,
            allow_large: false,
            cycle_reduction: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport {
    pub verdict: Verdict,
    /// Witness orders, each listed from largest to smallest generator.
    pub witnesses: Vec<Vec<usize>>,
    pub orders_examined: u64,
    pub elapsed_ms: u128,
    pub mode: SearchMode,
    /// Present in random mode.
    pub seed: Option<u64>,
    /// Size of the space visited in exhaustive mode.
    pub total_orders: Option<u64>,
    pub reduced: bool,
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// The `rank`-th permutation of `items` in lexicographic order.
fn unrank(mut rank: u64, items: &[usize]) -> Vec<usize> {
    let mut pool = items.to_vec();
    let mut out = Vec::with_capacity(pool.len());
    for k in (0..pool.len()).rev() {
        let f = factorial(k);
        let i = (rank / f) as usize;
        rank %= f;
        out.push(pool.remove(i));
    }
    out
}

/// Generator `i` is `x_i x_{i+1}` up to relabelling: squarefree quadrics,
/// cyclically consecutive ones share exactly one variable and the others
/// none.
pub fn is_standard_cycle(ideal: &MonomialIdeal) -> bool {
    let n = ideal.ngens();
    let support = |g: usize| -> Vec<usize> {
        ideal.gen(g).exponents().iter().enumerate().filter(|(_, &e)| e > 0).map(|(v, _)| v).collect()
    };
    let squarefree_quadric = |g: usize| {
        let e = ideal.gen(g).exponents();
        e.iter().all(|&x| x <= 1) && e.iter().sum::<u32>() == 2
    };
    if n < 3 || !(0..n).all(squarefree_quadric) {
        return false;
    }
    let supports: Vec<Vec<usize>> = (0..n).map(support).collect();
    (0..n).all(|a| {
        (0..n).filter(|&b| b != a).all(|b| {
            let shared = supports[a].iter().filter(|v| supports[b].contains(v)).count();
            let adjacent = (a + 1) % n == b || (b + 1) % n == a;
            shared == usize::from(adjacent)
        })
    })
}

/// Representatives of the orders of a standard `n`-cycle modulo its
/// dihedral symmetry: the top generator is `0` and generator `1` ranks
/// above generator `n−1`. There are `(n−1)!/2` of them for `n ≥ 3`.
pub fn cycle_symmetry_reduction(n: usize) -> Vec<GenOrder> {
    if n < 3 {
        return vec![GenOrder::identity(n)];
    }
    let rest: Vec<usize> = (1..n).collect();
    (0..factorial(n - 1))
        .filter_map(|r| reduced_order(r, &rest, n))
        .map(|p| GenOrder::new(p).expect("permutation"))
        .collect()
}

fn reduced_order(rank: u64, rest: &[usize], n: usize) -> Option<Vec<usize>> {
    let tail = unrank(rank, rest);
    let p1 = tail.iter().position(|&g| g == 1)?;
    let pn = tail.iter().position(|&g| g == n - 1)?;
    (p1 < pn).then(|| std::iter::once(0).chain(tail).collect())
}

/// The orders to try, as a lazily indexed stream of candidate batches.
enum Space {
    Lex { n: usize, total: u64 },
    Reduced { n: usize, total: u64 },
    Random { n: usize, rng: Box<ChaCha8Rng>, drawn: u64, limit: u64 },
}

impl Space {
    fn total(&self) -> Option<u64> {
        match self {
            Space::Lex { total, .. } | Space::Reduced { total, .. } => Some(*total),
            Space::Random { .. } => None,
        }
    }

    /// Next batch, starting at visiting position `start`.
    fn batch(&mut self, start: u64, len: u64) -> Vec<Vec<usize>> {
        match self {
            Space::Lex { n, total } => {
                let items: Vec<usize> = (0..*n).collect();
                let end = (start + len).min(*total);
                (start..end).map(|r| unrank(r, &items)).collect()
            }
            Space::Reduced { n, total } => {
                let rest: Vec<usize> = (1..*n).collect();
                let end = (start + len).min(*total);
                (start..end).map(|k| reduced_by_index(k, &rest, *n)).collect()
            }
            Space::Random { n, rng, drawn, limit } => {
                let take = len.min(*limit - *drawn);
                *drawn += take;
                (0..take)
                    .map(|_| {
                        let mut p: Vec<usize> = (0..*n).collect();
                        p.shuffle(rng.as_mut());
                        p
                    })
                    .collect()
            }
        }
    }
}

/// The `k`-th representative: slot pairs `i < j` for generators `1` and
/// `n−1` in lexicographic order, then the other generators in
/// lexicographic order within each slot pair.
fn reduced_by_index(k: u64, rest: &[usize], n: usize) -> Vec<usize> {
    let m = n - 1;
    let others: Vec<usize> = rest.iter().copied().filter(|&g| g != 1 && g != n - 1).collect();
    let per_slot = factorial(others.len());
    let mut slot = k / per_slot;
    let inner = k % per_slot;
    let (mut i, mut j) = (0usize, 1usize);
    'outer: for a in 0..m {
        for b in a + 1..m {
            if slot == 0 {
                (i, j) = (a, b);
                break 'outer;
            }
            slot -= 1;
        }
    }
    let mut fill = unrank(inner, &others).into_iter();
    let mut tail = vec![0usize; m];
    for (pos, t) in tail.iter_mut().enumerate() {
        *t = if pos == i {
            1
        } else if pos == j {
            n - 1
        } else {
            fill.next().expect("enough generators")
        };
    }
    std::iter::once(0).chain(tail).collect()
}

fn build_space(ideal: &MonomialIdeal, opts: &SearchOptions) -> Result<(Space, bool)> {
    let n = ideal.ngens();
    match opts.mode {
        SearchMode::Exhaustive => {
            let limit = if opts.allow_large { MAX_EXHAUSTIVE } else { DEFAULT_EXHAUSTIVE_LIMIT };
            if n > limit {
                return Err(Error::Capacity(format!(
                    "exhaustive search over {n}! orders exceeds the {limit}-generator limit"
                )));
            }
            if opts.cycle_reduction {
                if !is_standard_cycle(ideal) {
                    return Err(Error::Precondition("dihedral reduction needs a standard cycle ideal".into()));
                }
                return Ok((Space::Reduced { n, total: factorial(n - 1) / 2 }, true));
            }
            Ok((Space::Lex { n, total: factorial(n) }, false))
        }
        SearchMode::Random => {
            let limit = opts.max_orders.unwrap_or(DEFAULT_RANDOM_ORDERS);
            Ok((Space::Random { n, rng: Box::new(ChaCha8Rng::seed_from_u64(opts.seed)), drawn: 0, limit }, false))
        }
    }
}

fn run_search(
    ideal: &MonomialIdeal,
    opts: &SearchOptions,
    accept: impl Fn(&GenOrder) -> bool + Sync,
) -> Result<SearchReport> {
    let started = Instant::now();
    let (mut space, reduced) = build_space(ideal, opts)?;
    let total = space.total();
    let mut witnesses = Vec::new();
    let mut examined = 0u64;
    let order_cap = opts.max_orders.unwrap_or(u64::MAX);
    let verdict = loop {
        if witnesses.len() >= opts.witness_cap.max(1) {
            break Verdict::Found;
        }
        let room = (order_cap - examined).min(BATCH as u64);
        if room == 0 {
            break if total == Some(examined) { Verdict::ExhaustedNone } else { Verdict::BudgetExceeded };
        }
        if opts.max_seconds.is_some_and(|s| started.elapsed().as_secs_f64() > s) {
            break Verdict::BudgetExceeded;
        }
        let batch = space.batch(examined, room);
        if batch.is_empty() {
            break match space {
                Space::Random { .. } => Verdict::BudgetExceeded,
                _ => Verdict::ExhaustedNone,
            };
        }
        let hits: Vec<bool> =
            batch.par_iter().map(|p| accept(&GenOrder::new(p.clone()).expect("generated permutation"))).collect();
        for (p, hit) in batch.into_iter().zip(hits) {
            examined += 1;
            if hit {
                witnesses.push(p);
                if witnesses.len() >= opts.witness_cap.max(1) {
                    break;
                }
            }
        }
    };
    let verdict = if !witnesses.is_empty() { Verdict::Found } else { verdict };
    Ok(SearchReport {
        verdict,
        witnesses,
        orders_examined: examined,
        elapsed_ms: started.elapsed().as_millis(),
        mode: opts.mode,
        seed: (opts.mode == SearchMode::Random).then_some(opts.seed),
        total_orders: total,
        reduced,
    })
}

/// Orders under which no two bridge proposals collide.
pub fn search_friendly(ideal: &MonomialIdeal, opts: &SearchOptions) -> Result<SearchReport> {
    let t = LcmTable::new(ideal)?;
    run_search(ideal, opts, |ord| DenseRun::run(&t, ord).is_friendly())
}

/// Orders whose bridge resolution is minimal over `field`. Critical
/// counts per (cardinality, lcm) are compared with the oracle first; the
/// survivors are confirmed on the Morse differential.
pub fn search_minimal(ideal: &MonomialIdeal, opts: &SearchOptions, field: FieldSpec) -> Result<SearchReport> {
    let t = LcmTable::new(ideal)?;
    let n = t.ngens();
    let lattice = t.lattice().len();
    let id_of: HashMap<_, u32> = t.lattice().iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
    let mut expected = vec![0u32; (n + 1) * lattice];
    let mut expected_total = 0u64;
    for (r, m, c) in tor_betti_table(&t, field)?.entries() {
        expected[r * lattice + id_of[m] as usize] += c as u32;
        expected_total += c;
    }
    run_search(ideal, opts, |ord| {
        let run = DenseRun::run(&t, ord);
        let crit: Vec<usize> = (0..1usize << n).filter(|&m| run.is_critical(m)).collect();
        if crit.len() as u64 != expected_total {
            return false;
        }
        let mut got = vec![0u32; (n + 1) * lattice];
        for &m in &crit {
            got[(m.count_ones() as usize) * lattice + t.id(crate::symbols::Symbol(m as u64)) as usize] += 1;
        }
        got == expected && differential(&run.into_matching(), &t).map(|d| d.is_minimal_over(field)).unwrap_or(false)
    })
}
