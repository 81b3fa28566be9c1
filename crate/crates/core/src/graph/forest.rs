//! Weighted oriented forests: natural orientation, the canonical generator
//! order, blocks and blockends, block-based bridge/gap/true-gap predicates
//! and the recursive Betti formulas.

use std::collections::{BTreeSet, VecDeque};

use crate::betti::{GradedBettiTable, RankVector};
use crate::error::{Error, Result};
use crate::ideal::{GenOrder, Monomial};
use crate::matching::bridge_matching;
use crate::morse::betti_from_criticals;
use crate::symbols::{LcmTable, Symbol};

use super::{edge_ideal, WeightedOrientedGraph};

/// Underlying forest structure plus the edge ideal's generators.
#[derive(Clone, Debug)]
pub struct ForestView {
    graph: WeightedOrientedGraph,
    inc: Vec<Vec<usize>>,
    /// Undirected BFS parent (vertex) and depth, from one root per component.
    up: Vec<Option<usize>>,
    depth: Vec<usize>,
    component: Vec<usize>,
    gens: Vec<Monomial>,
}

impl ForestView {
    /// Fails if the underlying graph has a cycle.
    pub fn new(g: &WeightedOrientedGraph) -> Result<Self> {
        let nv = g.vertex_count();
        let inc = g.incidence();
        let roots = natural_roots(g);
        let mut up = vec![None; nv];
        let mut depth = vec![usize::MAX; nv];
        let mut component = vec![usize::MAX; nv];
        let mut comp = 0;
        // Natural roots first so depths are vertex ranks when they exist.
        let starts: Vec<usize> = roots.iter().copied().chain(0..nv).collect();
        let mut seen_edges = 0usize;
        for s in starts {
            if depth[s] != usize::MAX {
                continue;
            }
            depth[s] = 0;
            component[s] = comp;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &e in &inc[u] {
                    let v = g.other_end(e, u);
                    if Some(v) == up[u] {
                        continue;
                    }
                    if depth[v] != usize::MAX {
                        return Err(Error::Graph("underlying graph has a cycle".into()));
                    }
                    seen_edges += 1;
                    depth[v] = depth[u] + 1;
                    up[v] = Some(u);
                    component[v] = comp;
                    queue.push_back(v);
                }
            }
            comp += 1;
        }
        debug_assert_eq!(seen_edges, g.edge_count());
        let gens = if g.edge_count() == 0 { Vec::new() } else { edge_ideal(g)?.ideal.gens().to_vec() };
        Ok(Self { graph: g.clone(), inc, up, depth, component, gens })
    }

    pub fn graph(&self) -> &WeightedOrientedGraph {
        &self.graph
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Edges on the tree path between two vertices, or `None` across
    /// components.
    fn vertex_path_edges(&self, mut a: usize, mut b: usize) -> Option<Vec<usize>> {
        if self.component[a] != self.component[b] {
            return None;
        }
        let mut left = Vec::new();
        let mut right = Vec::new();
        while self.depth[a] > self.depth[b] {
            left.push(self.edge_between(a, self.up[a]?));
            a = self.up[a]?;
        }
        while self.depth[b] > self.depth[a] {
            right.push(self.edge_between(b, self.up[b]?));
            b = self.up[b]?;
        }
        while a != b {
            left.push(self.edge_between(a, self.up[a]?));
            right.push(self.edge_between(b, self.up[b]?));
            a = self.up[a]?;
            b = self.up[b]?;
        }
        right.reverse();
        left.extend(right);
        Some(left)
    }

    fn edge_between(&self, a: usize, b: usize) -> usize {
        *self.inc[a].iter().find(|&&e| self.graph.other_end(e, a) == b).expect("adjacent vertices")
    }

    /// The edges of the smallest subtree containing `edges`, listed along
    /// a path, or `None` if that subtree is not a path.
    pub fn spanning_path(&self, edges: &[usize]) -> Option<Vec<usize>> {
        let mut set: BTreeSet<usize> = edges.iter().copied().collect();
        let ends: Vec<usize> = edges
            .iter()
            .flat_map(|&e| {
                let (a, b) = self.graph.edges()[e];
                [a, b]
            })
            .collect();
        for (i, &a) in ends.iter().enumerate() {
            for &b in &ends[i + 1..] {
                set.extend(self.vertex_path_edges(a, b)?);
            }
        }
        order_as_path(&self.graph, &set)
    }

    /// Interior generators divide the lcm of their neighbours.
    pub fn is_potential_block(&self, path: &[usize]) -> bool {
        path.windows(3).all(|w| self.gens[w[1]].divides_unchecked(&self.gens[w[0]].join(&self.gens[w[2]])))
    }

    /// Some block contains every listed generator.
    pub fn in_same_block(&self, edges: &[usize]) -> bool {
        match edges {
            [] | [_] => true,
            _ => self.spanning_path(edges).is_some_and(|p| self.is_potential_block(&p)),
        }
    }

    /// Maximal potential blocks found by searching all edge pairs; an
    /// isolated edge forms its own block. Each block is listed along its
    /// path starting from its smaller end.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let m = self.edge_count();
        let mut cands: Vec<Vec<usize>> = Vec::new();
        for e in 0..m {
            let (a, b) = self.graph.edges()[e];
            if self.inc[a].len() == 1 && self.inc[b].len() == 1 {
                cands.push(vec![e]);
            }
            for f in e + 1..m {
                if let Some(p) = self.spanning_path(&[e, f]) {
                    if (p[0] == e || p[0] == f)
                        && (p[p.len() - 1] == e || p[p.len() - 1] == f)
                        && self.is_potential_block(&p)
                    {
                        cands.push(p);
                    }
                }
            }
        }
        let sets: Vec<BTreeSet<usize>> = cands.iter().map(|p| p.iter().copied().collect()).collect();
        let mut out: Vec<Vec<usize>> = cands
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                !sets.iter().enumerate().any(|(j, s)| j != *i && s.len() > sets[*i].len() && sets[*i].is_subset(s))
            })
            .map(|(_, p)| {
                let mut p = p.clone();
                if p[0] > p[p.len() - 1] {
                    p.reverse();
                }
                p
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Ends of the blocks from [`ForestView::blocks`].
    pub fn blockends_by_search(&self) -> Vec<usize> {
        let ends: BTreeSet<usize> = self.blocks().iter().flat_map(|p| [p[0], p[p.len() - 1]]).collect();
        ends.into_iter().collect()
    }

    /// `m_xz` is a bridge of `σ` iff `m_xy, m_xz, m_zw ∈ σ` lie in one block.
    pub fn is_bridge(&self, sigma: Symbol, e: usize) -> bool {
        sigma.contains(e) && self.flank_pairs(sigma, e).next().is_some()
    }

    /// `m_xz ∉ σ` with `m_xy, m_zw ∈ σ` in one block with it.
    pub fn is_gap(&self, sigma: Symbol, e: usize) -> bool {
        !sigma.contains(e) && self.flank_pairs(sigma, e).next().is_some()
    }

    /// The block form of the true-gap condition; `ord` must be the
    /// natural order.
    pub fn is_true_gap(&self, sigma: Symbol, e: usize, ord: &GenOrder) -> bool {
        if !self.is_gap(sigma, e) {
            return false;
        }
        let (x, z) = self.graph.edges()[e];
        let in_sigma_at = |v: usize, skip: &[usize]| -> Vec<usize> {
            self.inc[v].iter().copied().filter(|f| sigma.contains(*f) && !skip.contains(f)).collect()
        };
        for (xy, zw) in self.flank_pairs(sigma, e) {
            let y = self.graph.other_end(xy, x);
            let w = self.graph.other_end(zw, z);
            let lonely_w = !in_sigma_at(w, &[zw]).iter().any(|&ww| self.in_same_block(&[xy, e, zw, ww]));
            let covered_w = in_sigma_at(z, &[zw])
                .iter()
                .any(|&zz| in_sigma_at(w, &[zw]).iter().any(|&ww| self.in_same_block(&[zz, ww, zw])));
            if !(lonely_w || covered_w) {
                return false;
            }
            if ord.greater(e, xy) {
                let lonely_y = !in_sigma_at(y, &[xy]).iter().any(|&yy| self.in_same_block(&[yy, xy, e, zw]));
                let covered_y = in_sigma_at(x, &[xy])
                    .iter()
                    .any(|&xx| in_sigma_at(y, &[xy]).iter().any(|&yy| self.in_same_block(&[xx, yy, xy])));
                if !(lonely_y || covered_y) {
                    return false;
                }
            }
        }
        true
    }

    /// Pairs `(xy, zw)` of members of `σ` flanking edge `e = (x, z)` within
    /// one block.
    fn flank_pairs(&self, sigma: Symbol, e: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (x, z) = self.graph.edges()[e];
        let xs: Vec<usize> = self.inc[x].iter().copied().filter(|&f| f != e && sigma.contains(f)).collect();
        let zs: Vec<usize> = self.inc[z].iter().copied().filter(|&f| f != e && sigma.contains(f)).collect();
        xs.into_iter()
            .flat_map(move |a| zs.clone().into_iter().map(move |b| (a, b)))
            .filter(move |&(a, b)| self.in_same_block(&[a, e, b]))
    }
}

/// Sources of a naturally oriented forest (in-degree 0, at least one edge);
/// empty if some vertex has in-degree above 1.
fn natural_roots(g: &WeightedOrientedGraph) -> Vec<usize> {
    let mut indeg = vec![0usize; g.vertex_count()];
    for &(_, b) in g.edges() {
        indeg[b] += 1;
    }
    if indeg.iter().any(|&d| d > 1) {
        return Vec::new();
    }
    (0..g.vertex_count()).filter(|&v| indeg[v] == 0 && g.degree(v) > 0).collect()
}

/// List an edge set along a simple path if it forms one.
fn order_as_path(g: &WeightedOrientedGraph, set: &BTreeSet<usize>) -> Option<Vec<usize>> {
    let mut deg = std::collections::HashMap::<usize, usize>::new();
    for &e in set {
        let (a, b) = g.edges()[e];
        *deg.entry(a).or_default() += 1;
        *deg.entry(b).or_default() += 1;
    }
    if deg.values().any(|&d| d > 2) {
        return None;
    }
    let start = *deg.iter().filter(|(_, &d)| d == 1).map(|(v, _)| v).min()?;
    let mut path = Vec::with_capacity(set.len());
    let mut used = BTreeSet::new();
    let mut at = start;
    while let Some(&e) = set.iter().find(|&&e| !used.contains(&e) && (g.edges()[e].0 == at || g.edges()[e].1 == at)) {
        used.insert(e);
        path.push(e);
        at = g.other_end(e, at);
    }
    (path.len() == set.len()).then_some(path)
}

/// Every vertex has in-degree at most one and the underlying graph is a
/// forest.
pub fn is_naturally_oriented_forest(g: &WeightedOrientedGraph) -> bool {
    ForestView::new(g).is_ok()
        && g.edges()
            .iter()
            .fold(vec![0usize; g.vertex_count()], |mut d, &(_, b)| {
                d[b] += 1;
                d
            })
            .iter()
            .all(|&d| d <= 1)
}

fn require_natural(g: &WeightedOrientedGraph) -> Result<ForestView> {
    let view = ForestView::new(g)?;
    if !is_naturally_oriented_forest(g) {
        return Err(Error::Graph("forest is not naturally oriented (some vertex has two parents)".into()));
    }
    Ok(view)
}

/// Generators sorted by (rank of upper end, label of upper end, label of
/// lower end), where rank is the distance to the root.
pub fn natural_forest_order(g: &WeightedOrientedGraph) -> Result<GenOrder> {
    let view = require_natural(g)?;
    let mut perm: Vec<usize> = (0..g.edge_count()).collect();
    perm.sort_by_key(|&e| {
        let (a, b) = g.edges()[e];
        (view.depth[a], a, b)
    });
    GenOrder::new(perm)
}

/// Blockends by the leaf-or-heavy-target rule: `(x, y)` is a blockend iff
/// `x` or `y` is a leaf or `w(y) ≥ 2`.
pub fn blockends_forest(g: &WeightedOrientedGraph) -> Result<Vec<usize>> {
    require_natural(g)?;
    Ok((0..g.edge_count())
        .filter(|&e| {
            let (a, b) = g.edges()[e];
            g.degree(a) == 1 || g.degree(b) == 1 || g.weight(b) >= 2
        })
        .collect())
}

/// The peeling step: a vertex `v1` of maximal rank in its tree, its
/// parent `v`, and `v`'s neighbours (children first, parent last if any).
struct Peel {
    v: usize,
    v1: usize,
    children: Vec<usize>,
    parent: Option<usize>,
}

impl Peel {
    fn simple_center(&self, g: &WeightedOrientedGraph) -> bool {
        self.parent.is_none() || g.weight(self.v) == 1
    }

    /// Neighbours of `v`, counting `v1`.
    fn neighbours(&self) -> usize {
        1 + self.children.len() + usize::from(self.parent.is_some())
    }
}

fn peel_candidates(g: &WeightedOrientedGraph) -> Vec<Peel> {
    let view = ForestView::new(g).expect("validated forest");
    let parent_of = |u: usize| g.edges().iter().find(|&&(_, b)| b == u).map(|&(a, _)| a);
    let mut maxdepth = std::collections::HashMap::<usize, usize>::new();
    for u in 0..g.vertex_count() {
        if g.degree(u) > 0 {
            let c = view.component[u];
            let d = maxdepth.entry(c).or_default();
            *d = (*d).max(view.depth[u]);
        }
    }
    (0..g.vertex_count())
        .filter(|&u| view.depth[u] > 0 && maxdepth.get(&view.component[u]) == Some(&view.depth[u]))
        .map(|v1| {
            let v = parent_of(v1).expect("non-root vertex has a parent");
            let parent = parent_of(v);
            let children = g.edges().iter().filter(|&&(a, _)| a == v).map(|&(_, b)| b).filter(|&c| c != v1).collect();
            Peel { v, v1, children, parent }
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

fn shift(v: &RankVector, k: usize) -> RankVector {
    let mut out = vec![0u64; k];
    out.extend_from_slice(v.as_slice());
    RankVector::new(out)
}

fn add(a: &RankVector, b: &RankVector) -> RankVector {
    let n = a.as_slice().len().max(b.as_slice().len());
    RankVector::new((0..n).map(|i| a.get(i) + b.get(i)).collect())
}

/// Total Betti numbers and projective dimension of `R/I(T)` by peeling
/// deepest leaves.
pub fn forest_betti_recursion_total(g: &WeightedOrientedGraph) -> Result<(RankVector, usize)> {
    require_natural(g)?;
    Ok(total_rec(g))
}

fn total_rec(g: &WeightedOrientedGraph) -> (RankVector, usize) {
    if g.edge_count() == 0 {
        return (RankVector::new(vec![1]), 0);
    }
    let p = peel_candidates(g).into_iter().next().expect("a forest with edges has a deepest vertex");
    let (t1, pd1) = total_rec(&g.remove_vertices(&[p.v1]));
    if p.simple_center(g) {
        let mut removed = vec![p.v, p.v1];
        removed.extend(&p.children);
        removed.extend(p.parent);
        let (t2, pd2) = total_rec(&g.remove_vertices(&removed));
        let n = p.neighbours();
        let mut acc = t1;
        for j in 0..n {
            let c = binomial(n - 1, j);
            let scaled = RankVector::new(t2.as_slice().iter().map(|b| b * c).collect());
            acc = add(&acc, &shift(&scaled, j + 1));
        }
        (acc, pd1.max(n + pd2))
    } else {
        (add(&t1, &shift(&t1, 1)), pd1 + 1)
    }
}

/// Multigraded Betti table of `R/I(T)` via the recursion for a simple
/// peeled centre. Sub-forests whose centre is heavy are delegated to the
/// bridge resolution; the top-level step must satisfy the hypothesis.
pub fn forest_betti_recursion_graded(g: &WeightedOrientedGraph) -> Result<GradedBettiTable> {
    require_natural(g)?;
    if g.edge_count() > 0 && !peel_candidates(g).iter().any(|p| p.simple_center(g)) {
        return Err(Error::Precondition("every deepest leaf hangs below a vertex of weight ≥ 2".into()));
    }
    graded_rec(g)
}

fn unit_table(nv: usize) -> GradedBettiTable {
    let mut t = GradedBettiTable::new();
    t.add(0, Monomial::one(nv), 1);
    t
}

/// Betti table read off the bridge resolution for the natural order,
/// which is minimal on naturally oriented forests.
pub fn forest_engine_betti(g: &WeightedOrientedGraph) -> Result<GradedBettiTable> {
    if g.edge_count() == 0 {
        return Ok(unit_table(g.vertex_count()));
    }
    let ideal = edge_ideal(g)?.ideal;
    let t = LcmTable::new(&ideal)?;
    Ok(betti_from_criticals(&bridge_matching(&t, &natural_forest_order(g)?), &t))
}

fn graded_rec(g: &WeightedOrientedGraph) -> Result<GradedBettiTable> {
    let nv = g.vertex_count();
    if g.edge_count() == 0 {
        return Ok(unit_table(nv));
    }
    let Some(p) = peel_candidates(g).into_iter().find(|p| p.simple_center(g)) else {
        return forest_engine_betti(g);
    };
    let mut table = graded_rec(&g.remove_vertices(&[p.v1]))?;
    let mut removed = vec![p.v, p.v1];
    removed.extend(&p.children);
    removed.extend(p.parent);
    let t2 = graded_rec(&g.remove_vertices(&removed))?;
    // σ ⊇ {m_{v v1}} plus any subset S of the remaining edges at v.
    let mut base = vec![0u32; nv];
    base[p.v] = 1;
    base[p.v1] = g.weight(p.v1);
    let mut others: Vec<(usize, u32)> = p.children.iter().map(|&c| (c, g.weight(c))).collect();
    others.extend(p.parent.map(|u| (u, 1)));
    for mask in 0u32..1 << others.len() {
        let mut shift_exp = base.clone();
        let mut size = 1;
        for (k, &(u, e)) in others.iter().enumerate() {
            if mask >> k & 1 == 1 {
                shift_exp[u] = e;
                size += 1;
            }
        }
        let delta = Monomial::new(shift_exp);
        for (i, m, c) in t2.entries() {
            table.add(i + size, m.mul(&delta)?, c);
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::FieldSpec;
    use crate::oracle::tor_betti;

    /// x0 → a (w 2), x0 → b (w 3), a → c, a → d, c → e.
    pub(crate) fn example_tree() -> WeightedOrientedGraph {
        WeightedOrientedGraph::parse_text(
            "vertex x0 a b c d e\nedge x0 a\nedge x0 b\nedge a c\nedge a d\nedge c e\nweight a 2\nweight b 3\n",
        )
        .unwrap()
    }

    #[test]
    fn example_tree_generators_and_order() {
        let g = example_tree();
        let e = edge_ideal(&g).unwrap();
        assert_eq!(e.ideal.format_gen(0), "x0*a^2");
        assert_eq!(e.ideal.format_gen(1), "x0*b^3");
        assert_eq!(natural_forest_order(&g).unwrap().perm(), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn example_tree_blocks() {
        let g = example_tree();
        let v = ForestView::new(&g).unwrap();
        let blocks = v.blocks();
        let as_sets: BTreeSet<BTreeSet<usize>> = blocks.iter().map(|b| b.iter().copied().collect()).collect();
        let want: BTreeSet<BTreeSet<usize>> = [vec![0, 1], vec![0, 3], vec![0, 2, 4], vec![3, 2, 4]]
            .into_iter()
            .map(|b| b.into_iter().collect())
            .collect();
        assert_eq!(as_sets, want);
        assert!(v.is_potential_block(&[3, 2]));
        assert_eq!(blockends_forest(&g).unwrap(), v.blockends_by_search());
        assert_eq!(blockends_forest(&g).unwrap(), vec![0, 1, 3, 4]);
    }

    #[test]
    fn single_edge() {
        let g = WeightedOrientedGraph::parse_text("edge a b\n").unwrap();
        assert_eq!(natural_forest_order(&g).unwrap().perm(), &[0]);
        assert_eq!(blockends_forest(&g).unwrap(), vec![0]);
        assert_eq!(ForestView::new(&g).unwrap().blocks(), vec![vec![0]]);
        let (tot, pd) = forest_betti_recursion_total(&g).unwrap();
        assert_eq!((tot, pd), (RankVector::new(vec![1, 1]), 1));
    }

    #[test]
    fn path_of_length_three() {
        let g = WeightedOrientedGraph::parse_text("edge a b\nedge b c\nedge c d\n").unwrap();
        let want = tor_betti(&edge_ideal(&g).unwrap().ideal, FieldSpec::default()).unwrap();
        assert_eq!(want.totals(), [1, 3, 2]);
        assert_eq!(forest_betti_recursion_graded(&g).unwrap(), want);
        assert_eq!(forest_betti_recursion_total(&g).unwrap(), (want.totals(), 2));
    }

    #[test]
    fn rejects_non_forests() {
        let cyc = WeightedOrientedGraph::parse_text("edge a b\nedge b c\nedge c a\n").unwrap();
        assert!(matches!(natural_forest_order(&cyc), Err(Error::Graph(_))));
        let two_parents = WeightedOrientedGraph::parse_text("edge a b\nedge c b\n").unwrap();
        assert!(matches!(natural_forest_order(&two_parents), Err(Error::Graph(_))));
    }

    #[test]
    fn heavy_centre_refuses_graded() {
        let g = WeightedOrientedGraph::parse_text("edge r v\nedge v l\nweight v 2\n").unwrap();
        assert!(matches!(forest_betti_recursion_graded(&g), Err(Error::Precondition(_))));
        let want = tor_betti(&edge_ideal(&g).unwrap().ideal, FieldSpec::default()).unwrap();
        assert_eq!(forest_betti_recursion_total(&g).unwrap(), (want.totals(), want.pd()));
    }
}
