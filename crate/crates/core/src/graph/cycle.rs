//! Weighted oriented cycles and paths: traversal, ironing, blockends and
//! blocks, the blockend-last and k-flip orders, block-based predicates, the
//! total-Betti recursion and the path/cycle partner constructions.

use crate::betti::RankVector;
use crate::error::{Error, Result};
use crate::ideal::{GenOrder, Monomial};
use crate::symbols::Symbol;

use super::forest::forest_betti_recursion_total;
use super::{edge_ideal, sinking, WeightedOrientedGraph};

/// A cycle or path listed along a traversal: `verts[i]` and
/// `verts[i + 1]` (cyclically, for cycles) are joined by edge `gens[i]`,
/// which is also that edge's generator index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Traversal {
    pub verts: Vec<usize>,
    pub gens: Vec<usize>,
    pub closed: bool,
}

impl Traversal {
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Whether edge `i` points from `verts[i]` to `verts[i + 1]`.
    pub fn forward(&self, g: &WeightedOrientedGraph, i: usize) -> bool {
        g.edges()[self.gens[i]].0 == self.verts[i]
    }

    fn next_vert(&self, i: usize) -> usize {
        self.verts[(i + 1) % self.verts.len()]
    }
}

fn walk(g: &WeightedOrientedGraph, start: usize, first: usize, closed: bool) -> Traversal {
    let inc = g.incidence();
    let mut verts = vec![start];
    let mut gens = vec![first];
    let mut at = g.other_end(first, start);
    loop {
        let last = *gens.last().expect("nonempty");
        if closed && at == start {
            break;
        }
        verts.push(at);
        match inc[at].iter().find(|&&e| e != last) {
            Some(&e) => {
                gens.push(e);
                at = g.other_end(e, at);
            }
            None => break,
        }
    }
    Traversal { verts, gens, closed }
}

fn forward_count(g: &WeightedOrientedGraph, t: &Traversal) -> usize {
    (0..t.len()).filter(|&i| t.forward(g, i)).count()
}

/// The direction with more forward edges, ties broken towards the
/// smaller-index neighbour of vertex 0. Fails unless the underlying graph is
/// a single cycle through every vertex.
pub fn cycle_traversal(g: &WeightedOrientedGraph) -> Result<Traversal> {
    let nv = g.vertex_count();
    if nv < 3 || g.edge_count() != nv || (0..nv).any(|v| g.degree(v) != 2) {
        return Err(Error::Graph("not a cycle: need n ≥ 3 vertices, each of degree 2".into()));
    }
    let inc = g.incidence();
    let mut firsts = inc[0].clone();
    firsts.sort_by_key(|&e| g.other_end(e, 0));
    let a = walk(g, 0, firsts[0], true);
    if a.len() != nv {
        return Err(Error::Graph("not a cycle: graph is disconnected".into()));
    }
    let b = walk(g, 0, firsts[1], true);
    Ok(if forward_count(g, &b) > forward_count(g, &a) { b } else { a })
}

/// As [`cycle_traversal`] for a path, starting from an end.
pub fn path_traversal(g: &WeightedOrientedGraph) -> Result<Traversal> {
    let nv = g.vertex_count();
    let ends: Vec<usize> = (0..nv).filter(|&v| g.degree(v) == 1).collect();
    if g.edge_count() + 1 != nv || ends.len() != 2 || (0..nv).any(|v| g.degree(v) > 2) {
        return Err(Error::Graph("not a path".into()));
    }
    let inc = g.incidence();
    let a = walk(g, ends[0], inc[ends[0]][0], false);
    if a.len() != g.edge_count() {
        return Err(Error::Graph("not a path: graph is disconnected".into()));
    }
    let b = walk(g, ends[1], inc[ends[1]][0], false);
    Ok(if forward_count(g, &b) > forward_count(g, &a) { b } else { a })
}

fn traversal(g: &WeightedOrientedGraph) -> Result<Traversal> {
    cycle_traversal(g).or_else(|_| path_traversal(g)).map_err(|_| Error::Graph("not a cycle or a path".into()))
}

/// Reorient every edge along the traversal, moving weights so that each
/// generator keeps its degree. The input must already be sunk.
pub fn ironing(g: &WeightedOrientedGraph) -> Result<WeightedOrientedGraph> {
    if sinking(g) != *g {
        return Err(Error::Precondition("ironing expects a sunk graph (sink weights 1)".into()));
    }
    let t = traversal(g)?;
    let mut edges = g.edges().to_vec();
    let mut weights = g.weights().to_vec();
    for i in 0..t.len() {
        let (a, b) = (t.verts[i], t.next_vert(i));
        edges[t.gens[i]] = (a, b);
        weights[b] = if t.forward(g, i) { g.weight(b) } else { g.weight(a) };
    }
    WeightedOrientedGraph::new(g.names().to_vec(), edges, weights)
}

/// Sinking followed by ironing.
pub fn sink_and_iron(g: &WeightedOrientedGraph) -> Result<WeightedOrientedGraph> {
    ironing(&sinking(g))
}

/// All edges point along the traversal.
pub fn is_naturally_oriented_cycle(g: &WeightedOrientedGraph) -> bool {
    cycle_traversal(g).is_ok_and(|t| forward_count(g, &t) == t.len())
}

fn cycle_gens(g: &WeightedOrientedGraph, t: &Traversal) -> Result<Vec<Monomial>> {
    let ideal = edge_ideal(g)?.ideal;
    Ok(t.gens.iter().map(|&e| ideal.gen(e).clone()).collect())
}

fn blockend_flags(g: &WeightedOrientedGraph, t: &Traversal) -> Result<Vec<bool>> {
    let m = cycle_gens(g, t)?;
    let n = m.len();
    Ok((0..n).map(|i| !m[i].divides_unchecked(&m[(i + n - 1) % n].join(&m[(i + 1) % n]))).collect())
}

/// Generator indices `i` with `m_i ∤ lcm(m_{i−1}, m_{i+1})`.
pub fn blockends_cycle(g: &WeightedOrientedGraph) -> Result<Vec<usize>> {
    let t = cycle_traversal(g)?;
    let flags = blockend_flags(g, &t)?;
    let mut out: Vec<usize> = (0..t.len()).filter(|&i| flags[i]).map(|i| t.gens[i]).collect();
    out.sort_unstable();
    Ok(out)
}

pub fn is_classic(g: &WeightedOrientedGraph) -> Result<bool> {
    Ok(blockends_cycle(g)?.is_empty())
}

/// A non-classic cycle listed as `m_1, …, m_n` with `m_n` the first
/// blockend along the traversal.
#[derive(Clone, Debug)]
pub struct RotatedCycle {
    /// Generator index at each position.
    pub gens: Vec<usize>,
    pub blockend: Vec<bool>,
}

impl RotatedCycle {
    pub fn new(g: &WeightedOrientedGraph) -> Result<Self> {
        let t = cycle_traversal(g)?;
        let flags = blockend_flags(g, &t)?;
        let n = t.len();
        let s = flags.iter().position(|&b| b).ok_or_else(|| Error::Precondition("cycle is classic".into()))?;
        let idx: Vec<usize> = (1..=n).map(|q| (s + q) % n).collect();
        Ok(Self { gens: idx.iter().map(|&i| t.gens[i]).collect(), blockend: idx.iter().map(|&i| flags[i]).collect() })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// The order `m_1 > m_2 > … > m_n`.
    pub fn order(&self) -> GenOrder {
        GenOrder::new(self.gens.clone()).expect("rotation is a permutation")
    }

    /// 1-based blockend positions `b_1 < … < b_p = n`.
    pub fn blockend_positions(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&q| self.blockend[q - 1]).collect()
    }

    /// Blocks `B_k = {m_{b_{k−1}}, …, m_{b_k}}` with `b_0 = n`, listed by
    /// generator index along the cycle (a lone block repeats its end).
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let ends = self.blockend_positions();
        let mut prev = 0;
        ends.iter()
            .map(|&b| {
                let block = (prev..=b).map(|q| self.gens[(q + n - 1) % n]).collect();
                prev = b;
                block
            })
            .collect()
    }

    fn at(&self, q: isize) -> usize {
        let n = self.len() as isize;
        q.rem_euclid(n) as usize
    }

    /// Positions `q, q+1, …, q+len−1` (cyclically, so a run of four on a
    /// triangle revisits its start) have no blockend in their interior.
    fn run_in_block(&self, q: isize, len: usize) -> bool {
        (1..len - 1).all(|k| !self.blockend[self.at(q + k as isize)])
    }

    fn has(&self, sigma: Symbol, q: isize) -> bool {
        sigma.contains(self.gens[self.at(q)])
    }

    /// Position (0-based) of a generator.
    pub fn position(&self, g: usize) -> usize {
        self.gens.iter().position(|&x| x == g).expect("generator of this cycle")
    }

    pub fn is_bridge(&self, sigma: Symbol, g: usize) -> bool {
        let q = self.position(g) as isize;
        self.has(sigma, q) && self.has(sigma, q - 1) && self.has(sigma, q + 1) && self.run_in_block(q - 1, 3)
    }

    pub fn is_gap(&self, sigma: Symbol, g: usize) -> bool {
        let q = self.position(g) as isize;
        !self.has(sigma, q) && self.has(sigma, q - 1) && self.has(sigma, q + 1) && self.run_in_block(q - 1, 3)
    }

    fn far_neighbour_clear(&self, sigma: Symbol, q: isize) -> bool {
        !(self.run_in_block(q - 1, 4) && self.has(sigma, q + 2))
    }

    /// True gap for the order `m_1 > … > m_n`.
    pub fn is_true_gap(&self, sigma: Symbol, g: usize) -> bool {
        self.is_gap(sigma, g) && self.far_neighbour_clear(sigma, self.position(g) as isize)
    }

    /// True gap for the `k`-flip order.
    pub fn is_true_gap_kflip(&self, sigma: Symbol, g: usize, k: usize) -> bool {
        if !self.is_gap(sigma, g) {
            return false;
        }
        let ends = self.blockend_positions();
        let start = if k == 1 { 0 } else { ends[k - 2] } as isize;
        let q = self.position(g) as isize;
        if q == start {
            true
        } else if q == start + 1 {
            !self.has(sigma, q - 2) && self.far_neighbour_clear(sigma, q)
        } else {
            self.far_neighbour_clear(sigma, q)
        }
    }

    /// The order with the second and third elements of `B_k` swapped.
    pub fn kflip(&self, k: usize) -> Result<GenOrder> {
        let ends = self.blockend_positions();
        if k == 0 || k > ends.len() {
            return Err(Error::Precondition(format!("block index {k} out of 1..={}", ends.len())));
        }
        let start = if k == 1 { 0 } else { ends[k - 2] };
        if ends[k - 1] - start < 2 {
            return Err(Error::Precondition(format!("block {k} has fewer than 3 elements")));
        }
        let mut perm = self.gens.clone();
        perm.swap(start, start + 1);
        GenOrder::new(perm)
    }
}

/// Descending cycle order ending at a blockend.
pub fn blockend_last_order(g: &WeightedOrientedGraph) -> Result<GenOrder> {
    Ok(RotatedCycle::new(g)?.order())
}

/// Blocks of a cycle (empty when classic).
pub fn blocks_cycle(g: &WeightedOrientedGraph) -> Result<Vec<Vec<usize>>> {
    match RotatedCycle::new(g) {
        Ok(r) => Ok(r.blocks()),
        Err(Error::Precondition(_)) => Ok(Vec::new()),
        Err(e) => Err(e),
    }
}

/// The `k`-flip order of a non-classic naturally oriented cycle.
pub fn kflip_order(g: &WeightedOrientedGraph, k: usize) -> Result<GenOrder> {
    if !is_naturally_oriented_cycle(g) {
        return Err(Error::Precondition("k-flip order needs a naturally oriented cycle".into()));
    }
    RotatedCycle::new(g)?.kflip(k)
}

/// A naturally oriented cycle `y_1 → y_2 → … → y_n → y_1`.
pub fn natural_cycle(weights: Vec<u32>, prefix: &str) -> Result<WeightedOrientedGraph> {
    let n = weights.len();
    let names = (1..=n).map(|i| format!("{prefix}{i}")).collect();
    WeightedOrientedGraph::new(names, (0..n).map(|i| (i, (i + 1) % n)).collect(), weights)
}

/// A naturally oriented path `x_1 → … → x_{k}` with the given weights.
pub fn natural_path(weights: Vec<u32>, prefix: &str) -> Result<WeightedOrientedGraph> {
    let n = weights.len();
    let names = (1..=n).map(|i| format!("{prefix}{i}")).collect();
    WeightedOrientedGraph::new(names, (1..n).map(|i| (i - 1, i)).collect(), weights)
}

/// Sink, iron and rotate a non-classic cycle so that `w(y_1) ≥ 2`, i.e.
/// `m_n = y_n y_1^{w(y_1)}` is a blockend. Returns the weights along
/// `y_1..y_n`.
fn normalized_noncyclic_weights(g: &WeightedOrientedGraph) -> Result<Vec<u32>> {
    let c = sink_and_iron(g)?;
    let t = cycle_traversal(&c)?;
    let w: Vec<u32> = t.verts.iter().map(|&v| c.weight(v)).collect();
    let s = w.iter().position(|&x| x >= 2).ok_or_else(|| Error::Precondition("cycle is classic".into()))?;
    let n = w.len();
    Ok((0..n).map(|i| w[(s + i) % n]).collect())
}

/// Total Betti numbers and projective dimension of a non-classic cycle
/// from paths obtained by deleting an edge or vertices.
pub fn cycle_betti_recursion_total(g: &WeightedOrientedGraph) -> Result<(RankVector, usize)> {
    let w = normalized_noncyclic_weights(g)?;
    let n = w.len();
    let c = natural_cycle(w.clone(), "y")?;
    let (last, second) = (n - 1, 1);
    let path = c.remove_edge(last);
    let (b_p, pd_p) = forest_betti_recursion_total(&path)?;
    let tail = |removed: &[usize]| forest_betti_recursion_total(&c.remove_vertices(removed));
    let shifted_sum = |base: &RankVector, inner: &RankVector, terms: usize| {
        // Σ_{j<terms} C(terms−1, j) · β_{r−(j+1)}(inner)
        let mut acc = base.0.clone();
        for j in 0..terms {
            let c = binomial(terms - 1, j);
            for (r, b) in inner.as_slice().iter().enumerate() {
                let idx = r + j + 1;
                if acc.len() <= idx {
                    acc.resize(idx + 1, 0);
                }
                acc[idx] += c * b;
            }
        }
        RankVector::new(acc)
    };
    Ok(match (w[last] == 1, w[second] == 1) {
        // On a triangle m_1 and m_{n−1} meet, so at most one of them can
        // join m_n and the second-case count applies.
        (true, true) if n > 3 => {
            let (b, pd) = tail(&[n - 2, n - 1, 0, 1])?;
            (shifted_sum(&b_p, &b, 3), pd_p.max(3 + pd))
        }
        (true, _) => {
            let (b, pd) = tail(&[n - 2, n - 1])?;
            (shifted_sum(&b_p, &b, 2), pd_p.max(2 + pd))
        }
        (false, true) => {
            let (b, pd) = tail(&[0, 1])?;
            (shifted_sum(&b_p, &b, 2), pd_p.max(2 + pd))
        }
        (false, false) => (shifted_sum(&b_p, &b_p, 1), pd_p + 1),
    })
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// A cycle with the same total Betti numbers as the path `g` (length ≥ 3).
pub fn path_to_cycle(g: &WeightedOrientedGraph) -> Result<WeightedOrientedGraph> {
    let p = sink_and_iron(g)?;
    let t = path_traversal(&p)?;
    let n = t.len();
    if n < 3 {
        return Err(Error::Precondition("a cycle needs at least 3 edges".into()));
    }
    let mut w = vec![2u32, 2];
    w.extend(t.verts[2..n].iter().map(|&v| p.weight(v)));
    natural_cycle(w, "y")
}

/// A path with the same total Betti numbers as the cycle `g`, which must
/// have a block of two generators or at most four vertices.
pub fn cycle_to_path(g: &WeightedOrientedGraph) -> Result<WeightedOrientedGraph> {
    let c = sink_and_iron(g)?;
    let t = cycle_traversal(&c)?;
    let n = t.len();
    let flags = blockend_flags(&c, &t)?;
    let w: Vec<u32> = t.verts.iter().map(|&v| c.weight(v)).collect();
    if let Some(i) = (0..n).find(|&i| flags[i] && flags[(i + 1) % n]) {
        // m_i, m_{i+1} become m_n, m_1: start the path at their common vertex.
        let s = (i + 1) % n;
        let mut pw: Vec<u32> = (0..n).map(|k| w[(s + k) % n]).collect();
        pw.push(1);
        return natural_path(pw, "x");
    }
    if n > 4 {
        return Err(Error::Precondition("no block of two generators and more than four vertices".into()));
    }
    let ends: Vec<usize> = (0..n).filter(|&i| flags[i]).collect();
    let mut pw = vec![1u32; n + 1];
    if ends.len() == 2 {
        // n = 4 with opposite blockends.
        pw[2] = 2;
    }
    natural_path(pw, "x")
}

/// Either partner construction, chosen by the shape of `g`.
pub fn path_cycle_transfer(g: &WeightedOrientedGraph) -> Result<WeightedOrientedGraph> {
    if cycle_traversal(g).is_ok() {
        cycle_to_path(g)
    } else {
        path_to_cycle(g)
    }
}

/// `(y_1y_2, …, y_{n−1}y_n, y_ny_1²)`: for `n ≥ 5` no path has its Betti
/// numbers (for `n = 4` the plain 4-edge path does).
pub fn no_path_partner_cycle(n: usize) -> Result<WeightedOrientedGraph> {
    if n < 5 {
        return Err(Error::Precondition("cycles without a path partner start at length 5".into()));
    }
    let mut w = vec![1u32; n];
    w[0] = 2;
    natural_cycle(w, "y")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::FieldSpec;
    use crate::oracle::tor_betti;

    fn totals(g: &WeightedOrientedGraph) -> RankVector {
        tor_betti(&edge_ideal(g).unwrap().ideal, FieldSpec::default()).unwrap().totals()
    }

    #[test]
    fn c3_blockends() {
        // x → y (w 3), y → z, z → w, w → x (w 2)
        let g = WeightedOrientedGraph::parse_text("edge x y\nedge y z\nedge z w\nedge w x\nweight y 3\nweight x 2\n")
            .unwrap();
        assert_eq!(blockends_cycle(&g).unwrap(), vec![0, 3]);
        let blocks = blocks_cycle(&g).unwrap();
        assert_eq!(blocks.len(), 2);
        assert!(blocks.contains(&vec![3, 0]));
        assert!(blocks.contains(&vec![0, 1, 2, 3]));
    }

    #[test]
    fn natural_blockend_rule() {
        let g = natural_cycle(vec![1, 3, 1, 2, 1], "x").unwrap();
        // m_i = x_i x_{i+1}^{w}: blockend iff the head is heavy.
        assert_eq!(blockends_cycle(&g).unwrap(), vec![0, 2]);
        assert!(is_classic(&natural_cycle(vec![1; 5], "x").unwrap()).unwrap());
    }

    #[test]
    fn ironing_natural_is_identity() {
        let g = natural_cycle(vec![2, 1, 3, 1], "x").unwrap();
        assert_eq!(ironing(&g).unwrap(), g);
        let p = natural_path(vec![1, 2, 1], "x").unwrap();
        assert_eq!(ironing(&p).unwrap(), p);
        let unsunk = WeightedOrientedGraph::parse_text("edge a b\nedge c b\nweight b 2\n").unwrap();
        assert!(ironing(&unsunk).is_err());
    }

    #[test]
    fn kflip_swaps_inside_block() {
        let g = natural_cycle(vec![2, 1, 1, 1, 1], "x").unwrap();
        let r = RotatedCycle::new(&g).unwrap();
        assert_eq!(r.order().perm(), &[0, 1, 2, 3, 4]);
        assert_eq!(kflip_order(&g, 1).unwrap().perm(), &[1, 0, 2, 3, 4]);
        let two = natural_cycle(vec![2, 2, 1, 1], "x").unwrap();
        // Rotated as m_2, m_3, m_4, m_1: blocks {m_1..m_4} and {m_4, m_1}.
        assert!(kflip_order(&two, 1).is_ok());
        assert!(kflip_order(&two, 2).is_err());
    }

    #[test]
    fn partner_examples() {
        let p = natural_path(vec![1; 5], "x").unwrap();
        let c = path_to_cycle(&p).unwrap();
        assert_eq!(c.weights(), &[2, 2, 1, 1]);
        assert_eq!(totals(&p), totals(&c));
        let tri = natural_cycle(vec![1, 3, 1], "y").unwrap();
        let q = cycle_to_path(&tri).unwrap();
        assert_eq!(q.weights(), &[1, 1, 1, 1]);
        assert_eq!(totals(&tri), totals(&q));
    }

    #[test]
    fn recursion_small() {
        let g = natural_cycle(vec![2, 1, 1, 1, 1, 1], "x").unwrap();
        let want = tor_betti(&edge_ideal(&g).unwrap().ideal, FieldSpec::default()).unwrap();
        assert_eq!(cycle_betti_recursion_total(&g).unwrap(), (want.totals(), want.pd()));
        assert!(cycle_betti_recursion_total(&natural_cycle(vec![1; 4], "x").unwrap()).is_err());
    }
}
