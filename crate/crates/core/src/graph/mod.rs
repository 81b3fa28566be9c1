//! Weighted oriented graphs and their edge ideals.
//!
//! An oriented edge `(x, y)` contributes the generator `x·y^{w(y)}`; the
//! generator index of an edge is its position in the edge list.

pub mod cycle;
pub mod ek;
pub mod forest;

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideal::{GenOrder, Monomial, MonomialIdeal, RingContext};

/// Vertices, oriented edges `(source, target)` and positive vertex weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedOrientedGraph {
    names: Vec<String>,
    edges: Vec<(usize, usize)>,
    weights: Vec<u32>,
}

/// JSON form: vertex names, edges as name pairs, and non-default weights.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    #[serde(default)]
    pub weights: BTreeMap<String, u32>,
}

impl WeightedOrientedGraph {
    /// Validates simplicity (no loops, no repeated edge in either
    /// orientation) and positive weights.
    pub fn new(names: Vec<String>, edges: Vec<(usize, usize)>, weights: Vec<u32>) -> Result<Self> {
        let nv = names.len();
        if weights.len() != nv {
            return Err(Error::Graph(format!("{} weights for {nv} vertices", weights.len())));
        }
        if let Some(v) = weights.iter().position(|&w| w == 0) {
            return Err(Error::Graph(format!("vertex {} has weight 0", names[v])));
        }
        let mut seen = std::collections::HashSet::new();
        for &(a, b) in &edges {
            if a >= nv || b >= nv {
                return Err(Error::Graph(format!("edge ({a},{b}) refers to a missing vertex")));
            }
            if a == b {
                return Err(Error::Graph(format!("loop at {}", names[a])));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::Graph(format!("repeated edge between {} and {}", names[a], names[b])));
            }
        }
        let mut uniq = std::collections::HashSet::new();
        for n in &names {
            if !uniq.insert(n) {
                return Err(Error::Graph(format!("duplicate vertex name {n}")));
            }
        }
        Ok(Self { names, edges, weights })
    }

    /// Vertices named `x0, x1, …`.
    pub fn numbered(nv: usize, edges: Vec<(usize, usize)>, weights: Vec<u32>) -> Result<Self> {
        Self::new((0..nv).map(|i| format!("x{i}")).collect(), edges, weights)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> u32 {
        self.weights[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Edge indices incident to each vertex.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertex_count()];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            inc[a].push(e);
            inc[b].push(e);
        }
        inc
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// At least one incident edge, every incident edge pointing inwards.
    pub fn is_sink(&self, v: usize) -> bool {
        let mut any = false;
        for &(a, b) in &self.edges {
            if a == v {
                return false;
            }
            any |= b == v;
        }
        any
    }

    pub fn with_weights(&self, weights: Vec<u32>) -> Result<Self> {
        Self::new(self.names.clone(), self.edges.clone(), weights)
    }

    /// Drop the given vertices' incident edges. Vertices stay (isolated) so
    /// the ambient ring is unchanged.
    pub fn remove_vertices(&self, removed: &[usize]) -> Self {
        let edges =
            self.edges.iter().copied().filter(|&(a, b)| !removed.contains(&a) && !removed.contains(&b)).collect();
        Self { names: self.names.clone(), edges, weights: self.weights.clone() }
    }

    pub fn remove_edge(&self, e: usize) -> Self {
        let mut edges = self.edges.clone();
        edges.remove(e);
        Self { names: self.names.clone(), edges, weights: self.weights.clone() }
    }

    /// Text format: `vertex a b c`, `edge a b` or `edge a -> b` (both
    /// oriented `a → b`), `weight b 3`; `#` comments. Vertices mentioned
    /// only in edges are declared implicitly.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut weights: Vec<(usize, u32)> = Vec::new();
        let mut intern = |name: &str, names: &mut Vec<String>| -> usize {
            *index.entry(name.to_string()).or_insert_with(|| {
                names.push(name.to_string());
                names.len() - 1
            })
        };
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Parse(format!("line {}: cannot read `{line}`", lineno + 1));
            match toks[0] {
                "vertex" | "vertices" => {
                    for t in &toks[1..] {
                        intern(t, &mut names);
                    }
                }
                "edge" => {
                    let (a, b) = match toks.len() {
                        3 => (toks[1], toks[2]),
                        4 if toks[2] == "->" => (toks[1], toks[3]),
                        _ => return Err(bad()),
                    };
                    let a = intern(a, &mut names);
                    let b = intern(b, &mut names);
                    edges.push((a, b));
                }
                "weight" => {
                    if toks.len() != 3 {
                        return Err(bad());
                    }
                    let v = intern(toks[1], &mut names);
                    let w: u32 = toks[2].parse().map_err(|_| bad())?;
                    weights.push((v, w));
                }
                _ => return Err(bad()),
            }
        }
        let mut w = vec![1u32; names.len()];
        for (v, x) in weights {
            w[v] = x;
        }
        Self::new(names, edges, w)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("vertex {}\n", self.names.join(" "));
        for &(a, b) in &self.edges {
            out.push_str(&format!("edge {} -> {}\n", self.names[a], self.names[b]));
        }
        for (v, &w) in self.weights.iter().enumerate() {
            if w != 1 {
                out.push_str(&format!("weight {} {w}\n", self.names[v]));
            }
        }
        out
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.names.clone(),
            edges: self.edges.iter().map(|&(a, b)| (self.names[a].clone(), self.names[b].clone())).collect(),
            weights: self
                .weights
                .iter()
                .enumerate()
                .filter(|(_, &w)| w != 1)
                .map(|(v, &w)| (self.names[v].clone(), w))
                .collect(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self> {
        let index: HashMap<&str, usize> = json.vertices.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let look = |n: &str| index.get(n).copied().ok_or_else(|| Error::Graph(format!("unknown vertex {n}")));
        let edges = json.edges.iter().map(|(a, b)| Ok((look(a)?, look(b)?))).collect::<Result<Vec<_>>>()?;
        let mut weights = vec![1u32; json.vertices.len()];
        for (n, &w) in &json.weights {
            weights[look(n)?] = w;
        }
        Self::new(json.vertices.clone(), edges, weights)
    }

    /// JSON if the text starts with `{`, the line format otherwise.
    pub fn parse_any(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            let json: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
            Self::from_json(&json)
        } else {
            Self::parse_text(text)
        }
    }
}

/// The edge ideal with generator `i` belonging to edge `i`.
#[derive(Clone, Debug)]
pub struct EdgeIdealMap {
    pub ideal: MonomialIdeal,
    /// `(source, target)` of each generator's edge.
    pub edge_of_gen: Vec<(usize, usize)>,
}

/// `I(D) = (x·y^{w(y)} : (x, y) ∈ E)` over the vertex variables.
pub fn edge_ideal(d: &WeightedOrientedGraph) -> Result<EdgeIdealMap> {
    edge_ideal_with_exponents(d, None)
}

/// As [`edge_ideal`], but an exponent pair `(p, q)` per edge, when given,
/// yields `x^p·y^q` instead of the weight rule.
pub fn edge_ideal_with_exponents(d: &WeightedOrientedGraph, exps: Option<&[(u32, u32)]>) -> Result<EdgeIdealMap> {
    if d.edges.is_empty() {
        return Err(Error::Graph("graph has no edges".into()));
    }
    if let Some(x) = exps {
        if x.len() != d.edges.len() {
            return Err(Error::Graph(format!("{} exponent pairs for {} edges", x.len(), d.edges.len())));
        }
        if x.iter().any(|&(p, q)| p == 0 || q == 0) {
            return Err(Error::Graph("exponent pairs must be positive".into()));
        }
    }
    let ctx = RingContext::new(d.names.iter().cloned())?;
    let nv = d.vertex_count();
    let gens = d
        .edges
        .iter()
        .enumerate()
        .map(|(e, &(a, b))| {
            let (p, q) = exps.map_or((1, d.weights[b]), |x| x[e]);
            let mut v = vec![0u32; nv];
            v[a] = p;
            v[b] = q;
            Monomial::new(v)
        })
        .collect();
    Ok(EdgeIdealMap { ideal: MonomialIdeal::new(ctx, gens)?, edge_of_gen: d.edges.clone() })
}

/// Reset every sink's weight to 1.
pub fn sinking(d: &WeightedOrientedGraph) -> WeightedOrientedGraph {
    let weights = (0..d.vertex_count()).map(|v| if d.is_sink(v) { 1 } else { d.weights[v] }).collect();
    WeightedOrientedGraph { names: d.names.clone(), edges: d.edges.clone(), weights }
}

/// `I + J` over the concatenated variables with every generator of `I`
/// above every generator of `J`.
pub fn disjoint_sum_order(
    i: &MonomialIdeal,
    j: &MonomialIdeal,
    ord_i: &GenOrder,
    ord_j: &GenOrder,
) -> Result<(MonomialIdeal, GenOrder)> {
    if let Some(shared) = i.ctx().names().iter().find(|n| j.ctx().index_of(n).is_some()) {
        return Err(Error::Precondition(format!("variable {shared} occurs in both ideals")));
    }
    if ord_i.len() != i.ngens() || ord_j.len() != j.ngens() {
        return Err(Error::InvalidOrder("order length does not match its ideal".into()));
    }
    let ctx = RingContext::new(i.ctx().names().iter().chain(j.ctx().names()).cloned())?;
    let (a, b) = (i.nvars(), j.nvars());
    let mut gens: Vec<Monomial> = Vec::with_capacity(i.ngens() + j.ngens());
    for g in i.gens() {
        let mut v = g.exponents().to_vec();
        v.resize(a + b, 0);
        gens.push(Monomial::new(v));
    }
    for g in j.gens() {
        let mut v = vec![0u32; a];
        v.extend_from_slice(g.exponents());
        gens.push(Monomial::new(v));
    }
    let perm = ord_i.perm().iter().copied().chain(ord_j.perm().iter().map(|&g| g + i.ngens())).collect();
    Ok((MonomialIdeal::new(ctx, gens)?, GenOrder::new(perm)?))
}

/// Random naturally oriented forest: vertex `k` either starts a new tree
/// or hangs below an earlier vertex; labels are then shuffled.
pub fn random_forest(rng: &mut impl Rng, max_edges: usize, max_weight: u32) -> WeightedOrientedGraph {
    use rand::seq::SliceRandom;
    loop {
        let nv = rng.gen_range(2..=max_edges + 1);
        let mut edges = Vec::new();
        for k in 1..nv {
            if edges.len() < max_edges && rng.gen_bool(0.85) {
                edges.push((rng.gen_range(0..k), k));
            }
        }
        if edges.is_empty() {
            continue;
        }
        let mut relabel: Vec<usize> = (0..nv).collect();
        relabel.shuffle(rng);
        let edges = edges.into_iter().map(|(a, b)| (relabel[a], relabel[b])).collect();
        let weights = (0..nv).map(|_| rng.gen_range(1..=max_weight)).collect();
        return WeightedOrientedGraph::numbered(nv, edges, weights).expect("random forest is simple");
    }
}

/// Random weighted oriented cycle on `3..=max_len` vertices in cyclic
/// label order, each edge oriented at random.
pub fn random_cycle(rng: &mut impl Rng, max_len: usize, max_weight: u32) -> WeightedOrientedGraph {
    let n = rng.gen_range(3..=max_len.max(3));
    let edges = (0..n)
        .map(|i| {
            let j = (i + 1) % n;
            if rng.gen_bool(0.5) {
                (i, j)
            } else {
                (j, i)
            }
        })
        .collect();
    let weights = (0..n).map(|_| rng.gen_range(1..=max_weight)).collect();
    WeightedOrientedGraph::numbered(n, edges, weights).expect("random cycle is simple")
}

/// Random weighted oriented path with `1..=max_len` edges.
pub fn random_path(rng: &mut impl Rng, max_len: usize, max_weight: u32) -> WeightedOrientedGraph {
    let n = rng.gen_range(1..=max_len.max(1));
    let edges = (0..n).map(|i| if rng.gen_bool(0.5) { (i, i + 1) } else { (i + 1, i) }).collect();
    let weights = (0..=n).map(|_| rng.gen_range(1..=max_weight)).collect();
    WeightedOrientedGraph::numbered(n + 1, edges, weights).expect("random path is simple")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let g = WeightedOrientedGraph::parse_text("vertex x y z\nedge x y\nedge z -> y # c\nweight y 3\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (2, 1)]);
        assert_eq!(g.weights(), &[1, 3, 1]);
        assert_eq!(WeightedOrientedGraph::parse_text(&g.to_text()).unwrap(), g);
        let j = serde_json::to_string(&g.to_json()).unwrap();
        assert_eq!(WeightedOrientedGraph::parse_any(&j).unwrap(), g);
    }

    #[test]
    fn rejects_non_simple() {
        assert!(WeightedOrientedGraph::parse_text("edge a b\nedge b a\n").is_err());
        assert!(WeightedOrientedGraph::parse_text("edge a a\n").is_err());
        assert!(WeightedOrientedGraph::parse_text("edge a b\nweight a 0\n").is_err());
    }

    #[test]
    fn four_cycle_edge_ideal() {
        let g = WeightedOrientedGraph::parse_text("edge x w\nedge x y\nedge y z\nedge z w\n").unwrap();
        let e = edge_ideal(&g).unwrap();
        let want = MonomialIdeal::from_strs(&["x", "w", "y", "z"], &["x*w", "x*y", "y*z", "z*w"]).unwrap();
        assert_eq!(e.ideal, want);
    }

    #[test]
    fn weights_go_on_targets() {
        let g = WeightedOrientedGraph::parse_text("edge a -> b\nedge b -> c\nweight b 2\nweight c 3\nweight a 5\n")
            .unwrap();
        let e = edge_ideal(&g).unwrap();
        assert_eq!(e.ideal.format_gen(0), "a*b^2");
        assert_eq!(e.ideal.format_gen(1), "b*c^3");
        let over = edge_ideal_with_exponents(&g, Some(&[(2, 1), (4, 4)])).unwrap();
        assert_eq!(over.ideal.format_gen(0), "a^2*b");
        assert_eq!(over.ideal.format_gen(1), "b^4*c^4");
    }

    #[test]
    fn sinking_is_idempotent() {
        let g = WeightedOrientedGraph::parse_text("edge a b\nedge c b\nedge c d\nweight b 3\nweight d 2\nweight c 4\n")
            .unwrap();
        let s = sinking(&g);
        assert_eq!(s.weights(), &[1, 1, 4, 1]);
        assert_eq!(sinking(&s), s);
    }

    #[test]
    fn disjoint_sum() {
        let i = MonomialIdeal::from_strs(&["a", "b"], &["a*b"]).unwrap();
        let j = MonomialIdeal::from_strs(&["c", "d"], &["c*d"]).unwrap();
        let (s, o) = disjoint_sum_order(&i, &j, &GenOrder::identity(1), &GenOrder::identity(1)).unwrap();
        assert_eq!(s.ngens(), 2);
        assert_eq!(o.perm(), &[0, 1]);
        assert!(disjoint_sum_order(&i, &i, &GenOrder::identity(1), &GenOrder::identity(1)).is_err());
    }
}
