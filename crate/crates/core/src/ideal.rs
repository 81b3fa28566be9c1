//! Monomials, monomial ideals with minimal generating sets, and total
//! orderings on the generators.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Named variables of a polynomial ring `k[x_1..x_N]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingContext {
    names: Vec<String>,
}

impl RingContext {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidRing("no variables".into()));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::InvalidRing(format!("bad variable name {name:?}")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidRing(format!("duplicate variable {name}")));
            }
        }
        Ok(Self { names })
    }

    /// Context with variables `x1..xN`.
    pub fn numbered(n: usize) -> Self {
        Self { names: (1..=n).map(|i| format!("x{i}")).collect() }
    }

    pub fn var_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|v| v == name)
    }

    /// Parse `var ('^' int)? ('*' var ('^' int)?)*`; the literal `1` is the
    /// constant monomial.
    pub fn parse_monomial(&self, text: &str) -> Result<Monomial> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty monomial".into()));
        }
        let mut exps = vec![0u32; self.var_count()];
        if text == "1" {
            return Ok(Monomial(exps));
        }
        for factor in text.split('*') {
            let factor = factor.trim();
            let (var, exp) = match factor.split_once('^') {
                Some((v, e)) => {
                    let e: u32 =
                        e.trim().parse().map_err(|_| Error::Parse(format!("malformed exponent in {factor:?}")))?;
                    if e == 0 {
                        return Err(Error::Parse(format!("exponent must be positive in {factor:?}")));
                    }
                    (v.trim(), e)
                }
                None => (factor, 1),
            };
            let idx = self.index_of(var).ok_or_else(|| Error::Parse(format!("unknown variable {var:?}")))?;
            exps[idx] = exps[idx].checked_add(exp).ok_or(Error::ExponentOverflow)?;
        }
        Ok(Monomial(exps))
    }

    /// Render a monomial as `x^2*y`, or `1`.
    pub fn format(&self, m: &Monomial) -> String {
        let parts: Vec<String> =
            m.0.iter()
                .zip(&self.names)
                .filter(|(e, _)| **e > 0)
                .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Exponent vector; the multidegree of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Self(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.0.len() == other.0.len() {
            Ok(())
        } else {
            Err(Error::ContextMismatch { left: self.0.len(), right: other.0.len() })
        }
    }

    pub fn lcm(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.join(other))
    }

    pub fn divides(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self.divides_unchecked(other))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    /// `self / other` when `other` divides `self`.
    pub fn quotient(&self, other: &Self) -> Option<Self> {
        if self.0.len() != other.0.len() {
            return None;
        }
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(Self)
    }

    // Length-agnostic kernels for hot loops where the context is known to agree.
    pub(crate) fn join(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub(crate) fn divides_unchecked(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// A monomial ideal together with its minimal generating set. Generator
/// indices are fixed at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    ctx: RingContext,
    gens: Vec<Monomial>,
}

/// JSON form `{"vars": [...], "gens": [[...], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdealJson {
    pub vars: Vec<String>,
    pub gens: Vec<Vec<u32>>,
}

impl MonomialIdeal {
    /// Build from generators that must already be minimal.
    pub fn new(ctx: RingContext, gens: Vec<Monomial>) -> Result<Self> {
        Self::check_shape(&ctx, &gens)?;
        for (i, a) in gens.iter().enumerate() {
            for (j, b) in gens.iter().enumerate() {
                if i != j && a.divides_unchecked(b) {
                    return Err(Error::NotMinimal { divisor: i, multiple: j });
                }
            }
        }
        Ok(Self { ctx, gens })
    }

    /// Drop duplicates and non-minimal elements, keeping first occurrences.
    pub fn minimize_generators(ctx: RingContext, raw: Vec<Monomial>) -> Result<Self> {
        Self::check_shape_lengths(&ctx, &raw)?;
        let mut kept: Vec<Monomial> = Vec::new();
        for (i, m) in raw.iter().enumerate() {
            let redundant =
                raw.iter().enumerate().any(|(j, other)| j != i && other.divides_unchecked(m) && (other != m || j < i));
            if !redundant {
                kept.push(m.clone());
            }
        }
        Self::new(ctx, kept)
    }

    fn check_shape_lengths(ctx: &RingContext, gens: &[Monomial]) -> Result<()> {
        if gens.is_empty() {
            return Err(Error::DegenerateIdeal("no generators".into()));
        }
        for g in gens {
            if g.nvars() != ctx.var_count() {
                return Err(Error::ContextMismatch { left: g.nvars(), right: ctx.var_count() });
            }
        }
        Ok(())
    }

    fn check_shape(ctx: &RingContext, gens: &[Monomial]) -> Result<()> {
        Self::check_shape_lengths(ctx, gens)?;
        if gens.iter().any(Monomial::is_one) {
            return Err(Error::DegenerateIdeal("the unit ideal has no Taylor complex".into()));
        }
        if gens.len() > crate::symbols::MAX_GENERATORS {
            return Err(Error::Capacity(format!(
                "{} generators exceed the symbol capacity {}",
                gens.len(),
                crate::symbols::MAX_GENERATORS
            )));
        }
        Ok(())
    }

    pub fn from_strs(vars: &[&str], gens: &[&str]) -> Result<Self> {
        let ctx = RingContext::new(vars.iter().copied())?;
        let gens = gens.iter().map(|g| ctx.parse_monomial(g)).collect::<Result<Vec<_>>>()?;
        Self::new(ctx, gens)
    }

    /// Text format: a `vars: x y z` line, then one monomial per line;
    /// `#` starts a comment.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut ctx: Option<RingContext> = None;
        let mut gens = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("vars:") {
                if ctx.is_some() {
                    return Err(Error::Parse(format!("line {}: repeated vars line", lineno + 1)));
                }
                ctx = Some(RingContext::new(rest.split_whitespace())?);
                continue;
            }
            let c =
                ctx.as_ref().ok_or_else(|| Error::Parse(format!("line {}: monomial before vars line", lineno + 1)))?;
            gens.push(c.parse_monomial(line).map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?);
        }
        let ctx = ctx.ok_or_else(|| Error::Parse("missing vars line".into()))?;
        Self::new(ctx, gens)
    }

    pub fn from_json(json: &IdealJson) -> Result<Self> {
        let ctx = RingContext::new(json.vars.iter().cloned())?;
        let gens = json.gens.iter().cloned().map(Monomial::new).collect();
        Self::new(ctx, gens)
    }

    pub fn to_json(&self) -> IdealJson {
        IdealJson { vars: self.ctx.names().to_vec(), gens: self.gens.iter().map(|g| g.exponents().to_vec()).collect() }
    }

    /// Accepts either the text format or the JSON form.
    pub fn parse_any(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            let json: IdealJson = serde_json::from_str(text).map_err(|e| Error::Parse(format!("ideal JSON: {e}")))?;
            Self::from_json(&json)
        } else {
            Self::parse_text(text)
        }
    }

    pub fn ctx(&self) -> &RingContext {
        &self.ctx
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn gen(&self, i: usize) -> &Monomial {
        &self.gens[i]
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn nvars(&self) -> usize {
        self.ctx.var_count()
    }

    pub fn format_gen(&self, i: usize) -> String {
        self.ctx.format(&self.gens[i])
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("vars: {}\n", self.ctx.names().join(" "));
        for g in &self.gens {
            out.push_str(&self.ctx.format(g));
            out.push('\n');
        }
        out
    }
}

/// Random ideal on `2..=max_vars` variables (one if `max_vars` is 1) with exponents `0..=max_exp`:
/// a target size in `1..=max_gens` is drawn, then random monomials are
/// kept while they are incomparable with those already kept.
pub fn random_ideal(rng: &mut impl rand::Rng, max_gens: usize, max_vars: usize, max_exp: u32) -> MonomialIdeal {
    loop {
        let nv = rng.gen_range(max_vars.min(2)..=max_vars);
        let target = rng.gen_range(1..=max_gens);
        let mut kept: Vec<Monomial> = Vec::new();
        for _ in 0..50 * max_gens {
            if kept.len() == target {
                break;
            }
            let m = Monomial::new((0..nv).map(|_| rng.gen_range(0..=max_exp)).collect());
            if !m.is_one() && kept.iter().all(|k| !k.divides_unchecked(&m) && !m.divides_unchecked(k)) {
                kept.push(m);
            }
        }
        if let Ok(i) = MonomialIdeal::new(RingContext::numbered(nv), kept) {
            return i;
        }
    }
}

/// A total order on generator indices; `perm[0]` is the largest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenOrder {
    perm: Vec<usize>,
    rank: Vec<usize>,
}

impl GenOrder {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut rank = vec![usize::MAX; n];
        for (pos, &g) in perm.iter().enumerate() {
            if g >= n || rank[g] != usize::MAX {
                return Err(Error::InvalidOrder(format!("{perm:?} is not a permutation of 0..{n}")));
            }
            rank[g] = pos;
        }
        Ok(Self { perm, rank })
    }

    /// Index order: generator 0 is the largest.
    pub fn identity(n: usize) -> Self {
        Self { perm: (0..n).collect(), rank: (0..n).collect() }
    }

    pub fn for_ideal(ideal: &MonomialIdeal, perm: Vec<usize>) -> Result<Self> {
        if perm.len() != ideal.ngens() {
            return Err(Error::InvalidOrder(format!(
                "order lists {} generators, ideal has {}",
                perm.len(),
                ideal.ngens()
            )));
        }
        Self::new(perm)
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// Position of `g` in the descending listing; 0 is the largest.
    pub fn rank(&self, g: usize) -> usize {
        self.rank[g]
    }

    /// `a >_I b`, i.e. `a` dominates `b`.
    pub fn greater(&self, a: usize, b: usize) -> bool {
        self.rank[a] < self.rank[b]
    }

    /// The smaller of two generators.
    pub fn min_of(&self, a: usize, b: usize) -> usize {
        if self.greater(a, b) {
            b
        } else {
            a
        }
    }
}

impl fmt::Display for GenOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.perm.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}
