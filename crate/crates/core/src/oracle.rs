//! Independent ground truth: Betti numbers via Tor over the Taylor complex,
//! and strand-by-strand exactness certification of candidate resolutions.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::betti::GradedBettiTable;
use crate::error::{Error, Result};
use crate::ideal::{Monomial, MonomialIdeal};
use crate::linalg::{rank, FieldSpec, IntMatrix};
use crate::morse::MorseDifferential;
use crate::symbols::{sign_of_removal, LcmTable, Symbol};

/// Largest generator count the oracle accepts.
pub const MAX_ORACLE_GENERATORS: usize = 16;
/// Largest lcm lattice the oracle accepts.
pub const MAX_LATTICE: usize = 1 << 20;

fn check_capacity(t: &LcmTable) -> Result<()> {
    if t.ngens() > MAX_ORACLE_GENERATORS {
        return Err(Error::Capacity(format!(
            "oracle handles at most {MAX_ORACLE_GENERATORS} generators, got {}",
            t.ngens()
        )));
    }
    if t.lattice().len() > MAX_LATTICE {
        return Err(Error::Capacity(format!("lcm lattice has {} elements", t.lattice().len())));
    }
    Ok(())
}

/// Matrix of the Taylor differential from `upper` (columns) to `lower`
/// (rows), both lists of symbols.
fn taylor_block(lower: &[Symbol], upper: &[Symbol]) -> IntMatrix {
    let row_of: HashMap<Symbol, usize> = lower.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut m = vec![vec![0i64; upper.len()]; lower.len()];
    for (c, &s) in upper.iter().enumerate() {
        for g in s.iter() {
            if let Some(&r) = row_of.get(&s.without(g)) {
                m[r][c] = sign_of_removal(s, g);
            }
        }
    }
    m
}

/// Homology dimensions of a chain complex given by its boundary ranks.
/// Negative values can only arise when the input is not a complex.
fn homology(dims: &[usize], ranks: &[usize]) -> Vec<i64> {
    // ranks[i] = rank of ∂_i : C_i → C_{i-1}; ranks[0] = 0.
    (0..dims.len()).map(|i| dims[i] as i64 - ranks[i] as i64 - ranks.get(i + 1).copied().unwrap_or(0) as i64).collect()
}

/// `β_{i,v}(R/I)` for every multidegree, from the Taylor strands
/// `{σ : lcm(σ) = x^v}`.
pub fn tor_betti_table(t: &LcmTable, field: FieldSpec) -> Result<GradedBettiTable> {
    check_capacity(t)?;
    let mut fibres: Vec<Vec<Symbol>> = vec![Vec::new(); t.lattice().len()];
    for s in t.all_symbols() {
        fibres[t.id(s) as usize].push(s);
    }
    let per_fibre: Vec<(u32, Vec<i64>)> = fibres
        .par_iter()
        .enumerate()
        .map(|(id, fibre)| {
            let top = fibre.iter().map(|s| s.len()).max().unwrap_or(0);
            let mut levels: Vec<Vec<Symbol>> = vec![Vec::new(); top + 1];
            for &s in fibre {
                levels[s.len()].push(s);
            }
            let dims: Vec<usize> = levels.iter().map(Vec::len).collect();
            let mut ranks = vec![0usize; top + 1];
            for k in 1..=top {
                if !levels[k].is_empty() && !levels[k - 1].is_empty() {
                    ranks[k] = rank(&taylor_block(&levels[k - 1], &levels[k]), field);
                }
            }
            (id as u32, homology(&dims, &ranks))
        })
        .collect();
    let mut table = GradedBettiTable::new();
    for (id, h) in per_fibre {
        for (i, &b) in h.iter().enumerate() {
            table.add(i, t.monomial(id).clone(), u64::try_from(b).expect("Taylor strands are complexes"));
        }
    }
    Ok(table)
}

pub fn tor_betti(ideal: &MonomialIdeal, field: FieldSpec) -> Result<GradedBettiTable> {
    if ideal.ngens() > MAX_ORACLE_GENERATORS {
        return Err(Error::Capacity(format!(
            "oracle handles at most {MAX_ORACLE_GENERATORS} generators, got {}",
            ideal.ngens()
        )));
    }
    tor_betti_table(&LcmTable::new(ideal)?, field)
}

/// Homology that should vanish but does not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrandFailure {
    pub multidegree: Monomial,
    pub position: usize,
    pub homology: i64,
}

/// Check that the complex is acyclic in every multidegree of the lcm
/// lattice, with `H_0 = k` only in multidegree 1.
pub fn strand_exactness(
    d: &MorseDifferential,
    t: &LcmTable,
    field: FieldSpec,
) -> Result<std::result::Result<(), StrandFailure>> {
    check_capacity(t)?;
    let failures: Vec<StrandFailure> = t
        .lattice()
        .par_iter()
        .filter_map(|v| {
            let inside: Vec<Vec<usize>> = d
                .criticals
                .iter()
                .map(|level| {
                    level.iter().enumerate().filter(|(_, &s)| t.lcm(s).divides_unchecked(v)).map(|(i, _)| i).collect()
                })
                .collect();
            let dims: Vec<usize> = inside.iter().map(Vec::len).collect();
            let mut ranks = vec![0usize; dims.len()];
            for (r, mat) in d.matrices.iter().enumerate() {
                let r = r + 1;
                if dims[r] == 0 || dims[r - 1] == 0 {
                    continue;
                }
                let row_pos: HashMap<usize, usize> = inside[r - 1].iter().enumerate().map(|(k, &i)| (i, k)).collect();
                let col_pos: HashMap<usize, usize> = inside[r].iter().enumerate().map(|(k, &i)| (i, k)).collect();
                let mut m = vec![vec![0i64; dims[r]]; dims[r - 1]];
                for e in &mat.entries {
                    if let (Some(&a), Some(&b)) = (row_pos.get(&e.row), col_pos.get(&e.col)) {
                        m[a][b] = e.coeff;
                    }
                }
                ranks[r] = rank(&m, field);
            }
            let h = homology(&dims, &ranks);
            let expect_h0 = i64::from(v.is_one());
            h.iter().enumerate().find_map(|(i, &dim)| {
                let want = if i == 0 { expect_h0 } else { 0 };
                (dim != want).then(|| StrandFailure { multidegree: v.clone(), position: i, homology: dim })
            })
        })
        .collect();
    Ok(failures.into_iter().min_by(|a, b| a.multidegree.cmp(&b.multidegree)).map_or(Ok(()), Err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::GenOrder;
    use crate::matching::{bridge_matching, Matching};
    use crate::morse::differential;

    fn four_cycle() -> MonomialIdeal {
        MonomialIdeal::from_strs(&["x", "y", "z", "w"], &["x*w", "x*y", "y*z", "z*w"]).unwrap()
    }

    #[test]
    fn koszul() {
        let i = MonomialIdeal::from_strs(&["x", "y"], &["x", "y"]).unwrap();
        let b = tor_betti(&i, FieldSpec::default()).unwrap();
        assert_eq!(b.totals(), [1, 2, 1]);
        assert_eq!(b.get(2, &i.ctx().parse_monomial("x*y").unwrap()), 1);
    }

    #[test]
    fn four_cycle_betti() {
        let i = four_cycle();
        for f in [FieldSpec::default(), FieldSpec::Rational, FieldSpec::Prime(2)] {
            let b = tor_betti(&i, f).unwrap();
            assert_eq!(b.totals(), [1, 4, 4, 1]);
            assert_eq!(b.get(3, &i.ctx().parse_monomial("x*y*z*w").unwrap()), 1);
            assert_eq!(b.get(2, &i.ctx().parse_monomial("x*y*w").unwrap()), 1);
        }
    }

    #[test]
    fn strands_of_taylor_and_bridge_complexes() {
        let i = four_cycle();
        let t = LcmTable::new(&i).unwrap();
        let taylor = differential(&Matching::default(), &t).unwrap();
        assert_eq!(strand_exactness(&taylor, &t, FieldSpec::default()).unwrap(), Ok(()));
        let bm = differential(&bridge_matching(&t, &GenOrder::identity(4)), &t).unwrap();
        assert_eq!(strand_exactness(&bm, &t, FieldSpec::Rational).unwrap(), Ok(()));
        let broken = bm.with_flipped_sign(2, 0);
        assert!(strand_exactness(&broken, &t, FieldSpec::Rational).unwrap().is_err());
    }
}
