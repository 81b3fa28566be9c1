//! Exact rank computation.
//!
//! Elimination is written once over any `num_traits::Num` scalar: a field
//! (`Zp<P>`, [`Rational`]) uses ordinary Gaussian elimination, an integral
//! domain (`i128`, [`Integer`]) uses fraction-free Bareiss elimination. The
//! hot path over a runtime prime uses plain `u64` arithmetic.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::BigInt;
use num_traits::{CheckedMul, CheckedSub, Num, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
pub type IntMatrix = Vec<Vec<i64>>;

/// Coefficient field for Betti computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Prime(u64),
    Rational,
}

impl FieldSpec {
    pub const DEFAULT_PRIME: u64 = 32003;

    pub fn prime(p: u64) -> Result<Self> {
        if !(2..1 << 31).contains(&p) || !is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not a prime below 2^31")));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn characteristic(self) -> u64 {
        match self {
            FieldSpec::Prime(p) => p,
            FieldSpec::Rational => 0,
        }
    }
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::Prime(Self::DEFAULT_PRIME)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
            FieldSpec::Rational => write!(f, "QQ"),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Rank of an integer matrix over the given field.
pub fn rank(m: &[Vec<i64>], field: FieldSpec) -> usize {
    match field {
        FieldSpec::Prime(p) => modp_rank(m, p),
        FieldSpec::Rational => rational_rank(m),
    }
}

/// Rank over Q: Bareiss in `i128`, falling back to big integers on overflow.
pub fn rational_rank(m: &[Vec<i64>]) -> usize {
    let small: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    if let Some(r) = bareiss_rank(small) {
        return r;
    }
    let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    bareiss_rank(big).expect("big integers do not overflow")
}

/// Rank over `F_p` for a runtime prime `p < 2^31`.
pub fn modp_rank(m: &[Vec<i64>], p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|&v| v.rem_euclid(p as i64) as u64).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = pow_mod(a[rank][c], p - 2, p);
        for v in a[rank][c..].iter_mut() {
            *v = *v * inv % p;
        }
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest.iter_mut() {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for j in c..cols {
                row[j] = (row[j] + (p - f) * pivot_row[j]) % p;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Gaussian elimination over a field scalar.
pub fn gauss_rank<T: Num + Clone>(mut a: Vec<Vec<T>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, piv);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone() / pivot_row[c].clone();
            for j in c..cols {
                row[j] = row[j].clone() - f.clone() * pivot_row[j].clone();
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Fraction-free elimination over an integral domain. Every division is
/// exact; `None` signals overflow of a bounded scalar type.
pub fn bareiss_rank<T: Num + Clone + CheckedMul + CheckedSub>(mut a: Vec<Vec<T>>) -> Option<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = T::one();
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, piv);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let p = pivot_row[c].clone();
        for row in rest.iter_mut() {
            let f = row[c].clone();
            for j in c + 1..cols {
                let lhs = row[j].checked_mul(&p)?;
                let rhs = f.checked_mul(&pivot_row[j])?;
                row[j] = lhs.checked_sub(&rhs)? / prev.clone();
            }
            row[c] = T::zero();
        }
        prev = p;
        rank += 1;
        if rank == rows {
            break;
        }
    }
    Some(rank)
}

/// Prime field with compile-time modulus, usable with the generic routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Zp<const P: u64>(u64);

impl<const P: u64> Zp<P> {
    pub fn new(v: i64) -> Self {
        Zp(v.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn inverse(self) -> Option<Self> {
        (self.0 != 0).then(|| Zp(pow_mod(self.0, P - 2, P)))
    }
}

impl<const P: u64> Add for Zp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Zp((self.0 + o.0) % P)
    }
}

impl<const P: u64> Sub for Zp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Zp((self.0 + P - o.0) % P)
    }
}

impl<const P: u64> Mul for Zp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Zp(self.0 * o.0 % P)
    }
}

impl<const P: u64> Div for Zp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.inverse().expect("division by zero in Zp")
    }
}

impl<const P: u64> Rem for Zp<P> {
    type Output = Self;
    fn rem(self, o: Self) -> Self {
        assert!(o.0 != 0, "remainder by zero in Zp");
        Zp(0)
    }
}

impl<const P: u64> Neg for Zp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Zp((P - self.0) % P)
    }
}

impl<const P: u64> Zero for Zp<P> {
    fn zero() -> Self {
        Zp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Zp<P> {
    fn one() -> Self {
        Zp(1 % P)
    }
}

impl<const P: u64> Num for Zp<P> {
    type FromStrRadixErr = std::num::ParseIntError;
    fn from_str_radix(s: &str, radix: u32) -> std::result::Result<Self, Self::FromStrRadixErr> {
        i64::from_str_radix(s, radix).map(Zp::new)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rational, F2, F32003};
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lift<T>(m: &[Vec<i64>], f: impl Fn(i64) -> T) -> Vec<Vec<T>> {
        m.iter().map(|r| r.iter().map(|&v| f(v)).collect()).collect()
    }

    #[test]
    fn small_cases() {
        let id = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(rank(&id, FieldSpec::Rational), 3);
        assert_eq!(rank(&id, FieldSpec::default()), 3);
        let m = vec![vec![2], vec![4]];
        assert_eq!(rank(&m, FieldSpec::Prime(2)), 0);
        assert_eq!(rank(&m, FieldSpec::Rational), 1);
        assert_eq!(gauss_rank(lift(&m, Zp::<2>::new)), 0);
        assert_eq!(rank(&[], FieldSpec::Rational), 0);
        assert_eq!(rank(&[vec![], vec![]], FieldSpec::Prime(3)), 0);
    }

    #[test]
    fn all_methods_agree_on_random_sign_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let r = rng.gen_range(1..9);
            let c = rng.gen_range(1..9);
            let density = rng.gen_range(0.2..1.0);
            let m: IntMatrix = (0..r)
                .map(|_| {
                    (0..c)
                        .map(|_| {
                            if rng.gen_bool(density) {
                                if rng.gen() {
                                    1
                                } else {
                                    -1
                                }
                            } else {
                                0
                            }
                        })
                        .collect()
                })
                .collect();
            let q = rational_rank(&m);
            assert_eq!(modp_rank(&m, 32003), q);
            assert_eq!(gauss_rank(lift(&m, F32003::new)), q);
            assert_eq!(gauss_rank(lift(&m, |v| Rational::from_integer(BigInt::from(v)))), q);
            assert_eq!(bareiss_rank(lift(&m, BigInt::from)), Some(q));
            assert_eq!(gauss_rank(lift(&m, F2::new)), modp_rank(&m, 2));
        }
    }

    #[test]
    fn bareiss_falls_back_on_overflow() {
        let m: IntMatrix = (0..40)
            .map(|i| (0..40).map(|j| if (i * 7 + j * 3) % 5 < 3 { 1 } else { -1 } * ((i + j) % 3 + 1)).collect())
            .collect();
        let q = rational_rank(&m);
        assert_eq!(Some(q), bareiss_rank(lift(&m, BigInt::from)));
    }

    #[test]
    fn prime_validation() {
        assert!(FieldSpec::prime(32003).is_ok());
        assert!(FieldSpec::prime(32004).is_err());
        assert!(FieldSpec::prime(1).is_err());
    }
}
