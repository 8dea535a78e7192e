//! Exact integer, rational and polynomial arithmetic.

mod bounds;
mod modp;
mod poly;
mod prime;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serializer;
use thiserror::Error;

pub use bounds::{fujiwara_root_bound, rational_root_up, root_ceil, root_floor, FUJIWARA_SCALE_BITS};
pub use modp::{is_squarefree_mod_p, mod_factor_degrees, FpPoly};
pub use poly::{bigint_string, bigint_vec, IntPolynomial};
pub use prime::{is_prime, next_prime, primes_up_to};

/// Exact rationals, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("operation needs a nonconstant polynomial")]
    ConstantPolynomial,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("leading coefficient divisible by {0}")]
    LeadingCoefficientDivisible(u64),
    #[error("reduction mod {0} is not squarefree")]
    NotSquarefreeModP(u64),
}

/// A p-adic valuation; `Infinite` only for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// `v_p(x)`, checking that `p` is prime.
pub fn valuation(x: &BigInt, p: u64) -> Result<Valuation, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    Ok(valuation_unchecked(x, p))
}

/// `v_p(x)` for a `p` already known to be prime.
pub fn valuation_unchecked(x: &BigInt, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let pb = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&x, &pb);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        x = q;
        v += 1;
    }
}

/// Determinant by fraction-free Bareiss elimination.
pub fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Resultant via the Sylvester matrix.
pub fn resultant(a: &IntPolynomial, b: &IntPolynomial) -> BigInt {
    let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
        return BigInt::zero();
    };
    let size = da + db;
    if size == 0 {
        return BigInt::one();
    }
    let mut rows = Vec::with_capacity(size);
    for i in 0..db {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in a.coeffs().iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..da {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in b.coeffs().iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    determinant(rows)
}

/// `(-1)^(n(n-1)/2) Res(P, P') / lc(P)`.
pub fn discriminant(p: &IntPolynomial) -> Result<BigInt, ArithError> {
    let n = match p.degree() {
        None => return Err(ArithError::ZeroPolynomial),
        Some(0) => return Err(ArithError::ConstantPolynomial),
        Some(n) => n,
    };
    let res = resultant(p, &p.derivative());
    let mut d = res / p.leading().unwrap();
    if (n * (n - 1) / 2) % 2 == 1 {
        d = -d;
    }
    Ok(d)
}

/// Serializes a rational as `"a/b"` (or `"a"` when integral).
pub fn rational_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn serialize_rational<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(q))
}

pub fn serialize_rational_opt<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&rational_string(q)),
        None => s.serialize_none(),
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Absolute value of a rational.
pub fn rat_abs(q: &Rational) -> Rational {
    if q.is_negative() {
        -q.clone()
    } else {
        q.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminants() {
        let d = |c: &[i64]| discriminant(&IntPolynomial::from_i64(c)).unwrap();
        assert_eq!(d(&[-2, 0, 1]), BigInt::from(8));
        assert_eq!(d(&[1, 1, 0, 1]), BigInt::from(-31));
        assert_eq!(d(&[2, -3, 1]), BigInt::from(1));
        assert_eq!(d(&[7, 3]), BigInt::from(1));
        assert!(discriminant(&IntPolynomial::from_i64(&[5])).is_err());
    }

    #[test]
    fn valuations() {
        let v = |x: i64, p| valuation(&BigInt::from(x), p).unwrap();
        assert_eq!(v(12, 2), Valuation::Finite(2));
        assert_eq!(v(0, 7), Valuation::Infinite);
        assert_eq!(v(45, 3), Valuation::Finite(2));
        assert_eq!(valuation(&BigInt::from(4), 9), Err(ArithError::NotPrime(9)));
        assert!(Valuation::Infinite > Valuation::Finite(100));
    }

    #[test]
    fn rational_format() {
        assert_eq!(rational_string(&rat(-6, 4)), "-3/2");
        assert_eq!(rational_string(&rat(8, 1)), "8");
    }
}
