use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ArithError, IntPolynomial, Rational};

/// Fractional powers are rounded up on the grid 2^-FUJIWARA_SCALE_BITS.
pub const FUJIWARA_SCALE_BITS: u32 = 32;

/// Largest x >= 0 with x^k <= n (n >= 0).
pub fn root_floor(n: &BigInt, k: u32) -> BigInt {
    assert!(!n.is_negative() && k >= 1);
    n.nth_root(k)
}

/// Least x >= 0 with x^k >= n (n >= 0).
pub fn root_ceil(n: &BigInt, k: u32) -> BigInt {
    let r = root_floor(n, k);
    if &num_traits::pow(r.clone(), k as usize) < n {
        r + 1
    } else {
        r
    }
}

/// Rational upper bound for q^(1/k), q >= 0, on the grid 2^-FUJIWARA_SCALE_BITS.
pub fn rational_root_up(q: &Rational, k: u32) -> Rational {
    let scale = BigInt::one() << FUJIWARA_SCALE_BITS;
    let scaled = q.numer() * num_traits::pow(scale.clone(), k as usize);
    let (quot, rem) = scaled.div_rem(q.denom());
    let ceil = if rem.is_zero() { quot } else { quot + 1 };
    Rational::new(root_ceil(&ceil, k), scale)
}

/// Fujiwara's bound `2 max_i |c_{n-i}/c_n|^(1/i)` with the constant term halved.
/// Every complex root has absolute value at most the returned rational.
pub fn fujiwara_root_bound(p: &IntPolynomial) -> Result<Rational, ArithError> {
    let n = match p.degree() {
        None => return Err(ArithError::ZeroPolynomial),
        Some(0) => return Err(ArithError::ConstantPolynomial),
        Some(n) => n,
    };
    let lc = p.leading().unwrap().abs();
    let mut best = Rational::zero();
    for i in 1..=n {
        let c = p.coeff(n - i).abs();
        if c.is_zero() {
            continue;
        }
        let mut q = Rational::new(c, lc.clone());
        if i == n {
            q /= Rational::from_integer(BigInt::from(2));
        }
        let r = rational_root_up(&q, i as u32);
        if r > best {
            best = r;
        }
    }
    Ok(best * Rational::from_integer(BigInt::from(2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_int;

    #[test]
    fn roots() {
        assert_eq!(root_ceil(&BigInt::from(17), 2), BigInt::from(5));
        assert_eq!(root_ceil(&BigInt::from(16), 2), BigInt::from(4));
        assert_eq!(root_floor(&BigInt::from(26), 3), BigInt::from(2));
        assert_eq!(root_ceil(&BigInt::zero(), 3), BigInt::zero());
    }

    #[test]
    fn examples() {
        let b = |c: &[i64]| fujiwara_root_bound(&IntPolynomial::from_i64(c)).unwrap();
        assert_eq!(b(&[-2, 0, 1]), rat_int(2));
        assert!(b(&[-5, 1]) >= rat_int(5));
        assert!(b(&[-6, 11, -6, 1]) >= rat_int(3));
    }
}
