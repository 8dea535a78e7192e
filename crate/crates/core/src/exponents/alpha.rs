//! Upper bounds α(n) on the multiplicity exponent, with a certified natural log.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{rat, rat_int, serialize_rational, serialize_rational_opt, Rational};

pub const DEFAULT_B_CAP: u64 = 64;

/// `lo <= 2^bits * ln n <= hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LnInterval {
    pub bits: u32,
    pub lo: BigInt,
    pub hi: BigInt,
}

/// Bounds on `2^bits * 2 atanh(p/q)` for `0 <= p/q <= 1/3`.
fn two_atanh(p: u64, q: u64, bits: u32) -> (BigInt, BigInt) {
    debug_assert!(3 * p <= q);
    let scale = BigInt::one() << bits;
    let mut lo = BigInt::zero();
    let mut terms = 0u64;
    let (p, q) = (BigInt::from(p), BigInt::from(q));
    let mut num = &scale * &p;
    let mut den = q.clone();
    let p2 = &p * &p;
    let q2 = &q * &q;
    let mut i = 0u64;
    if p.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    while num >= den {
        lo += &num / (&den * BigInt::from(2 * i + 1));
        terms += 1;
        num *= &p2;
        den *= &q2;
        i += 1;
    }
    // Remainder is at most |z|^(2i+1) / ((2i+1)(1 - z^2)) <= (9/8) num/den < 2 units.
    let tail = (&num * 9u32 + &den * 8u32 - 1u32) / (&den * 8u32);
    let hi = &lo + BigInt::from(terms) + tail;
    (lo * 2u32, hi * 2u32)
}

pub fn ln_interval(n: u64, bits: u32) -> LnInterval {
    assert!(n >= 1);
    let e = 63 - n.leading_zeros() as u64;
    let base = 1u64 << e;
    let (l2_lo, l2_hi) = two_atanh(1, 3, bits);
    let (y_lo, y_hi) = two_atanh(n - base, n + base, bits);
    LnInterval { bits, lo: l2_lo * e + y_lo, hi: l2_hi * e + y_hi }
}

/// `1.564 (ln n)^2` as a rational enclosure `(lo, hi)`.
pub fn lot_interval(n: u64, bits: u32) -> (Rational, Rational) {
    let ln = ln_interval(n, bits);
    let den = BigInt::from(1000) << (2 * bits);
    let lo = Rational::new(&ln.lo * &ln.lo * 1564u32, den.clone());
    let hi = Rational::new(&ln.hi * &ln.hi * 1564u32, den);
    (lo, hi)
}

/// Decides `1.564 (ln n)^2 < rhs`, doubling the precision while the enclosure straddles `rhs`.
pub fn lot_less_than(n: u64, rhs: &Rational, bits: u32) -> bool {
    let mut bits = bits.max(32);
    loop {
        let (lo, hi) = lot_interval(n, bits);
        if hi < *rhs {
            return true;
        }
        if lo >= *rhs {
            return false;
        }
        assert!(bits < 1 << 16, "log comparison at n = {n} did not resolve");
        bits *= 2;
    }
}

/// Least a with C(a+2, 2) >= 2n+1, and `2a - a(a-1)(a+4)/(6n)`.
pub fn part1(n: u64) -> (u64, Rational) {
    let mut a = 0u64;
    while (a + 2) * (a + 1) / 2 < 2 * n + 1 {
        a += 1;
    }
    let v = rat_int(2 * a) - Rational::new(BigInt::from(a * a.saturating_sub(1) * (a + 4)), BigInt::from(6 * n));
    (a, v)
}

/// Minimum of a*b over b in [3, min(n, b_cap)], with a least such that C(a+b-1, b-1) > bn.
/// Returns `(a, b, a*b)`.
pub fn part2(n: u64, b_cap: u64) -> Option<(u64, u64, u64)> {
    let mut best: Option<(u64, u64, u64)> = None;
    for b in 3..=n.min(b_cap) {
        let target = (b as u128) * (n as u128);
        // C(a+b-1, b-1) at a = 0 is 1; step a -> a+1 multiplies by (a+b)/(a+1).
        let mut a = 0u64;
        let mut binom: Option<u128> = Some(1);
        while let Some(v) = binom {
            if v > target {
                break;
            }
            binom = v.checked_mul((a + b) as u128).map(|x| x / (a + 1) as u128);
            a += 1;
        }
        let val = a * b;
        if best.is_none_or(|(_, _, v)| val < v) {
            best = Some((a, b, val));
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaBounds {
    pub n: u64,
    #[serde(serialize_with = "serialize_rational_opt")]
    pub schmidt: Option<Rational>,
    /// Enclosure of `1.564 (ln n)^2`.
    #[serde(serialize_with = "serialize_rational_opt")]
    pub lot_lo: Option<Rational>,
    #[serde(serialize_with = "serialize_rational_opt")]
    pub lot_hi: Option<Rational>,
    pub part1_a: u64,
    #[serde(serialize_with = "serialize_rational")]
    pub part1: Rational,
    pub part2: Option<(u64, u64, u64)>,
    /// `min(part1, part2)`.
    #[serde(serialize_with = "serialize_rational")]
    pub lot2: Rational,
}

impl AlphaBounds {
    /// The smallest exact (rational) bound and its name.
    pub fn best_exact(&self) -> (&'static str, Rational) {
        let mut best = ("part1", self.part1.clone());
        if let Some((_, _, v)) = self.part2 {
            if rat_int(v) < best.1 {
                best = ("part2", rat_int(v));
            }
        }
        if let Some(s) = &self.schmidt {
            if *s < best.1 {
                best = ("schmidt", s.clone());
            }
        }
        best
    }

    /// Does some bound lie strictly below `rhs`? Returns the first one that does.
    pub fn any_below(&self, rhs: &Rational, bits: u32) -> Option<&'static str> {
        let (name, v) = self.best_exact();
        if v.cmp(rhs) == Ordering::Less {
            return Some(name);
        }
        if self.lot_hi.is_some() && lot_less_than(self.n, rhs, bits) {
            return Some("lot");
        }
        None
    }
}

pub fn alpha_bounds(n: u64, b_cap: u64, bits: u32) -> AlphaBounds {
    assert!(n >= 2);
    let schmidt = (n >= 3).then(|| rat((n + 2) as i64, 4));
    let (lot_lo, lot_hi) = if n >= 6 {
        let (lo, hi) = lot_interval(n, bits);
        (Some(lo), Some(hi))
    } else {
        (None, None)
    };
    let (part1_a, p1) = part1(n);
    let p2 = part2(n, b_cap);
    let lot2 = match p2 {
        Some((_, _, v)) if rat_int(v) < p1 => rat_int(v),
        _ => p1.clone(),
    };
    AlphaBounds { n, schmidt, lot_lo, lot_hi, part1_a, part1: p1, part2: p2, lot2 }
}
