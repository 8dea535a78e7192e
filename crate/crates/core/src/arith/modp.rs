//! Polynomials over F_p and distinct-degree factorization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{is_prime, ArithError, IntPolynomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    pub p: u64,
    /// coeffs[i] is the coefficient of x^i, reduced into [0, p)
    pub coeffs: Vec<u64>,
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p prime, a != 0
    let mut e = p - 2;
    let mut b = a % p;
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, b, p);
        }
        b = mulm(b, b, p);
        e >>= 1;
    }
    r
}

impl FpPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { p, coeffs }
    }

    pub fn reduce(f: &IntPolynomial, p: u64) -> Self {
        let pb = BigInt::from(p);
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect();
        Self::new(p, coeffs)
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lc) => {
                let inv = inv_mod(lc, self.p);
                Self::new(self.p, self.coeffs.iter().map(|&c| mulm(c, inv, self.p)).collect())
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let p = self.p;
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + p - b) % p
            })
            .collect();
        Self::new(p, c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(self.p, vec![]);
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mulm(a, b, p)) % p;
            }
        }
        Self::new(p, out)
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let p = self.p;
        let dd = d.degree().expect("division by zero polynomial");
        let inv = inv_mod(d.coeffs[dd], p);
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::new(p, vec![]), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for shift in (0..q.len()).rev() {
            let c = mulm(r[shift + dd], inv, p);
            q[shift] = c;
            if c == 0 {
                continue;
            }
            for (i, &dc) in d.coeffs.iter().enumerate() {
                r[i + shift] = (r[i + shift] + p - mulm(c, dc, p)) % p;
            }
        }
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        Self::new(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mulm(c, i as u64 % p, p))
                .collect(),
        )
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut result = Self::new(self.p, vec![1]).rem(m);
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        result
    }
}

/// True iff the reduction of `f` mod `p` is squarefree of full degree.
pub fn is_squarefree_mod_p(f: &IntPolynomial, p: u64) -> bool {
    let fp = FpPoly::reduce(f, p);
    if fp.degree() != f.degree() || fp.degree().is_none() {
        return false;
    }
    fp.gcd(&fp.derivative()).degree() == Some(0)
}

/// Degrees of the irreducible factors of `f` mod `p`, sorted ascending.
pub fn mod_factor_degrees(f: &IntPolynomial, p: u64) -> Result<Vec<usize>, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    if f.degree().is_none() {
        return Err(ArithError::ZeroPolynomial);
    }
    let fp = FpPoly::reduce(f, p);
    if fp.degree() != f.degree() {
        return Err(ArithError::LeadingCoefficientDivisible(p));
    }
    if fp.gcd(&fp.derivative()).degree() != Some(0) {
        return Err(ArithError::NotSquarefreeModP(p));
    }
    Ok(distinct_degree(&fp.monic()))
}

fn distinct_degree(f: &FpPoly) -> Vec<usize> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = FpPoly::x(p);
    let mut xp = x.clone();
    let mut i = 0;
    while let Some(deg) = rest.degree() {
        if deg == 0 {
            break;
        }
        i += 1;
        if 2 * i > deg {
            out.push(deg);
            break;
        }
        xp = xp.pow_mod(p, &rest);
        let g = rest.gcd(&xp.sub(&x));
        let gd = g.degree().unwrap();
        if gd > 0 {
            out.extend(std::iter::repeat_n(i, gd / i));
            rest = rest.div_rem(&g).0;
            xp = xp.rem(&rest);
        }
    }
    out.sort_unstable();
    out
}
