//! Sparse multivariate Laurent polynomials over Q.
//!
//! Only used for the handful of point-case eliminations, whose denominators
//! are always a constant times a monomial.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::arith::{rational_string, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, Rational>,
}

impl Laurent {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut out = Self::zero(nvars);
        if !c.is_zero() {
            out.terms.insert(vec![0; nvars], c);
        }
        out
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(Rational::one(), e)
    }

    pub fn monomial(c: Rational, exps: Vec<i32>) -> Self {
        let nvars = exps.len();
        let mut out = Self::zero(nvars);
        if !c.is_zero() {
            out.terms.insert(exps, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    fn add_term(&mut self, e: Vec<i32>, c: Rational) {
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let slot = out.terms.entry(e).or_insert_with(Rational::zero);
                *slot += c1 * c2;
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.nvars, Rational::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Divides by a single nonzero term; exact in the Laurent ring.
    pub fn div_monomial(&self, divisor: &Self) -> Option<Self> {
        if divisor.terms.len() != 1 {
            return None;
        }
        let (de, dc) = divisor.terms.iter().next().unwrap();
        Some(Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(de).map(|(a, b)| a - b).collect(), c / dc))
                .collect(),
        })
    }

    /// Evaluates at rational points; `None` if a negative power hits zero.
    pub fn eval(&self, values: &[Rational]) -> Option<Rational> {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in values.iter().zip(e) {
                if k < 0 {
                    if v.is_zero() {
                        return None;
                    }
                    t *= num_traits::pow(v.recip(), (-k) as usize);
                } else {
                    t *= num_traits::pow(v.clone(), k as usize);
                }
            }
            acc += t;
        }
        Some(acc)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mut s = format!("({})", rational_string(c));
                for (name, &k) in names.iter().zip(e) {
                    match k {
                        0 => {}
                        1 => s.push_str(&format!("*{name}")),
                        _ => s.push_str(&format!("*{name}^{k}")),
                    }
                }
                s
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.display_with(&names))
    }
}

/// Polynomial in t with Laurent coefficients, low degree first.
#[derive(Clone, Debug)]
pub struct SymPoly {
    pub nvars: usize,
    pub coeffs: Vec<Laurent>,
}

impl SymPoly {
    pub fn from_coeffs(nvars: usize, coeffs: Vec<Laurent>) -> Self {
        Self { nvars, coeffs }
    }

    pub fn constant(c: Laurent) -> Self {
        Self { nvars: c.nvars, coeffs: vec![c] }
    }

    pub fn coeff(&self, i: usize) -> Laurent {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Laurent::zero(self.nvars))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs(self.nvars, (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs(self.nvars, (0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::from_coeffs(self.nvars, vec![]);
        }
        let mut out = vec![Laurent::zero(self.nvars); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::from_coeffs(self.nvars, out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(Laurent::constant(self.nvars, Rational::one()));
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `f(self)` for a polynomial f with rational coefficients.
    pub fn compose_into(&self, f: &[Rational]) -> Self {
        let mut acc = Self::from_coeffs(self.nvars, vec![]);
        for c in f.iter().rev() {
            acc = acc.mul(self).add(&Self::constant(Laurent::constant(self.nvars, c.clone())));
        }
        acc
    }
}
