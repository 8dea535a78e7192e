//! Members of the family `F = h^m f(gamma) - g^m` and their coefficient boxes.

mod boxes;
pub mod laurent;
mod point;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{IntPolynomial, Rational};
use crate::planner::Curve;

pub use boxes::{
    box_bounds, coefficient_box, coefficient_box_point, within, BoxBounds, BoxSlot, CoefficientBox, SlotBound, SlotRef, Vector,
};
pub use point::{build_point_F, point_elimination_table, PointEliminationTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("leading data vanishes: a_s = 0")]
    ZeroLeadingData,
    #[error("specialization has the wrong shape: {0}")]
    Shape(String),
    #[error("symbolic elimination left a nonzero coefficient at t^{0}")]
    EliminationFailed(usize),
    #[error("box exponent exceeds weight at t^{index}")]
    WeightViolated { index: usize },
}

/// Integer values for the coefficients of g, h and gamma (index i multiplies t^i).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecializationVector {
    #[serde(with = "crate::arith::bigint_vec")]
    pub a: Vec<BigInt>,
    #[serde(with = "crate::arith::bigint_vec")]
    pub b: Vec<BigInt>,
    #[serde(with = "crate::arith::bigint_vec")]
    pub alpha: Vec<BigInt>,
}

impl SpecializationVector {
    pub fn from_i64(a: &[i64], b: &[i64], alpha: &[i64]) -> Self {
        let conv = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect();
        Self { a: conv(a), b: conv(b), alpha: conv(alpha) }
    }

    pub fn g(&self) -> IntPolynomial {
        IntPolynomial::new(self.a.clone())
    }

    pub fn h(&self) -> IntPolynomial {
        IntPolynomial::new(self.b.clone())
    }

    pub fn gamma(&self) -> IntPolynomial {
        IntPolynomial::new(self.alpha.clone())
    }

    pub fn get(&self, slot: SlotRef) -> &BigInt {
        match slot.vector {
            Vector::A => &self.a[slot.index],
            Vector::B => &self.b[slot.index],
            Vector::Alpha => &self.alpha[slot.index],
        }
    }
}

/// `h^m f(gamma) - g^m`.
#[allow(non_snake_case)]
pub fn build_F(curve: &Curve, spec: &SpecializationVector) -> IntPolynomial {
    let m = curve.m() as u32;
    let lhs = &spec.h().pow(m) * &curve.f().compose(&spec.gamma());
    &lhs - &spec.g().pow(m)
}

/// True iff `f(gamma0)` is squarefree.
pub fn squarefree_composition(f: &IntPolynomial, gamma0: &IntPolynomial) -> bool {
    f.compose(gamma0).is_squarefree().unwrap_or(false)
}

/// Dense polynomial with rational coefficients, low degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPolynomial {
    pub coeffs: Vec<Rational>,
}

impl RatPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Multiplies through by the lcm of the denominators; returns the integer model and that factor.
    pub fn to_integral(&self) -> (IntPolynomial, BigInt) {
        let l = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect();
        (IntPolynomial::new(coeffs), l)
    }
}
