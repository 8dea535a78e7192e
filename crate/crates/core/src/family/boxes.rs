//! Height boxes for specializations and the coefficient bounds they imply.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{FamilyError, SpecializationVector};
use crate::arith::{
    rational_root_up, rational_string, root_floor, serialize_rational, Rational,
    FUJIWARA_SCALE_BITS,
};
use crate::planner::{abs_pow_le, Curve, DegreePlan, PointPlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Vector {
    A,
    B,
    Alpha,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SlotRef {
    pub vector: Vector,
    pub index: usize,
}

impl SlotRef {
    pub fn a(index: usize) -> Self {
        Self { vector: Vector::A, index }
    }
    pub fn b(index: usize) -> Self {
        Self { vector: Vector::B, index }
    }
    pub fn alpha(index: usize) -> Self {
        Self { vector: Vector::Alpha, index }
    }
}

impl std::fmt::Display for SlotRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v = match self.vector {
            Vector::A => "a",
            Vector::B => "b",
            Vector::Alpha => "alpha",
        };
        write!(f, "{v}_{}", self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SlotBound {
    /// `|x| <= Y^exponent`.
    Free {
        #[serde(serialize_with = "serialize_rational")]
        exponent: Rational,
    },
    /// Value fixed by the caller.
    Pinned,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoxSlot {
    pub slot: SlotRef,
    pub bound: SlotBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientBox {
    #[serde(serialize_with = "serialize_rational")]
    pub y: Rational,
    pub a_len: usize,
    pub b_len: usize,
    pub alpha_len: usize,
    pub slots: Vec<BoxSlot>,
    /// Pinned slots that must stay nonzero for F to keep degree n.
    pub nonzero: Vec<SlotRef>,
}

impl CoefficientBox {
    pub fn bound(&self, slot: SlotRef) -> &SlotBound {
        &self.slots.iter().find(|s| s.slot == slot).expect("slot in box").bound
    }

    pub fn free_slots(&self) -> impl Iterator<Item = (SlotRef, &Rational)> {
        self.slots.iter().filter_map(|s| match &s.bound {
            SlotBound::Free { exponent } => Some((s.slot, exponent)),
            SlotBound::Pinned => None,
        })
    }

    pub fn pinned_slots(&self) -> impl Iterator<Item = SlotRef> + '_ {
        self.slots
            .iter()
            .filter(|s| s.bound == SlotBound::Pinned)
            .map(|s| s.slot)
    }

    /// Sum of the free exponents: the box holds on the order of Y^c points.
    pub fn exponent_sum(&self) -> Rational {
        self.free_slots().map(|(_, e)| e.clone()).sum()
    }

    /// Largest integer x with |x| <= Y^e.
    pub fn max_abs(&self, exponent: &Rational) -> BigInt {
        let p = exponent.numer().clone();
        let q = exponent.denom().clone();
        let p: u32 = p.try_into().expect("small exponent");
        let q: u32 = q.try_into().expect("small exponent");
        let yp = num_traits::pow(self.y.clone(), p as usize);
        root_floor(&yp.floor().to_integer(), q)
    }

    /// Checks the free coordinates of `spec` against their bounds, exactly.
    pub fn contains(&self, spec: &SpecializationVector) -> bool {
        if (spec.a.len(), spec.b.len(), spec.alpha.len()) != (self.a_len, self.b_len, self.alpha_len) {
            return false;
        }
        self.free_slots().all(|(slot, e)| {
            let p: u32 = e.numer().try_into().unwrap();
            let q: u32 = e.denom().try_into().unwrap();
            abs_pow_le(spec.get(slot), q, &self.y, p)
        })
    }

    pub fn describe(&self) -> Vec<String> {
        self.slots
            .iter()
            .map(|s| match &s.bound {
                SlotBound::Free { exponent } => format!("|{}| <= Y^{}", s.slot, rational_string(exponent)),
                SlotBound::Pinned => format!("{} pinned", s.slot),
            })
            .collect()
    }
}

fn ratio(p: u64, q: u64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// The box of a generic plan. Leading coefficients and gamma are pinned.
pub fn coefficient_box(plan: &DegreePlan, y: &Rational) -> CoefficientBox {
    let (m, k) = (plan.m, plan.k);
    let top = plan.deg_g as usize;
    let hb = plan.deg_h as usize;
    let mut slots = Vec::new();
    if plan.m_divides_n() {
        slots.push(BoxSlot { slot: SlotRef::a(top), bound: SlotBound::Pinned });
        for i in 1..=top {
            slots.push(BoxSlot { slot: SlotRef::a(top - i), bound: SlotBound::Free { exponent: ratio(i as u64, 1) } });
        }
        for j in 0..=hb {
            let bound = if j == 0 && k == 0 {
                SlotBound::Pinned
            } else {
                SlotBound::Free { exponent: ratio(j as u64 * m + k, m) }
            };
            slots.push(BoxSlot { slot: SlotRef::b(hb - j), bound });
        }
    } else {
        for i in 0..=top {
            slots.push(BoxSlot { slot: SlotRef::a(top - i), bound: SlotBound::Free { exponent: ratio(i as u64 * m + k, m) } });
        }
        slots.push(BoxSlot { slot: SlotRef::b(hb), bound: SlotBound::Pinned });
        for j in 1..=hb {
            slots.push(BoxSlot { slot: SlotRef::b(hb - j), bound: SlotBound::Free { exponent: ratio(j as u64, 1) } });
        }
    }
    let alpha_len = plan.deg_gamma as usize + 1;
    for j in 0..alpha_len {
        slots.push(BoxSlot { slot: SlotRef::alpha(j), bound: SlotBound::Pinned });
    }
    let lead = if plan.m_divides_n() { SlotRef::a(top) } else { SlotRef::b(hb) };
    let nonzero = vec![lead, SlotRef::alpha(alpha_len - 1)];
    CoefficientBox { y: y.clone(), a_len: top + 1, b_len: hb + 1, alpha_len, slots, nonzero }
}

/// The box of a point plan, over the free specialization (non-eliminated a's, all b's, gamma with beta last).
pub fn coefficient_box_point(plan: &PointPlan, y: &Rational) -> CoefficientBox {
    let mk = (plan.m - plan.k) as usize;
    let top_a = plan.top_free_a() as usize;
    let hb = plan.deg_h as usize;
    let mut slots = vec![BoxSlot { slot: SlotRef::a(top_a), bound: SlotBound::Pinned }];
    for i in 1..=top_a {
        slots.push(BoxSlot { slot: SlotRef::a(top_a - i), bound: SlotBound::Free { exponent: ratio(i as u64, 1) } });
    }
    for j in 0..=hb {
        let bound = if j <= mk {
            SlotBound::Pinned
        } else {
            SlotBound::Free { exponent: ratio((j - mk) as u64, 1) }
        };
        slots.push(BoxSlot { slot: SlotRef::b(hb - j), bound });
    }
    let alpha_len = plan.r as usize + 1;
    for j in 0..alpha_len {
        slots.push(BoxSlot { slot: SlotRef::alpha(j), bound: SlotBound::Pinned });
    }
    let nonzero = vec![SlotRef::b(hb), SlotRef::alpha(alpha_len - 1)];
    CoefficientBox { y: y.clone(), a_len: top_a + 1, b_len: hb + 1, alpha_len, slots, nonzero }
}

/// Coefficient-size constants valid for every specialization in a generic box with Y >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoxBounds {
    /// `|F_i| <= A_i Y^(n-i)`.
    #[serde(with = "crate::arith::bigint_vec")]
    pub coefficient_constants: Vec<BigInt>,
    /// Every root has absolute value at most `A Y`.
    #[serde(serialize_with = "serialize_rational")]
    pub root_constant: Rational,
    /// `|disc F| <= B Y^(n(n-1))`.
    #[serde(serialize_with = "serialize_rational")]
    pub disc_constant: Rational,
}

/// Polynomial in t whose coefficients are sums `const * Y^e`.
type Majorant = Vec<BTreeMap<Rational, BigInt>>;

fn maj_mul(x: &Majorant, y: &Majorant) -> Majorant {
    if x.is_empty() || y.is_empty() {
        return Vec::new();
    }
    let mut out: Majorant = vec![BTreeMap::new(); x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        for (j, b) in y.iter().enumerate() {
            for (ea, ca) in a {
                for (eb, cb) in b {
                    *out[i + j].entry(ea + eb).or_insert_with(BigInt::zero) += ca * cb;
                }
            }
        }
    }
    out
}

fn maj_add(x: &Majorant, y: &Majorant) -> Majorant {
    let mut out = x.clone();
    if out.len() < y.len() {
        out.resize(y.len(), BTreeMap::new());
    }
    for (i, b) in y.iter().enumerate() {
        for (e, c) in b {
            *out[i].entry(e.clone()).or_insert_with(BigInt::zero) += c;
        }
    }
    out
}

fn maj_pow(x: &Majorant, k: u64) -> Majorant {
    let mut out: Majorant = vec![BTreeMap::from([(Rational::zero(), BigInt::one())])];
    for _ in 0..k {
        out = maj_mul(&out, x);
    }
    out
}

/// Derives the constants of [`BoxBounds`] from the box and the pinned values in `pinned`.
pub fn box_bounds(
    curve: &Curve,
    plan: &DegreePlan,
    bx: &CoefficientBox,
    pinned: &SpecializationVector,
) -> Result<BoxBounds, FamilyError> {
    let n = plan.n as usize;
    let entry = |slot: SlotRef| -> BTreeMap<Rational, BigInt> {
        match bx.bound(slot) {
            SlotBound::Free { exponent } => BTreeMap::from([(exponent.clone(), BigInt::one())]),
            SlotBound::Pinned => BTreeMap::from([(Rational::zero(), pinned.get(slot).abs())]),
        }
    };
    let g: Majorant = (0..bx.a_len).map(|i| entry(SlotRef::a(i))).collect();
    let h: Majorant = (0..bx.b_len).map(|j| entry(SlotRef::b(j))).collect();
    let gamma: Majorant = (0..bx.alpha_len).map(|j| entry(SlotRef::alpha(j))).collect();
    let mut f_of_gamma: Majorant = Vec::new();
    for c in curve.f().coeffs().iter().rev() {
        let cst: Majorant = vec![BTreeMap::from([(Rational::zero(), c.abs())])];
        f_of_gamma = maj_add(&maj_mul(&f_of_gamma, &gamma), &cst);
    }
    let total = maj_add(&maj_mul(&maj_pow(&h, plan.m), &f_of_gamma), &maj_pow(&g, plan.m));

    let mut constants = vec![BigInt::zero(); n + 1];
    for (i, terms) in total.iter().enumerate() {
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            if i > n || *e > Rational::from_integer(BigInt::from(n - i)) {
                return Err(FamilyError::WeightViolated { index: i });
            }
            constants[i] += c;
        }
    }
    let lead = super::build_F(curve, pinned).coeff(n);
    if lead.is_zero() {
        return Err(FamilyError::ZeroLeadingData);
    }
    // |lc| >= 1, so each Fujiwara term is at most (A_{n-i})^(1/i) Y.
    let mut best = Rational::zero();
    for i in 1..=n {
        let mut q = Rational::from_integer(constants[n - i].clone());
        if i == n {
            q /= Rational::from_integer(BigInt::from(2));
        }
        let r = rational_root_up(&q, i as u32);
        if r > best {
            best = r;
        }
    }
    let slack = Rational::new(BigInt::from(2), BigInt::one() << FUJIWARA_SCALE_BITS);
    let root_constant = best * Rational::from_integer(BigInt::from(2)) + slack;
    let two_a = &root_constant * Rational::from_integer(BigInt::from(2));
    let disc_constant = num_traits::pow(Rational::from_integer(constants[n].clone()), 2 * n - 2)
        * num_traits::pow(two_a, n * (n - 1));
    Ok(BoxBounds { coefficient_constants: constants, root_constant, disc_constant })
}

/// Exact check `|x| <= c * Y^e` for integer e >= 0.
pub fn within(x: &BigInt, c: &BigInt, y: &Rational, e: usize) -> bool {
    Rational::from_integer(x.abs()) <= Rational::from_integer(c.clone()) * num_traits::pow(y.clone(), e)
}
