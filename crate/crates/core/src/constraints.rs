//! Residue-class recipes that force a prescribed Newton polygon, the prime
//! searches they rely on, and seeded sampling from a recipe inside a box.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{discriminant, is_prime, next_prime, valuation_unchecked, IntPolynomial, Valuation};
use crate::family::{CoefficientBox, SlotBound, SlotRef, SpecializationVector};
use crate::newton::NewtonPolygon;
use crate::planner::{Curve, DegreePlan, PointPlan};

/// Default upper bound on the primes scanned by the searches.
pub const DEFAULT_PRIME_BUDGET: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstraintError {
    #[error("no suitable prime below {bound}")]
    SearchBudgetExceeded { bound: u64 },
    #[error("polynomial must be nonconstant and squarefree")]
    BadPolynomial,
    #[error("cycle length {ell} outside [1, {max}]")]
    BadLength { ell: u64, max: u64 },
    #[error("recipe {recipe} does not apply when gcd(m, n) = {gcd} (m = {m}, n = {n})")]
    CaseMismatch { recipe: String, m: u64, n: u64, gcd: u64 },
    #[error("c0 = 0: the short-cycle witness is vacuous")]
    TrivialWitness,
    #[error("no value of {slot} satisfies its constraints inside the box")]
    Unsatisfiable { slot: SlotRef },
    #[error("two constraints on {slot} at p = {p}")]
    Conflict { slot: SlotRef, p: u64 },
    #[error("specialization has the wrong shape for the box")]
    Shape,
}

/// One condition on one coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConstraintKind {
    ValuationAtLeast { p: u64, v: u32 },
    ValuationEquals { p: u64, v: u32 },
    Residue {
        p: u64,
        e: u32,
        #[serde(with = "crate::arith::bigint_string")]
        c: BigInt,
    },
    Pinned {
        #[serde(with = "crate::arith::bigint_string")]
        value: BigInt,
    },
    Unconstrained,
}

impl ConstraintKind {
    pub fn prime(&self) -> Option<u64> {
        match self {
            Self::ValuationAtLeast { p, .. } | Self::ValuationEquals { p, .. } | Self::Residue { p, .. } => Some(*p),
            _ => None,
        }
    }

    /// Direct check, independent of the residue sets used for sampling.
    pub fn holds(&self, x: &BigInt) -> bool {
        match self {
            Self::ValuationAtLeast { p, v } => valuation_unchecked(x, *p) >= Valuation::Finite(*v),
            Self::ValuationEquals { p, v } => valuation_unchecked(x, *p) == Valuation::Finite(*v),
            Self::Residue { p, e, c } => {
                let q = BigInt::from(*p).pow(*e);
                (x - c).mod_floor(&q).is_zero()
            }
            Self::Pinned { value } => x == value,
            Self::Unconstrained => true,
        }
    }

    /// The allowed residues, as `(modulus, sorted residues)`.
    fn residues(&self) -> Option<(BigInt, Vec<BigInt>)> {
        match self {
            Self::ValuationAtLeast { p, v } => Some((BigInt::from(*p).pow(*v), vec![BigInt::zero()])),
            Self::ValuationEquals { p, v } => {
                let base = BigInt::from(*p).pow(*v);
                let units = (1..*p).map(|u| &base * u).collect();
                Some((base * p, units))
            }
            Self::Residue { p, e, c } => {
                let q = BigInt::from(*p).pow(*e);
                let r = c.mod_floor(&q);
                Some((q, vec![r]))
            }
            Self::Pinned { .. } | Self::Unconstrained => None,
        }
    }
}

impl fmt::Display for ConstraintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ValuationAtLeast { p, v } => write!(f, "v_{p} >= {v}"),
            Self::ValuationEquals { p, v } => write!(f, "v_{p} = {v}"),
            Self::Residue { p, e, c } => write!(f, "= {c} mod {p}^{e}"),
            Self::Pinned { value } => write!(f, "= {value}"),
            Self::Unconstrained => write!(f, "free"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientConstraint {
    pub target: SlotRef,
    #[serde(flatten)]
    pub kind: ConstraintKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Recipe {
    ShortCycle { ell: u64 },
    ATransitive,
    ALong,
    BTransitive,
    BLong,
    CIrred,
    CLong,
    PointLong,
}

impl Recipe {
    pub fn name(&self) -> String {
        match self {
            Self::ShortCycle { ell } => format!("short-cycle-{ell}"),
            Self::ATransitive => "a-transitive".into(),
            Self::ALong => "a-long".into(),
            Self::BTransitive => "b-transitive".into(),
            Self::BLong => "b-long".into(),
            Self::CIrred => "c-irred".into(),
            Self::CLong => "c-long".into(),
            Self::PointLong => "point-long".into(),
        }
    }
}

impl std::str::FromStr for Recipe {
    type Err = String;

    /// Accepts the names produced by [`Recipe::name`].
    fn from_str(s: &str) -> Result<Self, String> {
        if let Some(ell) = s.strip_prefix("short-cycle-") {
            let ell = ell.parse().map_err(|_| format!("bad cycle length in {s}"))?;
            return Ok(Self::ShortCycle { ell });
        }
        Ok(match s {
            "a-transitive" => Self::ATransitive,
            "a-long" => Self::ALong,
            "b-transitive" => Self::BTransitive,
            "b-long" => Self::BLong,
            "c-irred" => Self::CIrred,
            "c-long" => Self::CLong,
            "point-long" => Self::PointLong,
            _ => return Err(format!("unknown recipe {s}")),
        })
    }
}

/// Expected polygon at one prime: either the full vertex list or a prefix of it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictedPolygon {
    pub p: u64,
    pub vertices: Vec<(usize, i64)>,
    pub exact: bool,
}

impl PredictedPolygon {
    pub fn matches(&self, np: &NewtonPolygon) -> bool {
        if np.p != self.p {
            return false;
        }
        if self.exact {
            np.vertices == self.vertices
        } else {
            np.vertices.starts_with(&self.vertices)
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PredictedCertificates {
    pub cycles: Vec<usize>,
    pub irreducible: bool,
    /// Every rational factor has degree divisible by this.
    pub factor_degree_divisor: Option<usize>,
    /// Degree of an irreducible p-adic factor.
    pub local_factor: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintSet {
    pub recipe: String,
    pub primes: Vec<u64>,
    pub constraints: Vec<CoefficientConstraint>,
    pub predicted: Vec<PredictedPolygon>,
    pub certificates: PredictedCertificates,
    /// Set for point recipes whose plan leaves too few free coefficients for the short-cycle argument.
    pub certification_too_small: bool,
}

impl ConstraintSet {
    fn new(recipe: String, p: u64) -> Self {
        Self {
            recipe,
            primes: vec![p],
            constraints: Vec::new(),
            predicted: Vec::new(),
            certificates: PredictedCertificates::default(),
            certification_too_small: false,
        }
    }

    fn push(&mut self, target: SlotRef, kind: ConstraintKind) {
        self.constraints.push(CoefficientConstraint { target, kind });
    }

    fn predict(&mut self, vertices: Vec<(usize, i64)>, exact: bool) {
        let p = self.primes[0];
        self.predicted.push(PredictedPolygon { p, vertices, exact });
    }

    pub fn on(&self, slot: SlotRef) -> impl Iterator<Item = &ConstraintKind> {
        self.constraints.iter().filter(move |c| c.target == slot).map(|c| &c.kind)
    }

    /// The first constraint violated by `spec`, if any. Slots outside `spec` count as violated.
    pub fn violation(&self, spec: &SpecializationVector) -> Option<SlotRef> {
        self.constraints.iter().find_map(|c| {
            let len = match c.target.vector {
                crate::family::Vector::A => spec.a.len(),
                crate::family::Vector::B => spec.b.len(),
                crate::family::Vector::Alpha => spec.alpha.len(),
            };
            if c.target.index >= len || !c.kind.holds(spec.get(c.target)) {
                Some(c.target)
            } else {
                None
            }
        })
    }

    pub fn describe(&self) -> Vec<String> {
        self.constraints.iter().map(|c| format!("{} {}", c.target, c.kind)).collect()
    }
}

/// Union of two recipes. Fails if both constrain the same slot at the same prime.
pub fn merge(a: &ConstraintSet, b: &ConstraintSet) -> Result<ConstraintSet, ConstraintError> {
    let mut out = a.clone();
    for c in &b.constraints {
        if let Some(p) = c.kind.prime() {
            if a.constraints.iter().any(|d| d.target == c.target && d.kind.prime() == Some(p)) {
                return Err(ConstraintError::Conflict { slot: c.target, p });
            }
        }
        out.constraints.push(c.clone());
    }
    out.recipe = format!("{}+{}", a.recipe, b.recipe);
    for p in &b.primes {
        if !out.primes.contains(p) {
            out.primes.push(*p);
        }
    }
    out.predicted.extend(b.predicted.iter().cloned());
    let cb = &b.certificates;
    out.certificates.cycles.extend(cb.cycles.iter().copied());
    out.certificates.irreducible |= cb.irreducible;
    out.certificates.factor_degree_divisor = out.certificates.factor_degree_divisor.or(cb.factor_degree_divisor);
    out.certificates.local_factor = out.certificates.local_factor.or(cb.local_factor);
    out.certification_too_small |= b.certification_too_small;
    Ok(out)
}

fn divides_any(p: u64, exclusions: &[BigInt]) -> bool {
    exclusions.iter().any(|e| !e.is_zero() && (e % p).is_zero())
}

fn eval_mod(f: &IntPolynomial, x: u64, p: u64) -> u64 {
    let pb = BigInt::from(p);
    f.coeffs().iter().rev().fold(0u64, |acc, c| {
        let c = c.mod_floor(&pb).iter_u64_digits().next().unwrap_or(0);
        ((acc as u128 * x as u128 + c as u128) % p as u128) as u64
    })
}

/// Smallest prime `p > above`, not dividing any nonzero exclusion nor disc f, with an
/// integer `x0` such that `v_p(f(x0)) = 1`. Roots are scanned from 0 upwards; a root with
/// `p^2 | f(x0)` is replaced by `x0 + p`.
pub fn find_prime_exact_division(
    f: &IntPolynomial,
    exclusions: &[BigInt],
    above: u64,
    budget: u64,
) -> Result<(u64, BigInt), ConstraintError> {
    if f.degree().unwrap_or(0) == 0 || !f.is_squarefree().unwrap_or(false) {
        return Err(ConstraintError::BadPolynomial);
    }
    let disc = discriminant(f).map_err(|_| ConstraintError::BadPolynomial)?;
    let mut p = next_prime(above);
    while p <= budget {
        if !divides_any(p, exclusions) && !(&disc % p).is_zero() {
            for x in 0..p {
                if eval_mod(f, x, p) != 0 {
                    continue;
                }
                for cand in [BigInt::from(x), BigInt::from(x + p)] {
                    if valuation_unchecked(&f.eval(&cand), p) == Valuation::Finite(1) {
                        return Ok((p, cand));
                    }
                }
            }
        }
        p = next_prime(p);
    }
    Err(ConstraintError::SearchBudgetExceeded { bound: budget })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PowerResidueWitness {
    Found {
        p: u64,
        #[serde(with = "crate::arith::bigint_string")]
        a0: BigInt,
    },
    /// `c0 = 0`, where the claim is vacuous.
    Trivial,
}

/// A prime `p > max(floor, |c0|, m)` and `a0` with `a0^m = c0 (mod p)` and `p^2` not dividing `a0^m - c0`.
pub fn find_mth_power_residue_prime(
    c0: &BigInt,
    m: u64,
    floor: u64,
    exclusions: &[BigInt],
    budget: u64,
) -> Result<PowerResidueWitness, ConstraintError> {
    if c0.is_zero() {
        return Ok(PowerResidueWitness::Trivial);
    }
    let f = &IntPolynomial::monomial(BigInt::one(), m as usize) - &IntPolynomial::constant(c0.clone());
    let c_abs: u64 = c0.abs().try_into().unwrap_or(u64::MAX);
    let above = floor.max(c_abs).max(m);
    if above >= budget {
        return Err(ConstraintError::SearchBudgetExceeded { bound: budget });
    }
    let (p, a0) = find_prime_exact_division(&f, exclusions, above, budget)?;
    Ok(PowerResidueWitness::Found { p, a0 })
}

/// Short-cycle conditions for `2 <= ell <= deg g`. The m | n prediction is exact; otherwise only the prefix is forced.
pub fn recipe_short_cycle(plan: &DegreePlan, ell: u64, p: u64, a0: &BigInt) -> Result<ConstraintSet, ConstraintError> {
    if ell == 0 || ell > plan.deg_g {
        return Err(ConstraintError::BadLength { ell, max: plan.deg_g });
    }
    let mut cs = ConstraintSet::new(Recipe::ShortCycle { ell }.name(), p);
    cs.push(SlotRef::a(0), ConstraintKind::Residue { p, e: 2, c: a0.clone() });
    for j in 1..ell {
        cs.push(SlotRef::a(j as usize), ConstraintKind::ValuationAtLeast { p, v: 1 });
    }
    cs.push(SlotRef::a(ell as usize), ConstraintKind::ValuationEquals { p, v: 0 });
    cs.push(SlotRef::b(0), ConstraintKind::Residue { p, e: 2, c: BigInt::one() });
    for j in 1..=plan.deg_h {
        cs.push(SlotRef::b(j as usize), ConstraintKind::ValuationAtLeast { p, v: 2 });
    }
    for j in 0..=plan.deg_gamma {
        cs.push(SlotRef::alpha(j as usize), ConstraintKind::ValuationAtLeast { p, v: 2 });
    }
    let ell = ell as usize;
    let n = plan.n as usize;
    if plan.m_divides_n() {
        let mut v = vec![(0, 1), (ell, 0)];
        if ell < n {
            v.push((n, 0));
        }
        cs.predict(v, true);
    } else {
        cs.predict(vec![(0, 1), (ell, 0)], false);
    }
    if ell >= 2 {
        cs.certificates.cycles.push(ell);
        cs.certificates.local_factor = Some(ell);
    }
    Ok(cs)
}

/// Prime and witness for [`recipe_short_cycle`]: p exceeds n, so it never divides n.
pub fn short_cycle_prime(curve: &Curve, n: u64, budget: u64) -> Result<(u64, BigInt), ConstraintError> {
    let c0 = curve.f().coeff(0);
    match find_mth_power_residue_prime(&c0, curve.m(), n, &[BigInt::from(n)], budget)? {
        PowerResidueWitness::Found { p, a0 } => Ok((p, a0)),
        PowerResidueWitness::Trivial => Err(ConstraintError::TrivialWitness),
    }
}

/// Smallest prime dividing none of `c0 c_d n` (zero factors ignored).
fn case_a_prime(curve: &Curve, n: u64, budget: u64) -> Result<u64, ConstraintError> {
    let f = curve.f();
    let excl = [f.coeff(0), f.leading().unwrap().clone(), BigInt::from(n)];
    let mut p = 2;
    while p <= budget {
        if !divides_any(p, &excl) {
            return Ok(p);
        }
        p = next_prime(p);
    }
    Err(ConstraintError::SearchBudgetExceeded { bound: budget })
}

fn case_b_prime(curve: &Curve, n: u64, budget: u64) -> Result<(u64, BigInt), ConstraintError> {
    let excl = [curve.f().leading().unwrap().clone(), BigInt::from(n)];
    find_prime_exact_division(curve.f(), &excl, 1, budget)
}

fn check_case(recipe: Recipe, plan: &DegreePlan) -> Result<(), ConstraintError> {
    let (m, n) = (plan.m, plan.n);
    let gcd = m.gcd(&n);
    let ok = match recipe {
        Recipe::ATransitive | Recipe::ALong => gcd == 1,
        Recipe::BTransitive | Recipe::BLong => gcd == m,
        Recipe::CIrred | Recipe::CLong => 1 < gcd && gcd < m,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(ConstraintError::CaseMismatch { recipe: recipe.name(), m, n, gcd })
    }
}

/// The transitivity and long-cycle recipes, split by `gcd(m, n)`.
pub fn recipe_case(curve: &Curve, plan: &DegreePlan, recipe: Recipe, budget: u64) -> Result<ConstraintSet, ConstraintError> {
    check_case(recipe, plan)?;
    let (m, n) = (plan.m as usize, plan.n as usize);
    match recipe {
        Recipe::ATransitive | Recipe::ALong | Recipe::CIrred => {
            let p = case_a_prime(curve, plan.n, budget)?;
            let long = recipe == Recipe::ALong;
            let mut cs = ConstraintSet::new(recipe.name(), p);
            let v = m as u32;
            cs.push(SlotRef::a(0), ConstraintKind::ValuationEquals { p, v: 0 });
            let first = if long {
                cs.push(SlotRef::a(1), ConstraintKind::ValuationEquals { p, v: 0 });
                2
            } else {
                1
            };
            for i in first..=plan.deg_g as usize {
                cs.push(SlotRef::a(i), ConstraintKind::ValuationAtLeast { p, v });
            }
            for j in 0..plan.deg_h as usize {
                cs.push(SlotRef::b(j), ConstraintKind::ValuationAtLeast { p, v });
            }
            cs.push(SlotRef::b(plan.deg_h as usize), ConstraintKind::ValuationEquals { p, v: 1 });
            cs.push(SlotRef::alpha(plan.deg_gamma as usize), ConstraintKind::ValuationEquals { p, v: 0 });
            if long {
                cs.predict(vec![(0, 0), (m, 0), (n, m as i64)], true);
                cs.certificates.cycles.push(n - m);
                cs.certificates.local_factor = Some(n - m);
            } else {
                cs.predict(vec![(0, 0), (n, m as i64)], true);
                let divisor = n / m.gcd(&n);
                cs.certificates.factor_degree_divisor = Some(divisor);
                if divisor == n {
                    cs.certificates.irreducible = true;
                    cs.certificates.cycles.push(n);
                    cs.certificates.local_factor = Some(n);
                }
            }
            Ok(cs)
        }
        Recipe::BTransitive | Recipe::BLong | Recipe::CLong => {
            let (p, x0) = case_b_prime(curve, plan.n, budget)?;
            let mut cs = ConstraintSet::new(recipe.name(), p);
            let top = plan.deg_g as usize;
            let units_from = if recipe == Recipe::BLong { top - 1 } else { top };
            for i in 0..units_from {
                cs.push(SlotRef::a(i), ConstraintKind::ValuationAtLeast { p, v: 1 });
            }
            for i in units_from..=top {
                cs.push(SlotRef::a(i), ConstraintKind::ValuationEquals { p, v: 0 });
            }
            for j in 0..=plan.deg_h as usize {
                cs.push(SlotRef::b(j), ConstraintKind::ValuationEquals { p, v: 0 });
            }
            cs.push(SlotRef::alpha(0), ConstraintKind::Residue { p, e: 2, c: x0 });
            for j in 1..=plan.deg_gamma as usize {
                cs.push(SlotRef::alpha(j), ConstraintKind::ValuationAtLeast { p, v: 1 });
            }
            match recipe {
                Recipe::BTransitive => {
                    cs.predict(vec![(0, 1), (n, 0)], true);
                    cs.certificates.irreducible = true;
                    cs.certificates.cycles.push(n);
                    cs.certificates.local_factor = Some(n);
                }
                Recipe::BLong => {
                    cs.predict(vec![(0, 1), (n - m, 0), (n, 0)], true);
                    cs.certificates.cycles.push(n - m);
                    cs.certificates.local_factor = Some(n - m);
                }
                _ => {
                    let ell = m * top;
                    cs.predict(vec![(0, 1), (ell, 0)], false);
                    cs.certificates.cycles.push(ell);
                    cs.certificates.local_factor = Some(ell);
                }
            }
            Ok(cs)
        }
        _ => Err(ConstraintError::CaseMismatch { recipe: recipe.name(), m: plan.m, n: plan.n, gcd: plan.m.gcd(&plan.n) }),
    }
}

/// Long-cycle recipe for the point family. `alpha[r]` is the base beta of gamma's leading coefficient.
pub fn recipe_point_long(curve: &Curve, plan: &PointPlan, budget: u64) -> Result<ConstraintSet, ConstraintError> {
    let excl = [curve.f().leading().unwrap().clone(), BigInt::from(plan.n)];
    let (p, x0) = find_prime_exact_division(curve.f(), &excl, 1, budget)?;
    let mut cs = ConstraintSet::new(Recipe::PointLong.name(), p);
    let top = plan.top_free_a() as usize;
    for i in 0..top {
        cs.push(SlotRef::a(i), ConstraintKind::ValuationAtLeast { p, v: 1 });
    }
    cs.push(SlotRef::a(top), ConstraintKind::ValuationEquals { p, v: 0 });
    cs.push(SlotRef::b(0), ConstraintKind::ValuationEquals { p, v: 0 });
    for j in 1..=plan.deg_h as usize {
        cs.push(SlotRef::b(j), ConstraintKind::ValuationAtLeast { p, v: 1 });
    }
    cs.push(SlotRef::alpha(0), ConstraintKind::Residue { p, e: 2, c: x0 });
    for j in 1..=plan.r as usize {
        cs.push(SlotRef::alpha(j), ConstraintKind::ValuationAtLeast { p, v: 1 });
    }
    let len = plan.long_segment_length() as usize;
    cs.predict(vec![(0, 1), (len, 0)], false);
    if len >= 2 {
        cs.certificates.cycles.push(len);
        cs.certificates.local_factor = Some(len);
    }
    cs.certification_too_small = plan.certification_too_small;
    Ok(cs)
}

/// Allowed residues for one slot, combined over primes by CRT.
fn slot_residues(kinds: &[&ConstraintKind]) -> (BigInt, Vec<BigInt>) {
    let mut modulus = BigInt::one();
    let mut residues = vec![BigInt::zero()];
    for kind in kinds {
        let Some((q, rs)) = kind.residues() else { continue };
        // x = r1 (mod modulus), x = r2 (mod q), coprime moduli
        let inv = mod_inverse(&modulus, &q);
        let mut next = Vec::with_capacity(residues.len() * rs.len());
        for r1 in &residues {
            for r2 in &rs {
                let t = ((r2 - r1) * &inv).mod_floor(&q);
                next.push(r1 + &modulus * t);
            }
        }
        modulus *= &q;
        next.sort();
        residues = next;
    }
    (modulus, residues)
}

fn mod_inverse(a: &BigInt, q: &BigInt) -> BigInt {
    let e = a.extended_gcd(q);
    debug_assert!(e.gcd.is_one(), "moduli from distinct primes are coprime");
    e.x.mod_floor(q)
}

/// Number of x in [lo, hi] with x = r (mod q).
fn class_count(lo: &BigInt, hi: &BigInt, r: &BigInt, q: &BigInt) -> BigInt {
    let top = (hi - r).div_floor(q);
    let bottom = (lo - BigInt::one() - r).div_floor(q);
    (top - bottom).max(BigInt::zero())
}

/// Smallest |x| satisfying every kind (positive first), optionally skipping zero.
fn pinned_value(kinds: &[&ConstraintKind], nonzero: bool) -> Option<BigInt> {
    if let Some(ConstraintKind::Pinned { value }) = kinds.iter().find(|k| matches!(k, ConstraintKind::Pinned { .. })) {
        let ok = kinds.iter().all(|k| k.holds(value)) && !(nonzero && value.is_zero());
        return ok.then(|| value.clone());
    }
    let (q, _) = slot_residues(kinds);
    let limit = &q + BigInt::one();
    let mut x = BigInt::zero();
    while x <= limit {
        for cand in [x.clone(), -x.clone()] {
            if nonzero && cand.is_zero() {
                continue;
            }
            if kinds.iter().all(|k| k.holds(&cand)) {
                return Some(cand);
            }
        }
        x += 1;
    }
    None
}

/// Values the engine gives to the box's pinned slots.
pub fn pinned_values(cs: &ConstraintSet, bx: &CoefficientBox) -> Result<BTreeMap<SlotRef, BigInt>, ConstraintError> {
    let mut out = BTreeMap::new();
    for slot in bx.pinned_slots() {
        let kinds: Vec<&ConstraintKind> = cs.on(slot).collect();
        let v = pinned_value(&kinds, bx.nonzero.contains(&slot)).ok_or(ConstraintError::Unsatisfiable { slot })?;
        out.insert(slot, v);
    }
    Ok(out)
}

/// Draws a specialization uniformly from the constrained lattice points of the box.
/// The generator is keyed by `(seed, index)`, so samples can be drawn in any order.
pub fn sample(cs: &ConstraintSet, bx: &CoefficientBox, seed: u64, index: u64) -> Result<SpecializationVector, ConstraintError> {
    let pinned = pinned_values(cs, bx)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut spec = SpecializationVector {
        a: vec![BigInt::zero(); bx.a_len],
        b: vec![BigInt::zero(); bx.b_len],
        alpha: vec![BigInt::zero(); bx.alpha_len],
    };
    for slot in &bx.slots {
        let value = match &slot.bound {
            SlotBound::Pinned => pinned[&slot.slot].clone(),
            SlotBound::Free { exponent } => {
                let kinds: Vec<&ConstraintKind> = cs.on(slot.slot).collect();
                let hi = bx.max_abs(exponent);
                let lo = -hi.clone();
                if let Some(ConstraintKind::Pinned { value }) =
                    kinds.iter().find(|k| matches!(k, ConstraintKind::Pinned { .. }))
                {
                    if value.abs() > hi || !kinds.iter().all(|k| k.holds(value)) {
                        return Err(ConstraintError::Unsatisfiable { slot: slot.slot });
                    }
                    value.clone()
                } else {
                    let (q, residues) = slot_residues(&kinds);
                    let counts: Vec<BigInt> = residues.iter().map(|r| class_count(&lo, &hi, r, &q)).collect();
                    let total: BigInt = counts.iter().sum();
                    if total.is_zero() {
                        return Err(ConstraintError::Unsatisfiable { slot: slot.slot });
                    }
                    let mut u = rng.gen_bigint_range(&BigInt::zero(), &total);
                    let mut chosen = None;
                    for (r, c) in residues.iter().zip(&counts) {
                        if u < *c {
                            let first = r + (&lo - r).div_ceil(&q) * &q;
                            chosen = Some(first + u * &q);
                            break;
                        }
                        u -= c;
                    }
                    chosen.expect("u < total")
                }
            }
        };
        match slot.slot.vector {
            crate::family::Vector::A => spec.a[slot.slot.index] = value,
            crate::family::Vector::B => spec.b[slot.slot.index] = value,
            crate::family::Vector::Alpha => spec.alpha[slot.slot.index] = value,
        }
    }
    debug_assert!(cs.violation(&spec).is_none());
    Ok(spec)
}

/// True if `p` is prime and divides none of the nonzero exclusions.
pub fn admissible_prime(p: u64, exclusions: &[BigInt]) -> bool {
    is_prime(p) && !divides_any(p, exclusions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_int;
    use crate::family::coefficient_box;
    use crate::planner::plan_degrees_md;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn exact_division_examples() {
        assert_eq!(find_prime_exact_division(&poly(&[1, 0, 1]), &[], 1, 1000).unwrap(), (5, BigInt::from(2)));
        assert_eq!(find_prime_exact_division(&poly(&[0, 1]), &[], 1, 1000).unwrap(), (2, BigInt::from(2)));
        assert_eq!(find_prime_exact_division(&poly(&[1, 1, 1]), &[], 1, 2), Err(ConstraintError::SearchBudgetExceeded { bound: 2 }));
    }

    #[test]
    fn power_residue_examples() {
        let w = find_mth_power_residue_prime(&BigInt::from(1), 2, 2, &[], 1000).unwrap();
        assert_eq!(w, PowerResidueWitness::Found { p: 3, a0: BigInt::from(4) });
        let w = find_mth_power_residue_prime(&BigInt::from(2), 2, 2, &[], 1000).unwrap();
        assert_eq!(w, PowerResidueWitness::Found { p: 7, a0: BigInt::from(3) });
        let w = find_mth_power_residue_prime(&BigInt::zero(), 3, 2, &[], 1000).unwrap();
        assert_eq!(w, PowerResidueWitness::Trivial);
    }

    #[test]
    fn crt_residues() {
        let a = ConstraintKind::ValuationEquals { p: 2, v: 0 };
        let b = ConstraintKind::Residue { p: 3, e: 1, c: BigInt::from(2) };
        let (q, r) = slot_residues(&[&a, &b]);
        assert_eq!(q, BigInt::from(6));
        assert_eq!(r, vec![BigInt::from(5)]);
        assert_eq!(class_count(&BigInt::from(-10), &BigInt::from(10), &BigInt::from(5), &q), BigInt::from(3));
    }

    #[test]
    fn sampling_respects_constraints() {
        let plan = plan_degrees_md(2, 3, 6).unwrap();
        let bx = coefficient_box(&plan, &rat_int(10));
        let cs = recipe_short_cycle(&plan, 2, 7, &BigInt::from(8)).unwrap();
        for i in 0..20 {
            let s = sample(&cs, &bx, 1, i).unwrap();
            assert!(cs.violation(&s).is_none());
            assert!(bx.contains(&s));
            assert_eq!(s, sample(&cs, &bx, 1, i).unwrap());
        }
        let tiny = coefficient_box(&plan, &rat_int(1));
        assert_eq!(sample(&cs, &tiny, 1, 0), Err(ConstraintError::Unsatisfiable { slot: SlotRef::a(0) }));
    }
}
