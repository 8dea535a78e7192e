//! Degree bookkeeping for the family `F = h^m f(gamma) - g^m`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{serialize_rational, IntPolynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("m must be at least 2, got {0}")]
    ExponentTooSmall(u64),
    #[error("need deg f >= m, got d = {d}, m = {m}")]
    DegreeBelowExponent { m: u64, d: u64 },
    #[error("f is not squarefree")]
    NotSquarefree,
    #[error("gcd(m, d) = {gcd} does not divide n = {n}")]
    NotMultipleOfGcd { n: u64, gcd: u64 },
    #[error("n = {n} is below the minimum {min}")]
    DegreeTooSmall { n: u64, min: u64 },
    #[error("gcd(m, d) = {gcd} divides n = {n}; use the generic plan")]
    GcdDivides { n: u64, gcd: u64 },
    #[error("s = {s} is below rd/m = {need}")]
    TooSmall { s: u64, need: u64 },
    #[error("witness does not satisfy y0^m = c_d x0^d")]
    WitnessInvalid,
    #[error("point-case plans need a monic f")]
    NotMonic,
}

/// The curve `y^m = f(x)` with `m >= 2`, `deg f >= m` and `f` squarefree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CurveFile", into = "CurveFile")]
pub struct Curve {
    m: u64,
    f: IntPolynomial,
}

/// On-disk form `{"m": 2, "f": [c0, ..., cd]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveFile {
    pub m: u64,
    pub f: IntPolynomial,
}

impl TryFrom<CurveFile> for Curve {
    type Error = PlanError;
    fn try_from(c: CurveFile) -> Result<Self, PlanError> {
        Curve::new(c.m, c.f)
    }
}

impl From<Curve> for CurveFile {
    fn from(c: Curve) -> Self {
        CurveFile { m: c.m, f: c.f }
    }
}

impl Curve {
    pub fn new(m: u64, f: IntPolynomial) -> Result<Self, PlanError> {
        if m < 2 {
            return Err(PlanError::ExponentTooSmall(m));
        }
        let d = f.degree().unwrap_or(0) as u64;
        if d < m {
            return Err(PlanError::DegreeBelowExponent { m, d });
        }
        if !f.is_squarefree().unwrap_or(false) {
            return Err(PlanError::NotSquarefree);
        }
        Ok(Self { m, f })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn d(&self) -> u64 {
        self.f.degree().unwrap() as u64
    }

    pub fn f(&self) -> &IntPolynomial {
        &self.f
    }

    pub fn is_monic(&self) -> bool {
        self.f.leading().is_some_and(|c| c.is_one())
    }
}

/// `lcm(a, b) - a - b`; negative when one divides the other.
pub fn generalized_frobenius(a: u64, b: u64) -> i64 {
    a.lcm(&b) as i64 - a as i64 - b as i64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlanCase {
    #[serde(rename = "m-divides-n")]
    MDividesN,
    #[serde(rename = "m-ndivides-n")]
    MNotDividesN,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreePlan {
    pub m: u64,
    pub d: u64,
    pub n: u64,
    pub deg_g: u64,
    pub deg_h: u64,
    pub deg_gamma: u64,
    pub r: u64,
    pub k: u64,
    pub case_tag: PlanCase,
}

impl DegreePlan {
    pub fn m_divides_n(&self) -> bool {
        self.case_tag == PlanCase::MDividesN
    }
}

/// Least admissible degree `max(d, Frob(m, d) + 1)`.
pub fn minimum_degree(m: u64, d: u64) -> u64 {
    (d as i64).max(generalized_frobenius(m, d) + 1) as u64
}

/// Least positive `r` with `n = r d (mod m)`, assuming `gcd(m, d) | n`.
pub fn minimal_r(m: u64, d: u64, n: u64) -> u64 {
    (1..=m)
        .find(|&r| (r * d) % m == n % m)
        .expect("gcd(m, d) divides n, so some r < m works")
}

/// Plan for `(m, d, n)` without reference to the coefficients of `f`.
pub fn plan_degrees_md(m: u64, d: u64, n: u64) -> Result<DegreePlan, PlanError> {
    if m < 2 {
        return Err(PlanError::ExponentTooSmall(m));
    }
    if d < m {
        return Err(PlanError::DegreeBelowExponent { m, d });
    }
    let gcd = m.gcd(&d);
    if !n.is_multiple_of(gcd) {
        return Err(PlanError::NotMultipleOfGcd { n, gcd });
    }
    let min = minimum_degree(m, d);
    if n < min {
        return Err(PlanError::DegreeTooSmall { n, min });
    }
    let plan = if n.is_multiple_of(m) {
        DegreePlan {
            m,
            d,
            n,
            deg_g: n / m,
            deg_h: (n - d) / m,
            deg_gamma: 1,
            r: 1,
            k: (n - d) % m,
            case_tag: PlanCase::MDividesN,
        }
    } else {
        let r = minimal_r(m, d, n);
        if r * d > n {
            return Err(PlanError::DegreeTooSmall { n, min: r * d });
        }
        DegreePlan {
            m,
            d,
            n,
            deg_g: n / m,
            deg_h: (n - r * d) / m,
            deg_gamma: r,
            r,
            k: n % m,
            case_tag: PlanCase::MNotDividesN,
        }
    };
    debug_assert_eq!(
        (plan.m * plan.deg_h + plan.d * plan.deg_gamma).max(plan.m * plan.deg_g),
        n
    );
    Ok(plan)
}

pub fn plan_degrees(curve: &Curve, n: u64) -> Result<DegreePlan, PlanError> {
    plan_degrees_md(curve.m(), curve.d(), n)
}

/// Plan for the family that uses a rational point at infinity, when `gcd(m, d)` does not divide `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointPlan {
    pub m: u64,
    pub d: u64,
    pub n: u64,
    pub s: u64,
    /// Least positive r with m | rd.
    pub r: u64,
    pub k: u64,
    pub deg_g: u64,
    pub deg_h: u64,
    pub deg_gamma: u64,
    /// Indices `s - u` of g fixed by the leading-coefficient relations, u = 0..m-k-1.
    pub eliminated: Vec<u64>,
    pub certification_too_small: bool,
}

impl PointPlan {
    pub fn lcm(&self) -> u64 {
        self.m.lcm(&self.d)
    }

    /// Exponent e with leading coefficient of gamma equal to beta^e.
    pub fn gamma_lead_power(&self) -> u64 {
        self.lcm() / self.d
    }

    /// Exponent e with a_s = b_top * beta^e.
    pub fn a_top_power(&self) -> u64 {
        self.lcm() / self.m
    }

    /// Highest index of g that stays free.
    pub fn top_free_a(&self) -> u64 {
        self.s - (self.m - self.k)
    }

    /// Predicted length of the long Newton segment.
    pub fn long_segment_length(&self) -> u64 {
        self.n - (self.m - 1) * (self.m - self.k)
    }
}

pub fn plan_point_case_md(m: u64, d: u64, n: u64) -> Result<PointPlan, PlanError> {
    if m < 2 {
        return Err(PlanError::ExponentTooSmall(m));
    }
    if d < m {
        return Err(PlanError::DegreeBelowExponent { m, d });
    }
    let gcd = m.gcd(&d);
    if n.is_multiple_of(gcd) {
        return Err(PlanError::GcdDivides { n, gcd });
    }
    let s = n / m + 1;
    let r = m / gcd;
    let k = n - (s - 1) * m;
    // g must also hold the m - k eliminated top coefficients.
    let need = (r * d / m).max(m - k);
    if s < need {
        return Err(PlanError::TooSmall { s, need });
    }
    let need = r * d / m;
    let eliminated = (0..m - k).map(|u| s - u).collect();
    let slack = s as i64 - (m - k) as i64;
    let certification_too_small = slack < 2 * (m as i64 - 1) * (m - k) as i64;
    Ok(PointPlan {
        m,
        d,
        n,
        s,
        r,
        k,
        deg_g: s,
        deg_h: s - need,
        deg_gamma: r,
        eliminated,
        certification_too_small,
    })
}

pub fn plan_point_case(curve: &Curve, n: u64) -> Result<PointPlan, PlanError> {
    if !curve.is_monic() {
        return Err(PlanError::NotMonic);
    }
    plan_point_case_md(curve.m(), curve.d(), n)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdInput {
    pub m: u64,
    pub d: u64,
    /// `max(d, lcm - m - d, 2m^2 - m)`.
    pub n0: u64,
    /// Same with `lcm - m - d + 1`.
    pub n0_theorem: u64,
}

impl ThresholdInput {
    pub fn new(m: u64, d: u64) -> Self {
        let frob = generalized_frobenius(m, d);
        let tail = (2 * m * m - m) as i64;
        let n0 = (d as i64).max(frob).max(tail) as u64;
        let n0_theorem = (d as i64).max(frob + 1).max(tail) as u64;
        Self { m, d, n0, n0_theorem }
    }
}

/// An integral monic model of a curve with a rational point at infinity.
#[derive(Debug, Clone, Serialize)]
pub struct MonicModel {
    /// Coefficients of the monic model over Q, low degree first.
    #[serde(serialize_with = "serialize_rational_vec")]
    pub rational_f: Vec<Rational>,
    /// `X = x_scale * x`.
    #[serde(serialize_with = "serialize_rational")]
    pub x_scale: Rational,
    /// `Y = y_scale * y`.
    #[serde(serialize_with = "serialize_rational")]
    pub y_scale: Rational,
    /// Integer-clearing substitution `X = X' / u`, `Y = Y' / w`.
    #[serde(with = "crate::arith::bigint_string")]
    pub u: BigInt,
    #[serde(with = "crate::arith::bigint_string")]
    pub w: BigInt,
    pub k: u64,
    pub ell: u64,
    /// The model `Y'^m = f'(X')` with integer coefficients and monic `f'`.
    pub integral: Curve,
}

fn serialize_rational_vec<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for q in v {
        seq.serialize_element(&crate::arith::rational_string(q))?;
    }
    seq.end()
}

fn rat_pow(q: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        num_traits::pow(q.recip(), (-e) as usize)
    }
}

/// Moves the point at infinity witnessed by `y0^m = c_d x0^d` into a monic model.
pub fn monicize(curve: &Curve, x0: &BigInt, y0: &BigInt) -> Result<MonicModel, PlanError> {
    let m = curve.m();
    let d = curve.d();
    let f = curve.f();
    let cd = f.leading().unwrap().clone();
    if x0.is_zero() || y0.is_zero() || num_traits::pow(y0.clone(), m as usize) != &cd * num_traits::pow(x0.clone(), d as usize) {
        return Err(PlanError::WitnessInvalid);
    }
    let g = m.gcd(&d);
    let (mg, dg) = (m / g, d / g);
    // least ell with k = (ell d/g - 1) / (m/g) a positive integer
    let (k, ell) = (1..)
        .find_map(|ell: u64| {
            let t = ell * dg;
            (t > 1 && (t - 1).is_multiple_of(mg) && (t - 1) / mg >= 1).then(|| ((t - 1) / mg, ell))
        })
        .unwrap();
    // w^g = c_d
    let w = Rational::new(num_traits::pow(y0.clone(), mg as usize), num_traits::pow(x0.clone(), dg as usize));
    let km = (k * m) as i64;
    let rational_f: Vec<Rational> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| Rational::from_integer(c.clone()) * rat_pow(&w, km - (i as i64) * ell as i64))
        .collect();
    debug_assert!(rational_f.last().unwrap().is_one());
    let denom_lcm = rational_f.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let u = num_traits::pow(denom_lcm.clone(), mg as usize);
    let wy = num_traits::pow(denom_lcm, dg as usize);
    let integral_coeffs: Vec<BigInt> = rational_f
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let v = q * Rational::from_integer(num_traits::pow(u.clone(), d as usize - i));
            debug_assert!(v.is_integer());
            v.to_integer()
        })
        .collect();
    let integral = Curve::new(m, IntPolynomial::new(integral_coeffs))?;
    Ok(MonicModel {
        rational_f,
        x_scale: rat_pow(&w, ell as i64),
        y_scale: rat_pow(&w, k as i64),
        u,
        w: wy,
        k,
        ell,
        integral,
    })
}

impl MonicModel {
    /// Evaluates the rational monic model at `x`.
    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.rational_f.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

/// Sign-aware exact check `|x|^q <= y^p` for rational y >= 0.
pub fn abs_pow_le(x: &BigInt, q: u32, y: &Rational, p: u32) -> bool {
    let lhs = num_traits::pow(x.abs(), q as usize) * num_traits::pow(y.denom().clone(), p as usize);
    let rhs = num_traits::pow(y.numer().clone(), p as usize);
    lhs <= rhs
}
