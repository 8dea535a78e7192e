//! Exact exponents of the coefficient boxes, the resulting field-count exponents,
//! and the threshold search for when the improved bound takes effect.

mod alpha;
mod threshold;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{rat, rat_int, serialize_rational, serialize_rational_opt, Rational};
use crate::family::{coefficient_box, coefficient_box_point};
use crate::planner::{plan_degrees_md, plan_point_case_md, PlanError};

pub use alpha::{alpha_bounds, ln_interval, lot_interval, part1, part2, AlphaBounds, LnInterval, DEFAULT_B_CAP};
pub use threshold::{
    threshold_table, published, threshold_N, CConvention, LedgerEntry, TailCertificate, ThresholdLedger, ThresholdOptions,
    ThresholdRow, GRID_D, GRID_M, PUBLISHED_THRESHOLDS,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExponentError {
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscrepancyKind {
    /// The printed asymptotic exponent against `(c - n/2)/(n(n-1))`.
    ImprovedExponent,
    /// The printed point-case closed form for c (and the c_n built on it) against box summation.
    PointClosedForm,
    /// Printed closed form for c against box summation, generic family.
    GenericClosedForm,
    /// Printed c_n against the derived route, generic family.
    CnIdentity,
}

impl DiscrepancyKind {
    pub fn name(self) -> &'static str {
        match self {
            DiscrepancyKind::ImprovedExponent => "improved-exponent",
            DiscrepancyKind::PointClosedForm => "point-closed-form",
            DiscrepancyKind::GenericClosedForm => "generic-closed-form",
            DiscrepancyKind::CnIdentity => "cn-identity",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub kind: DiscrepancyKind,
    /// Which quantity disagrees: "c", "c_n" or "improved".
    pub quantity: &'static str,
    #[serde(serialize_with = "serialize_rational")]
    pub printed: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub derived: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentReport {
    pub m: u64,
    pub d: u64,
    pub n: u64,
    pub r: u64,
    pub k: u64,
    /// Sum of the free exponents of the coefficient box.
    #[serde(serialize_with = "serialize_rational")]
    pub c: Rational,
    /// The same sum from the index ranges alone.
    #[serde(serialize_with = "serialize_rational")]
    pub c_summation: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub c_closed_form: Rational,
    /// Exponent of Y in T; generic family only.
    #[serde(serialize_with = "serialize_rational_opt")]
    pub t_exponent: Option<Rational>,
    #[serde(serialize_with = "serialize_rational")]
    pub c_n_printed: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub c_n_derived: Rational,
    #[serde(serialize_with = "serialize_rational_opt")]
    pub improved_printed: Option<Rational>,
    #[serde(serialize_with = "serialize_rational_opt")]
    pub improved_derived: Option<Rational>,
    pub point_case: bool,
    pub discrepancies: Vec<Discrepancy>,
}

fn q(x: u64) -> Rational {
    rat_int(x)
}

fn qi(x: i128) -> Rational {
    rat_int(x)
}

fn qr(p: i128, q: i128) -> Rational {
    Rational::new(p.into(), q.into())
}

/// `sum_{i=lo}^{hi} (i + shift)`, empty when `hi < lo`.
fn range_sum(lo: i128, hi: i128, shift: &Rational) -> Rational {
    if hi < lo {
        return Rational::zero();
    }
    let count = hi - lo + 1;
    qi((lo + hi) * count) / qi(2) + shift * qi(count)
}

/// Closed form for c in the generic family, with explicit r and k.
pub fn c_closed_form(m: u64, d: u64, n: u64, r: u64, k: u64) -> Rational {
    let (m, d, n, r, k) = (m as i128, d as i128, n as i128, r as i128, k as i128);
    let dr = d * r;
    let inner = qi(n * n + n * (m - dr)) + qi(dr * dr + (k - dr) * m - k * k) / qi(2);
    inner / qi(m * m)
}

/// Exponent of Y in the discriminant lower bound T.
pub fn t_exponent(m: u64, d: u64, n: u64, r: u64, k: u64) -> Rational {
    let (m, d, n, r, k) = (m as i128, d as i128, n as i128, r as i128, k as i128);
    let dr = d * r;
    (qi(4 * n - 4 * (dr + (m - 1) * m)) + qi(2 * (dr - k) * (dr + k - m)) / qi(n)) / qi(m * m)
}

/// The printed c_n for the generic family.
pub fn c_n_printed(m: u64, d: u64, n: u64, r: u64, k: u64) -> Rational {
    let (m, d, n, r, k) = (m as i128, d as i128, n as i128, r as i128, k as i128);
    let dr = d * r;
    let num = 2 * n * n * (m - m * m - dr + 3)
        + n * (k * m - k * k + 4 * (m - m * m - dr) - d * m * r + dr * dr)
        + 2 * (k * m - k * k - d * m * r + dr * dr);
    qr(1, m * m) + qr(num, 2 * m * m * n * n * (n - 1))
}

/// The printed asymptotic exponent.
pub fn improved_printed(m: u64, d: u64, n: u64, r: u64, k: u64) -> Rational {
    let (m, d, n, r, k) = (m as i128, d as i128, n as i128, r as i128, k as i128);
    let dr = d * r;
    let num = (2 * m - 2 * dr + 1) * n + dr * dr - m * dr + m * k - k * k;
    (Rational::one() + qr(num, 2 * n * (n - 1))) / qi(m * m)
}

/// `(c - n/2) / (n(n-1))`.
pub fn improved_derived(c: &Rational, n: u64) -> Rational {
    (c - rat(n as i64, 2)) / q(n * (n - 1))
}

/// The printed point-case closed form for c.
pub fn point_c_printed(m: u64, d: u64, n: u64, r: u64, k: u64) -> Rational {
    let (m, d, n, r, k) = (m as i128, d as i128, n as i128, r as i128, k as i128);
    let dr = d * r;
    let m2 = m * m;
    let m3 = m2 * m;
    let m4 = m3 * m;
    let lin = n * (-2 * m2 + (2 + 2 * k) * m - 2 * k - dr);
    let cons = qi(m4 - (2 * k + 3) * m3 + (k * k + 5 * k + dr + 2) * m2)
        - (qi(2 * k * k + d * k * r + 3 * k) + qr(3 * dr, 2)) * qi(m)
        + qr(dr * dr, 2)
        + qi(d * k * r + k * k);
    (qi(n * n + lin) + cons) / qi(m2)
}

/// The printed point-case c_n.
pub fn point_c_n_printed(m: u64, d: u64, n: u64, r: u64, k: u64) -> Rational {
    let (m, d, n, r, k) = (m as i128, d as i128, n as i128, r as i128, k as i128);
    let dr = d * r;
    let m2 = m * m;
    let m3 = m2 * m;
    let m4 = m3 * m;
    let num = (-5 * m2 + (4 + 4 * k) * m - 4 * k - 2 * dr + 2) * n + 2 * m4 - (4 * k + 6) * m3
        + (2 * k * k + 10 * k + 2 * dr + 4) * m2
        - (4 * k * k + 2 * d * k * r + 3 * dr + 6 * k) * m
        + dr * dr
        + 2 * d * k * r
        + 2 * k * k;
    (Rational::one() + qr(num, 2 * n * (n - 1))) / qi(m2)
}

/// Box summation for the generic family, from the index ranges.
fn generic_summation(m: u64, d: u64, n: u64, r: u64, k: u64) -> Rational {
    let (mi, di, ni, ri, ki) = (m as i128, d as i128, n as i128, r as i128, k as i128);
    let frac = Rational::new(ki.into(), mi.into());
    if n.is_multiple_of(m) {
        range_sum(1, ni / mi, &Rational::zero()) + range_sum(0, (ni - di - ki).div_euclid(mi), &frac)
    } else {
        range_sum(0, (ni - ki) / mi, &frac) + range_sum(1, (ni - ri * di).div_euclid(mi), &Rational::zero())
    }
}

fn at_least_two(n: u64) -> Result<(), ExponentError> {
    if n < 2 {
        return Err(PlanError::DegreeTooSmall { n, min: 2 }.into());
    }
    Ok(())
}

fn push_if_different(
    out: &mut Vec<Discrepancy>,
    kind: DiscrepancyKind,
    quantity: &'static str,
    printed: &Rational,
    derived: &Rational,
) {
    if printed != derived {
        out.push(Discrepancy { kind, quantity, printed: printed.clone(), derived: derived.clone() });
    }
}

/// Full report for the generic family at (m, d, n).
pub fn exponent_report(m: u64, d: u64, n: u64) -> Result<ExponentReport, ExponentError> {
    at_least_two(n)?;
    let plan = plan_degrees_md(m, d, n)?;
    let (r, k) = (plan.r, plan.k);
    let c = coefficient_box(&plan, &Rational::one()).exponent_sum();
    let c_summation = generic_summation(m, d, n, r, k);
    if c != c_summation {
        return Err(ExponentError::Invariant(format!("box exponent {c} != index sum {c_summation} at ({m},{d},{n})")));
    }
    let c_closed = c_closed_form(m, d, n, r, k);
    let t = t_exponent(m, d, n, r, k);
    let cn_derived = (&c - q(n) + &t / qi(2)) / q(n * (n - 1));
    let cn_printed = c_n_printed(m, d, n, r, k);
    let imp_printed = improved_printed(m, d, n, r, k);
    let imp_derived = improved_derived(&c, n);

    let mut discrepancies = Vec::new();
    push_if_different(&mut discrepancies, DiscrepancyKind::GenericClosedForm, "c", &c_closed, &c);
    push_if_different(&mut discrepancies, DiscrepancyKind::CnIdentity, "c_n", &cn_printed, &cn_derived);
    push_if_different(&mut discrepancies, DiscrepancyKind::ImprovedExponent, "improved", &imp_printed, &imp_derived);

    Ok(ExponentReport {
        m,
        d,
        n,
        r,
        k,
        c,
        c_summation,
        c_closed_form: c_closed,
        t_exponent: Some(t),
        c_n_printed: cn_printed,
        c_n_derived: cn_derived,
        improved_printed: Some(imp_printed),
        improved_derived: Some(imp_derived),
        point_case: false,
        discrepancies,
    })
}

pub fn exponent_c(m: u64, d: u64, n: u64) -> Result<Rational, ExponentError> {
    Ok(exponent_report(m, d, n)?.c)
}

/// Returns `(printed, derived)`.
pub fn exponent_cn(m: u64, d: u64, n: u64) -> Result<(Rational, Rational), ExponentError> {
    let rep = exponent_report(m, d, n)?;
    Ok((rep.c_n_printed, rep.c_n_derived))
}

/// Returns `(printed, derived)`.
pub fn improved_cn(m: u64, d: u64, n: u64) -> Result<(Rational, Rational), ExponentError> {
    let rep = exponent_report(m, d, n)?;
    Ok((rep.improved_printed.unwrap(), rep.improved_derived.unwrap()))
}

/// Report for the family through a rational point at infinity.
pub fn point_case_exponents(m: u64, d: u64, n: u64) -> Result<ExponentReport, ExponentError> {
    at_least_two(n)?;
    let plan = plan_point_case_md(m, d, n)?;
    let (r, k) = (plan.r, plan.k);
    let c = coefficient_box_point(&plan, &Rational::one()).exponent_sum();
    let s = plan.s as i128;
    let mk = (m - k) as i128;
    let big_a = s - mk;
    let big_b = s - (r * d / m) as i128 - mk;
    let c_summation = range_sum(1, big_a, &Rational::zero()) + range_sum(1, big_b, &Rational::zero());
    if c != c_summation {
        return Err(ExponentError::Invariant(format!("box exponent {c} != index sum {c_summation} at ({m},{d},{n})")));
    }
    let c_closed = point_c_printed(m, d, n, r, k);
    let cn_derived = improved_derived(&c, n);
    let cn_printed = point_c_n_printed(m, d, n, r, k);

    let mut discrepancies = Vec::new();
    push_if_different(&mut discrepancies, DiscrepancyKind::PointClosedForm, "c", &c_closed, &c);
    push_if_different(&mut discrepancies, DiscrepancyKind::PointClosedForm, "c_n", &cn_printed, &cn_derived);

    Ok(ExponentReport {
        m,
        d,
        n,
        r,
        k,
        c,
        c_summation,
        c_closed_form: c_closed,
        t_exponent: None,
        c_n_printed: cn_printed,
        c_n_derived: cn_derived,
        improved_printed: None,
        improved_derived: None,
        point_case: true,
        discrepancies,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KindSummary {
    pub kind: DiscrepancyKind,
    pub name: &'static str,
    pub occurrences: usize,
    /// First (m, d, n) where it shows up, with its values.
    pub first: (u64, u64, u64),
    pub example: Discrepancy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridReport {
    pub m_range: (u64, u64),
    pub d_max: u64,
    pub n_max: u64,
    pub generic_points: usize,
    pub point_points: usize,
    pub kinds: Vec<KindSummary>,
}

impl GridReport {
    pub fn kind_names(&self) -> Vec<&'static str> {
        self.kinds.iter().map(|k| k.name).collect()
    }
}

/// Every generic and point-case report over `m_lo <= m <= m_hi`, `m <= d <= d_max`, `n <= n_max`,
/// keeping only the discrepancy summary. Plans that do not exist are skipped.
pub fn discrepancy_grid(m_lo: u64, m_hi: u64, d_max: u64, n_max: u64) -> Result<GridReport, ExponentError> {
    let mut generic_points = 0;
    let mut point_points = 0;
    let mut kinds: Vec<KindSummary> = Vec::new();
    for m in m_lo..=m_hi {
        for d in m..=d_max {
            for n in 1..=n_max {
                let rep = match exponent_report(m, d, n) {
                    Ok(r) => {
                        generic_points += 1;
                        r
                    }
                    Err(ExponentError::Plan(_)) => match point_case_exponents(m, d, n) {
                        Ok(r) => {
                            point_points += 1;
                            r
                        }
                        Err(ExponentError::Plan(_)) => continue,
                        Err(e) => return Err(e),
                    },
                    Err(e) => return Err(e),
                };
                for disc in rep.discrepancies {
                    match kinds.iter_mut().find(|k| k.kind == disc.kind) {
                        Some(k) => k.occurrences += 1,
                        None => kinds.push(KindSummary {
                            kind: disc.kind,
                            name: disc.kind.name(),
                            occurrences: 1,
                            first: (m, d, n),
                            example: disc,
                        }),
                    }
                }
            }
        }
    }
    kinds.sort_by_key(|k| k.kind);
    Ok(GridReport { m_range: (m_lo, m_hi), d_max, n_max, generic_points, point_points, kinds })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchors() {
        assert_eq!(exponent_c(2, 3, 6).unwrap(), rat(8, 1));
        assert_eq!(exponent_c(3, 4, 7).unwrap(), rat(5, 1));
        assert_eq!(exponent_c(2, 4, 4).unwrap(), rat(3, 1));
        assert_eq!(exponent_cn(2, 3, 6).unwrap(), (rat(4, 45), rat(4, 45)));
        assert_eq!(exponent_cn(3, 4, 7).unwrap(), (rat(-3, 49), rat(-3, 49)));
        assert_eq!(exponent_cn(2, 4, 4).unwrap(), (rat(-1, 8), rat(-1, 8)));
    }

    #[test]
    fn improved_mismatch() {
        assert_eq!(improved_cn(2, 3, 6).unwrap(), (rat(29, 120), rat(1, 6)));
        let (_, derived) = improved_cn(2, 3, 106).unwrap();
        let c = rat(106 * 106 - 106 + 2, 4);
        assert_eq!(derived, (c - rat(53, 1)) / rat(106 * 105, 1));
    }

    #[test]
    fn improved_agrees_when_m_is_one() {
        for d in 1..8u64 {
            for n in (d + 2)..40 {
                let c = c_closed_form(1, d, n, 1, 0);
                assert_eq!(improved_printed(1, d, n, 1, 0), improved_derived(&c, n));
            }
        }
    }

    #[test]
    fn point_anchors() {
        let rep = point_case_exponents(2, 4, 5).unwrap();
        assert_eq!(rep.c, rat(3, 1));
        assert_eq!(rep.c_closed_form, rat(1, 2));
        assert_eq!(rep.discrepancies.len(), 2);
        assert!(rep.discrepancies.iter().all(|d| d.kind == DiscrepancyKind::PointClosedForm));
        assert_eq!(point_case_exponents(2, 2, 3).unwrap().c, rat(1, 1));
        assert!(matches!(point_case_exponents(2, 4, 6), Err(ExponentError::Plan(PlanError::GcdDivides { .. }))));
    }

    #[test]
    fn small_grid_kinds() {
        let rep = discrepancy_grid(2, 3, 6, 40).unwrap();
        assert_eq!(rep.kind_names(), vec!["improved-exponent", "point-closed-form"]);
    }
}
