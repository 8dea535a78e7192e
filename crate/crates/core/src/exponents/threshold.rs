//! The least N beyond which the improved multiplicity bound always applies.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::alpha::{ln_interval, lot_interval, lot_less_than, part1, part2, DEFAULT_B_CAP};
use super::c_closed_form;
use crate::arith::{rat, rat_int, serialize_rational, Rational};
use crate::planner::ThresholdInput;

pub const GRID_M: [u64; 7] = [2, 3, 4, 5, 6, 7, 10];
pub const GRID_D: [u64; 8] = [3, 4, 5, 6, 7, 10, 100, 1000];

/// Published `(m, d, n0, N)` cells.
pub const PUBLISHED_THRESHOLDS: [(u64, u64, u64, u64); 41] = [
    (2, 3, 6, 106),
    (2, 4, 6, 108),
    (2, 5, 6, 110),
    (2, 6, 6, 112),
    (2, 7, 7, 114),
    (2, 10, 10, 120),
    (2, 100, 100, 234),
    (2, 1000, 1000, 1000),
    (3, 3, 15, 552),
    (3, 4, 15, 553),
    (3, 5, 15, 555),
    (3, 6, 15, 558),
    (3, 7, 15, 559),
    (3, 10, 17, 565),
    (3, 100, 197, 662),
    (3, 1000, 1997, 1997),
    (4, 4, 28, 1164),
    (4, 5, 28, 1161),
    (4, 6, 28, 1162),
    (4, 7, 28, 1163),
    (4, 10, 28, 1166),
    (4, 100, 100, 1256),
    (4, 1000, 1000, 2040),
    (5, 5, 45, 2015),
    (5, 6, 45, 2014),
    (5, 7, 45, 2015),
    (5, 10, 45, 2020),
    (5, 100, 100, 2110),
    (5, 1000, 1000, 3045),
    (6, 6, 66, 3192),
    (6, 7, 66, 3187),
    (6, 10, 66, 3190),
    (6, 100, 194, 3278),
    (6, 1000, 1994, 4130),
    (7, 7, 91, 4438),
    (7, 10, 91, 4438),
    (7, 100, 593, 4525),
    (7, 1000, 5993, 5993),
    (10, 10, 190, 10860),
    (10, 100, 190, 10940),
    (10, 1000, 1000, 11800),
];

pub fn published(m: u64, d: u64) -> Option<ThresholdRow> {
    PUBLISHED_THRESHOLDS
        .iter()
        .find(|&&(pm, pd, _, _)| (pm, pd) == (m, d))
        .map(|&(m, d, n0, big_n)| ThresholdRow { m, d, n0, big_n })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub m: u64,
    pub d: u64,
    pub n0: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
}

/// Which r goes into the closed form for c when scanning n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CConvention {
    /// r = 1 for every n (reproduces the published table on most cells).
    UnitR,
    /// The least r with rd = n (mod m), as in the degree plan.
    PlanExact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThresholdOptions {
    pub tail_multiplier: u64,
    /// Scan every integer n instead of multiples of gcd(m, d).
    pub all_n: bool,
    pub b_cap: u64,
    pub convention: CConvention,
    pub precision_bits: u32,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        Self {
            tail_multiplier: 10,
            all_n: false,
            b_cap: DEFAULT_B_CAP,
            convention: CConvention::UnitR,
            precision_bits: 128,
        }
    }
}

/// One scanned n with its margin `c/n - 1/2` and the best bound found.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerEntry {
    pub n: u64,
    #[serde(serialize_with = "serialize_rational")]
    pub c: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub margin: Rational,
    /// Smallest of the exact bounds, and where it came from.
    pub exact_source: &'static str,
    #[serde(serialize_with = "serialize_rational")]
    pub exact_alpha: Rational,
    /// `exact_alpha - margin`; negative means the exact bound alone passes.
    #[serde(serialize_with = "serialize_rational")]
    pub exact_gap: Rational,
    /// Enclosure of `1.564 (ln n)^2 - margin`, as decimals.
    pub lot_gap: Option<(f64, f64)>,
    pub passes: bool,
    pub passing_source: Option<&'static str>,
}

/// Why every n beyond `checked_up_to` passes without scanning it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailCertificate {
    pub checked_up_to: u64,
    /// `(n + m - d r_max)/m^2 - 1/2`, a lower bound for the margin, at `checked_up_to`.
    #[serde(serialize_with = "serialize_rational")]
    pub linear_bound: Rational,
    pub lot_upper: f64,
    /// Slope comparison `3.128 ln(n)/n < 1/m^2` holds there.
    pub slope_ok: bool,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdLedger {
    pub row: ThresholdRow,
    pub convention: CConvention,
    pub tail_multiplier: u64,
    pub all_n: bool,
    pub step: u64,
    /// First n from which the log bound alone passes for every scanned n.
    pub n_lot: u64,
    pub tail: TailCertificate,
    pub scanned: u64,
    pub failures: u64,
    pub last_failure: Option<LedgerEntry>,
    pub first_pass: Option<LedgerEntry>,
    pub published: Option<ThresholdRow>,
    pub matches_published: Option<bool>,
}

fn c_for(m: u64, d: u64, n: u64, convention: CConvention) -> Rational {
    let k = if n.is_multiple_of(m) { (n as i64 - d as i64).rem_euclid(m as i64) as u64 } else { n % m };
    let r = match convention {
        CConvention::UnitR => 1,
        CConvention::PlanExact => (1..=m).find(|&r| (r * d) % m == n % m).unwrap_or(1),
    };
    c_closed_form(m, d, n, r, k)
}

fn margin(c: &Rational, n: u64) -> Rational {
    c / rat_int(n) - rat(1, 2)
}

fn round_up(x: u64, step: u64) -> u64 {
    x.div_ceil(step) * step
}

fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn entry(m: u64, d: u64, n: u64, opts: &ThresholdOptions) -> LedgerEntry {
    let c = c_for(m, d, n, opts.convention);
    let mg = margin(&c, n);
    let (_, p1) = part1(n);
    let mut best = ("part1", p1);
    if let Some((_, _, v)) = part2(n, opts.b_cap) {
        if rat_int(v) < best.1 {
            best = ("part2", rat_int(v));
        }
    }
    if n >= 3 {
        let s = rat(n as i64 + 2, 4);
        if s < best.1 {
            best = ("schmidt", s);
        }
    }
    let exact_gap = &best.1 - &mg;
    let mut passing_source = (exact_gap < Rational::from_integer(0.into())).then_some(best.0);
    let mut lot_gap = None;
    if n >= 6 {
        if passing_source.is_none() && lot_less_than(n, &mg, opts.precision_bits) {
            passing_source = Some("lot");
        }
        let (lo, hi) = lot_interval(n, opts.precision_bits);
        lot_gap = Some((to_f64(&(lo - &mg)), to_f64(&(hi - &mg))));
    }
    LedgerEntry {
        n,
        c,
        margin: mg,
        exact_source: best.0,
        exact_alpha: best.1,
        exact_gap,
        lot_gap,
        passes: passing_source.is_some(),
        passing_source,
    }
}

/// Passing test for n under (**), cheaper than a full ledger entry.
fn passes(m: u64, d: u64, n: u64, opts: &ThresholdOptions) -> bool {
    let mg = margin(&c_for(m, d, n, opts.convention), n);
    if part1(n).1 < mg {
        return true;
    }
    if part2(n, opts.b_cap).is_some_and(|(_, _, v)| rat_int(v) < mg) {
        return true;
    }
    if n >= 3 && rat(n as i64 + 2, 4) < mg {
        return true;
    }
    n >= 6 && lot_less_than(n, &mg, opts.precision_bits)
}

fn lot_passes(m: u64, d: u64, n: u64, opts: &ThresholdOptions) -> bool {
    lot_less_than(n, &margin(&c_for(m, d, n, opts.convention), n), opts.precision_bits)
}

fn tail_certificate(m: u64, d: u64, n: u64, opts: &ThresholdOptions) -> TailCertificate {
    let r_max = match opts.convention {
        CConvention::UnitR => 1,
        CConvention::PlanExact => m,
    };
    let linear = Rational::new(BigInt::from(n as i64 + m as i64 - (d * r_max) as i64), BigInt::from(m * m)) - rat(1, 2);
    let (_, lot_hi) = lot_interval(n, opts.precision_bits);
    let ln = ln_interval(n, opts.precision_bits);
    // 3.128 ln(n) / n < 1/m^2, with ln(n) replaced by its upper bound.
    let slope = Rational::new(ln.hi * 3128u32 * BigInt::from(m * m), (BigInt::one() << ln.bits) * BigInt::from(1000 * n));
    let slope_ok = slope < Rational::one() && n >= 3;
    let certified = slope_ok && lot_hi < linear;
    TailCertificate { checked_up_to: n, linear_bound: linear, lot_upper: to_f64(&lot_hi), slope_ok, certified }
}

#[allow(non_snake_case)]
pub fn threshold_N(m: u64, d: u64, opts: &ThresholdOptions) -> ThresholdLedger {
    assert!(m >= 2 && d >= m);
    let n0 = ThresholdInput::new(m, d).n0;
    let step = if opts.all_n { 1 } else { m.gcd(&d) };

    // Step 1: the log bound alone, checked exactly up to tail_multiplier times the candidate.
    let mut cand = round_up(n0.max(6), step);
    let mut limit;
    let tail = 'search: loop {
        if !lot_passes(m, d, cand, opts) {
            cand += step;
            continue;
        }
        limit = cand * opts.tail_multiplier.max(1);
        let mut j = cand + step;
        loop {
            while j <= limit {
                if !lot_passes(m, d, j, opts) {
                    cand = j + step;
                    continue 'search;
                }
                j += step;
            }
            let cert = tail_certificate(m, d, limit, opts);
            if cert.certified {
                break 'search cert;
            }
            limit *= 2;
        }
    };
    let n_lot = cand;

    // Step 2: every bound, from n0 up to the point where the log bound takes over.
    let start = round_up(n0, step);
    let mut last_failure = None;
    let mut failures = 0;
    let mut scanned = 0;
    let mut n = start;
    while n < n_lot {
        scanned += 1;
        if !passes(m, d, n, opts) {
            failures += 1;
            last_failure = Some(n);
        }
        n += step;
    }
    let big_n = last_failure.map_or(start, |f| f + step);
    let row = ThresholdRow { m, d, n0, big_n };
    let published = published(m, d);
    ThresholdLedger {
        row,
        convention: opts.convention,
        tail_multiplier: opts.tail_multiplier,
        all_n: opts.all_n,
        step,
        n_lot,
        tail,
        scanned,
        failures,
        last_failure: last_failure.map(|f| entry(m, d, f, opts)),
        first_pass: Some(entry(m, d, big_n, opts)),
        matches_published: published.map(|p| p == row),
        published,
    }
}

/// Every published cell, in table order.
pub fn threshold_table(opts: &ThresholdOptions) -> Vec<ThresholdLedger> {
    PUBLISHED_THRESHOLDS.iter().map(|&(m, d, _, _)| threshold_N(m, d, opts)).collect()
}
