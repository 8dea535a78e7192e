//! Brute-force oracles and shared drivers for the integration suites.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sec_core::arith::{
    fujiwara_root_bound, mod_factor_degrees, rat, rat_int, valuation_unchecked, FpPoly, IntPolynomial, Rational, Valuation,
};
use sec_core::constraints::{sample, ConstraintSet, Recipe};
use sec_core::family::{build_F, coefficient_box, point_elimination_table};
use sec_core::galois::{certify_irreducible, certify_sn, collect_evidence, SnStatus};
use sec_core::newton::{lower_hull, newton_polygon};
use sec_core::pipeline::{prepare, run_sample};
use sec_core::planner::{generalized_frobenius, plan_degrees, plan_degrees_md, plan_point_case, Curve};

pub type Check = Result<String, String>;

pub fn curve(m: u64, f: &[i64]) -> Curve {
    Curve::new(m, IntPolynomial::from_i64(f)).unwrap()
}

// ---------- Frobenius numbers ----------

fn representable(t: i64, a: i64, b: i64) -> bool {
    t >= 0 && (0..=t / a).any(|x| (t - a * x) % b == 0)
}

/// Largest multiple of gcd(a, b) that is not `ax + by` with x, y >= 0 (at least -gcd).
pub fn frobenius_brute(a: i64, b: i64) -> i64 {
    let g = a.gcd(&b);
    let mut largest = -g;
    let mut t = 0;
    while t <= a * b {
        if !representable(t, a, b) {
            largest = t;
        }
        t += g;
    }
    largest
}

pub fn check_frobenius() -> Check {
    for a in 1..=30i64 {
        for b in 1..=30i64 {
            let (got, want) = (generalized_frobenius(a as u64, b as u64), frobenius_brute(a, b));
            if got != want {
                return Err(format!("Frob({a},{b}) = {got}, brute force {want}"));
            }
        }
    }
    Ok("900 pairs".into())
}

// ---------- lower hulls ----------

/// Vertices of the lower hull: points strictly below every chord spanning them.
pub fn brute_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let n = points.len();
    (0..n)
        .filter(|&i| {
            let (xi, yi) = points[i];
            !(0..i).any(|j| {
                (i + 1..n).any(|k| {
                    let (xj, yj) = points[j];
                    let (xk, yk) = points[k];
                    (yi - yj) as i128 * (xk - xj) as i128 >= (yk - yj) as i128 * (xi - xj) as i128
                })
            })
        })
        .map(|i| points[i])
        .collect()
}

pub fn random_points(rng: &mut ChaCha8Rng) -> Vec<(i64, i64)> {
    let len = rng.gen_range(1..=14);
    let mut x = rng.gen_range(-5..5);
    (0..len)
        .map(|_| {
            x += rng.gen_range(1..4);
            (x, rng.gen_range(-6..=6))
        })
        .collect()
}

pub fn check_hulls(count: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let points = random_points(&mut rng);
        if lower_hull(&points) != brute_hull(&points) {
            return Err(format!("hull mismatch on {points:?}"));
        }
    }
    Ok(format!("{count} point sets"))
}

/// Newton polygons against the brute hull of (i, v_p(c_i)).
pub fn check_newton_polygons(count: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        let deg = rng.gen_range(1..9);
        let coeffs: Vec<i64> = (0..=deg)
            .map(|i| {
                if i == deg || i == 0 || rng.gen_bool(0.7) {
                    rng.gen_range(1..200) * [1, -1][rng.gen_range(0..2)]
                } else {
                    0
                }
            })
            .collect();
        let points: Vec<(i64, i64)> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match valuation_unchecked(&BigInt::from(c), p) {
                Valuation::Finite(v) => (i as i64, v as i64),
                Valuation::Infinite => unreachable!(),
            })
            .collect();
        let np = newton_polygon(&IntPolynomial::from_i64(&coeffs), p).map_err(|e| e.to_string())?;
        let verts: Vec<(i64, i64)> = np.vertices.iter().map(|&(x, y)| (x as i64, y)).collect();
        if verts != brute_hull(&points) {
            return Err(format!("polygon of {coeffs:?} at {p}: {verts:?}"));
        }
    }
    Ok(format!("{count} polygons"))
}

// ---------- factoring mod p ----------

fn monic_of_degree(k: usize, p: u64) -> impl Iterator<Item = FpPoly> {
    (0..p.pow(k as u32)).map(move |mut idx| {
        let mut c = Vec::with_capacity(k + 1);
        for _ in 0..k {
            c.push(idx % p);
            idx /= p;
        }
        c.push(1);
        FpPoly::new(p, c)
    })
}

/// Factor degrees by trial division with every monic polynomial of degree up to half.
pub fn exhaustive_factor_degrees(f: &FpPoly) -> Vec<usize> {
    let n = f.degree().unwrap();
    for k in 1..=n / 2 {
        for g in monic_of_degree(k, f.p) {
            let (q, r) = f.div_rem(&g);
            if r.is_zero() {
                let mut rest = exhaustive_factor_degrees(&q);
                rest.push(k);
                rest.sort_unstable();
                return rest;
            }
        }
    }
    if n == 0 {
        Vec::new()
    } else {
        vec![n]
    }
}

pub fn check_mod_p_factoring(per_prime: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    for &p in &[2u64, 3, 5, 7, 11, 13] {
        let mut done = 0;
        while done < per_prime {
            let deg = rng.gen_range(1..=6);
            let mut coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-20..=20)).collect();
            if coeffs[deg] % p as i64 == 0 {
                coeffs[deg] += 1;
            }
            let f = IntPolynomial::from_i64(&coeffs);
            let Ok(got) = mod_factor_degrees(&f, p) else { continue };
            done += 1;
            let want = exhaustive_factor_degrees(&FpPoly::reduce(&f, p).monic());
            if got != want {
                return Err(format!("{coeffs:?} mod {p}: {got:?} vs {want:?}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} squarefree reductions"))
}

// ---------- root bounds ----------

pub fn check_fujiwara(count: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let lead = rng.gen_range(1..=6) * [1, -1][rng.gen_range(0..2)];
        let mut f = IntPolynomial::from_i64(&[lead]);
        // Largest squared root modulus.
        let mut worst = rat_int(0);
        for _ in 0..rng.gen_range(1..=4) {
            if rng.gen_bool(0.6) {
                let a = rng.gen_range(-30..=30i64);
                let b = rng.gen_range(1..=5i64);
                f = &f * &IntPolynomial::from_i64(&[-a, b]);
                worst = worst.max(Rational::new(BigInt::from(a * a), BigInt::from(b * b)));
            } else {
                let u = rng.gen_range(-20..=20i64);
                let v = rng.gen_range(1..=20i64);
                f = &f * &IntPolynomial::from_i64(&[u * u + v * v, -2 * u, 1]);
                worst = worst.max(rat_int(u * u + v * v));
            }
        }
        let bound = fujiwara_root_bound(&f).map_err(|e| e.to_string())?;
        if bound.is_negative() || &bound * &bound < worst {
            return Err(format!("bound {bound} misses a root of {f:?}"));
        }
    }
    Ok(format!("{count} polynomials"))
}

// ---------- small Galois groups ----------

fn divisors(x: i64) -> Vec<i64> {
    let x = x.abs();
    (1..=x).filter(|d| x % d == 0).flat_map(|d| [d, -d]).collect()
}

fn homogeneous(c: &[i64], x: i128, y: i128) -> i128 {
    let n = c.len() - 1;
    c.iter().enumerate().map(|(i, &ci)| ci as i128 * x.pow(i as u32) * y.pow((n - i) as u32)).sum()
}

pub fn has_rational_root(c: &[i64]) -> bool {
    if c[0] == 0 {
        return true;
    }
    let lead = *c.last().unwrap();
    divisors(c[0])
        .iter()
        .any(|&p| divisors(lead).iter().filter(|&&q| q > 0).any(|&q| homogeneous(c, p as i128, q as i128) == 0))
}

/// Does the quartic `c` split into two integer quadratics?
pub fn has_quadratic_factor(c: &[i64]) -> bool {
    let (e, d, cc, b, a) = (c[0], c[1], c[2], c[3], c[4]);
    for p1 in divisors(a) {
        let p2 = a / p1;
        for r1 in divisors(e) {
            let r2 = e / r1;
            let fits = |q1: i64, q2: i64| p1 * q2 + q1 * p2 == b && p1 * r2 + q1 * q2 + r1 * p2 == cc && q1 * r2 + r1 * q2 == d;
            let det = p2 * r1 - p1 * r2;
            if det != 0 {
                let n1 = b * r1 - p1 * d;
                let n2 = p2 * d - r2 * b;
                if n1 % det == 0 && n2 % det == 0 && fits(n1 / det, n2 / det) {
                    return true;
                }
            } else if (-200..=200).any(|q1| {
                let rest = b - p2 * q1;
                rest % p1 == 0 && fits(q1, rest / p1)
            }) {
                return true;
            }
        }
    }
    false
}

pub fn is_square(x: i128) -> bool {
    x >= 0 && {
        let r = x.sqrt();
        r * r == x
    }
}

pub fn disc_cubic(c: &[i64]) -> i128 {
    let (d, cc, b, a) = (c[0] as i128, c[1] as i128, c[2] as i128, c[3] as i128);
    b * b * cc * cc - 4 * a * cc * cc * cc - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * cc * d
}

/// `y^4 + b y^3 + c y^2 + d y + e` with `y = a t`, as `[b, c, d, e]`.
pub fn monic_quartic(c: &[i64]) -> [i128; 4] {
    let a = c[4] as i128;
    [c[3] as i128, c[2] as i128 * a, c[1] as i128 * a * a, c[0] as i128 * a * a * a]
}

pub fn disc_monic_quartic([b, c, d, e]: [i128; 4]) -> i128 {
    256 * e.pow(3) - 192 * b * d * e.pow(2) - 128 * c.pow(2) * e.pow(2) + 144 * c * d.pow(2) * e - 27 * d.pow(4)
        + 144 * b.pow(2) * c * e.pow(2)
        - 6 * b.pow(2) * d.pow(2) * e
        - 80 * b * c.pow(2) * d * e
        + 18 * b * c * d.pow(3)
        + 16 * c.pow(4) * e
        - 4 * c.pow(3) * d.pow(2)
        - 27 * b.pow(4) * e.pow(2)
        + 18 * b.pow(3) * c * d * e
        - 4 * b.pow(3) * d.pow(3)
        - 4 * b.pow(2) * c.pow(3) * e
        + b.pow(2) * c.pow(2) * d.pow(2)
}

/// Integer root of the resolvent `y^3 - c y^2 + (bd - 4e) y - (b^2 e - 4ce + d^2)`.
pub fn resolvent_reducible([b, c, d, e]: [i128; 4]) -> bool {
    let r0 = -(b * b * e - 4 * c * e + d * d);
    let ev = |y: i128| r0 + (b * d - 4 * e) * y - c * y * y + y * y * y;
    if r0 == 0 {
        return true;
    }
    let bound = r0.abs();
    let mut k = 1i128;
    while k * k <= bound {
        if bound % k == 0 && [k, -k, bound / k, -(bound / k)].into_iter().any(|y| ev(y) == 0) {
            return true;
        }
        k += 1;
    }
    false
}

/// Galois group is the full symmetric group, for an irreducible cubic or quartic.
pub fn full_symmetric(c: &[i64]) -> bool {
    match c.len() - 1 {
        3 => !is_square(disc_cubic(c)),
        4 => {
            let m = monic_quartic(c);
            !is_square(disc_monic_quartic(m)) && !resolvent_reducible(m)
        }
        _ => unimplemented!(),
    }
}

pub fn irreducible_small(c: &[i64]) -> bool {
    !has_rational_root(c) && (c.len() != 5 || !has_quadratic_factor(c))
}

/// Calls `f` on every polynomial of degree `deg` with coefficients in [-4, 4].
pub fn for_each_small(deg: usize, mut f: impl FnMut(&[i64])) {
    let mut c = vec![-4i64; deg + 1];
    loop {
        if c[deg] != 0 {
            f(&c);
        }
        let mut i = 0;
        loop {
            if i > deg {
                return;
            }
            c[i] += 1;
            if c[i] <= 4 {
                break;
            }
            c[i] = -4;
            i += 1;
        }
    }
}

/// Dedekind-only evidence, as a sound baseline.
pub fn sn_certified(f: &IntPolynomial, budget: u64) -> bool {
    certify_sn(&collect_evidence(f, budget, &[]), 2).status == SnStatus::CertifiedSn
}

/// Exhaustive irreducible corpus of one degree: `(irreducible, certified)` or the first false verdict.
pub fn check_small_corpus(deg: usize, budget: u64) -> Result<(usize, usize), String> {
    let (mut irreducible, mut certified) = (0, 0);
    let mut bad = None;
    for_each_small(deg, |c| {
        if bad.is_some() || !irreducible_small(c) {
            return;
        }
        irreducible += 1;
        if sn_certified(&IntPolynomial::from_i64(c), budget) {
            certified += 1;
            if !full_symmetric(c) {
                bad = Some(c.to_vec());
            }
        }
    });
    match bad {
        Some(c) => Err(format!("false S_{deg} verdict for {c:?}")),
        None => Ok((irreducible, certified)),
    }
}

fn random_factor(rng: &mut ChaCha8Rng, deg: usize) -> IntPolynomial {
    let mut c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-9..=9)).collect();
    if c[deg] == 0 {
        c[deg] = 1;
    }
    IntPolynomial::from_i64(&c)
}

/// Products of two random factors: no irreducibility proof from any source.
pub fn check_reducible_products(count: usize, seed: u64, budget: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    while done < count {
        let (d1, d2) = (rng.gen_range(1..=3), rng.gen_range(1..=4));
        let f = &random_factor(&mut rng, d1) * &random_factor(&mut rng, d2);
        if f.degree() != Some(d1 + d2) {
            continue;
        }
        done += 1;
        if let Some(proof) = certify_irreducible(&f, budget) {
            return Err(format!("{f:?} certified irreducible by {proof:?}"));
        }
        let polygons: Vec<_> = [2u64, 3, 5].iter().filter_map(|&p| newton_polygon(&f, p).ok()).collect();
        let ev = collect_evidence(&f, budget, &polygons);
        if let Some(proof) = ev.irreducibility_proof() {
            return Err(format!("{f:?} has evidence {proof:?}"));
        }
        if certify_sn(&ev, 2).status == SnStatus::CertifiedSn {
            return Err(format!("{f:?} certified S_n"));
        }
    }
    Ok(format!("{count} products"))
}

// ---------- recipes ----------

pub struct ShapeRun {
    pub label: String,
    pub drawn: usize,
    pub rejected: usize,
    pub matched: usize,
    pub certified: usize,
}

impl ShapeRun {
    pub fn accepted(&self) -> usize {
        self.drawn - self.rejected
    }

    /// Every accepted sample matched and fewer than 5% were rejected.
    pub fn shape_ok(&self) -> bool {
        self.matched == self.accepted() && self.rejected * 20 < self.drawn
    }
}

/// Draws `count` samples of one recipe; with `prime_budget`, also certifies.
pub fn run_recipe(curve: &Curve, n: u64, recipe: Recipe, count: u64, seed: u64, prime_budget: Option<u64>) -> Result<ShapeRun, String> {
    let prep = prepare(curve, n, recipe, &rat_int(10), 100_000).map_err(|e| format!("{}: {e}", recipe.name()))?;
    let mut run = ShapeRun { label: format!("{} on (m,d,n)=({},{},{n})", recipe.name(), curve.m(), curve.d()), drawn: 0, rejected: 0, matched: 0, certified: 0 };
    for i in 0..count {
        let rec = run_sample(&prep, seed, i, prime_budget).map_err(|e| format!("{}: sample {i}: {e}", recipe.name()))?;
        run.drawn += 1;
        if rec.rejected.is_some() {
            run.rejected += 1;
            continue;
        }
        if rec.polygon_matches {
            run.matched += 1;
        }
        if rec.certified() {
            run.certified += 1;
        }
    }
    Ok(run)
}

/// Recipes and instances of the shape suite.
pub fn shape_cases() -> Vec<(Curve, u64, Recipe)> {
    let y2 = curve(2, &[1, 1, 0, 1]);
    let y3 = curve(3, &[1, 1, 0, 0, 1]);
    let y4 = curve(4, &[1, 1, 0, 0, 0, 0, 1]);
    let point = curve(2, &[1, 0, 0, 0, 1]);
    vec![
        (y2.clone(), 10, Recipe::ShortCycle { ell: 2 }),
        (y2.clone(), 10, Recipe::ShortCycle { ell: 3 }),
        (y2.clone(), 10, Recipe::ShortCycle { ell: 5 }),
        (y3.clone(), 7, Recipe::ATransitive),
        (y3, 7, Recipe::ALong),
        (y2.clone(), 6, Recipe::BTransitive),
        (y2, 6, Recipe::BLong),
        (y4.clone(), 10, Recipe::CIrred),
        (y4, 10, Recipe::CLong),
        (point, 5, Recipe::PointLong),
    ]
}

// ---------- degree contracts ----------

/// Point plans whose top coefficients must vanish identically.
pub fn point_contract_cases() -> Vec<(Curve, u64)> {
    vec![(curve(2, &[1, 0, 0, 0, 1]), 5), (curve(2, &[1, 0, 1]), 3), (curve(3, &[1, 1, 0, 0, 0, 0, 1]), 7)]
}

pub fn check_point_contracts() -> Check {
    let mut done = Vec::new();
    for (c, n) in point_contract_cases() {
        let plan = plan_point_case(&c, n).map_err(|e| e.to_string())?;
        let table = point_elimination_table(&c, &plan).map_err(|e| e.to_string())?;
        let label = format!("({},{},{n})", c.m(), c.d());
        if !table.degree_contract_holds() {
            return Err(format!("top coefficients survive for {label}"));
        }
        done.push(label);
    }
    Ok(done.join(" "))
}

/// Unconstrained generic samples: deg F = n on every draw.
pub fn check_generic_degrees(count: u64, seed: u64) -> Check {
    let cases = [(curve(2, &[1, 1, 0, 1]), 6), (curve(3, &[1, 1, 0, 0, 1]), 7), (curve(4, &[1, 1, 0, 0, 0, 0, 1]), 10)];
    let free = ConstraintSet {
        recipe: "free".into(),
        primes: Vec::new(),
        constraints: Vec::new(),
        predicted: Vec::new(),
        certificates: Default::default(),
        certification_too_small: false,
    };
    for (c, n) in &cases {
        let plan = plan_degrees(c, *n).map_err(|e| e.to_string())?;
        let bx = coefficient_box(&plan, &rat_int(10));
        for i in 0..count {
            let spec = sample(&free, &bx, seed, i).map_err(|e| e.to_string())?;
            let f = build_F(c, &spec);
            if f.degree() != Some(*n as usize) {
                return Err(format!("deg F = {:?} for n = {n}, sample {i}", f.degree()));
            }
        }
    }
    Ok(format!("{} samples", count as usize * cases.len()))
}

// ---------- exponents ----------

/// `sum_{j=lo}^{hi} (j + shift)` one term at a time.
fn slow_sum(lo: i64, hi: i64, shift: &Rational) -> Rational {
    (lo..=hi).fold(Rational::zero(), |acc, j| acc + rat_int(j) + shift)
}

/// Exponent sum of the generic box, term by term from the plan.
pub fn brute_c(m: u64, d: u64, n: u64) -> Option<Rational> {
    let p = plan_degrees_md(m, d, n).ok()?;
    let (m, d, n, r, k) = (m as i64, d as i64, n as i64, p.r as i64, p.k as i64);
    let frac = rat(k, m);
    Some(if n % m == 0 {
        slow_sum(1, n / m, &Rational::zero()) + slow_sum(0, (n - d - k).div_euclid(m), &frac)
    } else {
        slow_sum(0, (n - k) / m, &frac) + slow_sum(1, (n - r * d).div_euclid(m), &Rational::zero())
    })
}

/// Closed forms, identities and the term-by-term oracle over 2 <= m <= 6, m <= d <= 12, n <= 200.
pub fn check_exponent_grid() -> Check {
    use sec_core::exponents::{exponent_report, DiscrepancyKind};
    let mut points = 0;
    for m in 2..=6 {
        for d in m..=12 {
            for n in 2..=200 {
                let Ok(rep) = exponent_report(m, d, n) else { continue };
                points += 1;
                let at = format!("({m},{d},{n})");
                if Some(&rep.c) != brute_c(m, d, n).as_ref() || rep.c != rep.c_summation {
                    return Err(format!("box sum disagrees with the oracle at {at}"));
                }
                if rep.c_closed_form != rep.c {
                    return Err(format!("closed form {} vs {} at {at}", rep.c_closed_form, rep.c));
                }
                if rep.c_n_printed != rep.c_n_derived {
                    return Err(format!("c_n {} vs {} at {at}", rep.c_n_printed, rep.c_n_derived));
                }
                if rep.discrepancies.iter().any(|x| x.kind != DiscrepancyKind::ImprovedExponent) {
                    return Err(format!("unexpected discrepancy at {at}"));
                }
            }
        }
    }
    Ok(format!("{points} admissible points"))
}
