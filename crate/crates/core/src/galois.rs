//! Cycle and irreducibility certificates, and the S_n criteria built from them.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{mod_factor_degrees, primes_up_to, ArithError, IntPolynomial};
use crate::newton::{certified_cycles, factor_degree_constraints, newton_polygon, CycleCheck, NewtonPolygon};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Newton,
    /// Factor pattern `{l, 1, ..., 1}` modulo p.
    Dedekind,
    /// A power of a Frobenius element whose other cycle lengths are prime to l.
    DedekindPower,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CycleWitness {
    pub method: Method,
    pub prime: u64,
    /// The factor pattern mod p, for Dedekind witnesses.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pattern: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "route", rename_all = "kebab-case")]
pub enum IrreducibilityProof {
    /// One segment from x = 0 with coprime slope data.
    NewtonSegment { prime: u64 },
    IrreducibleModP { prime: u64 },
    /// No proper subset sum survives across the factor patterns at these primes.
    DegreeSieve { primes: Vec<u64> },
    /// A local factor of degree `ell` plus a divisor of every factor degree exceeding `n - ell`.
    Pigeonhole { ell: usize, ell_prime: u64, divisor: usize, divisor_prime: u64 },
}

/// Accumulated facts about `Gal(F/Q)` for a degree-n polynomial. Merging is commutative and associative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GaloisEvidence {
    pub n: usize,
    /// Cycle length to its preferred witness.
    pub cycles: BTreeMap<usize, CycleWitness>,
    pub irreducibility: Option<IrreducibilityProof>,
    /// Divisor of every rational factor degree, with the smallest prime that forces it.
    pub factor_degree_divisors: BTreeMap<usize, u64>,
    /// Degrees of irreducible p-adic factors, with the smallest prime.
    pub local_factors: BTreeMap<usize, u64>,
    /// Factor patterns mod p, with the smallest prime producing each.
    #[serde(serialize_with = "patterns_as_pairs")]
    pub patterns: BTreeMap<Vec<usize>, u64>,
}

fn patterns_as_pairs<S: serde::Serializer>(map: &BTreeMap<Vec<usize>, u64>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(map.iter())
}

fn keep_min<K: Ord, V: Ord + Clone>(map: &mut BTreeMap<K, V>, k: K, v: V) {
    match map.get(&k) {
        Some(old) if *old <= v => {}
        _ => {
            map.insert(k, v);
        }
    }
}

impl GaloisEvidence {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            cycles: BTreeMap::new(),
            irreducibility: None,
            factor_degree_divisors: BTreeMap::new(),
            local_factors: BTreeMap::new(),
            patterns: BTreeMap::new(),
        }
    }

    pub fn add_cycle(&mut self, length: usize, witness: CycleWitness) {
        assert!(length <= self.n, "cycle longer than the degree");
        keep_min(&mut self.cycles, length, witness);
    }

    pub fn add_irreducibility(&mut self, proof: IrreducibilityProof) {
        if self.irreducibility.as_ref().is_none_or(|old| proof < *old) {
            self.irreducibility = Some(proof);
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        assert_eq!(self.n, other.n, "merging evidence for different degrees");
        for (k, v) in other.cycles {
            keep_min(&mut self.cycles, k, v);
        }
        if let Some(p) = other.irreducibility {
            self.add_irreducibility(p);
        }
        for (k, v) in other.factor_degree_divisors {
            keep_min(&mut self.factor_degree_divisors, k, v);
        }
        for (k, v) in other.local_factors {
            keep_min(&mut self.local_factors, k, v);
        }
        for (k, v) in other.patterns {
            keep_min(&mut self.patterns, k, v);
        }
        self
    }

    pub fn has_cycle(&self, length: usize) -> bool {
        self.cycles.contains_key(&length)
    }

    /// The stored certificate, or one derived from the sieve or the pigeonhole argument.
    pub fn irreducibility_proof(&self) -> Option<IrreducibilityProof> {
        if let Some(p) = &self.irreducibility {
            return Some(p.clone());
        }
        if let Some(primes) = degree_sieve(self.n, &self.patterns) {
            return Some(IrreducibilityProof::DegreeSieve { primes });
        }
        let (&ell, &ell_prime) = self.local_factors.iter().next_back()?;
        let (&divisor, &divisor_prime) = self.factor_degree_divisors.iter().next_back()?;
        (divisor > self.n - ell).then_some(IrreducibilityProof::Pigeonhole { ell, ell_prime, divisor, divisor_prime })
    }
}

/// Primes whose patterns jointly rule out every proper factor degree, if they do.
fn degree_sieve(n: usize, patterns: &BTreeMap<Vec<usize>, u64>) -> Option<Vec<u64>> {
    if n < 2 || patterns.is_empty() {
        return None;
    }
    let mut alive = vec![true; n + 1];
    let mut used = Vec::new();
    for (pattern, &p) in patterns {
        let mut reach = vec![false; n + 1];
        reach[0] = true;
        for &d in pattern {
            for s in (d..=n).rev() {
                reach[s] |= reach[s - d];
            }
        }
        if (1..n).any(|s| alive[s] && !reach[s]) {
            used.push(p);
        }
        for s in 1..n {
            alive[s] &= reach[s];
        }
        if (1..n).all(|s| !alive[s]) {
            used.sort_unstable();
            return Some(used);
        }
    }
    None
}

/// Factor degrees of F mod p, read as a cycle type of a Frobenius element.
pub fn dedekind_cycle_type(f: &IntPolynomial, p: u64) -> Result<Vec<usize>, GaloisError> {
    Ok(mod_factor_degrees(f, p)?)
}

/// Cycle lengths l realised as literal l-cycles by a power of an element of cycle type `pattern`.
pub fn literal_cycles(pattern: &[usize]) -> Vec<(usize, Method)> {
    let nontrivial: Vec<usize> = pattern.iter().copied().filter(|&l| l >= 2).collect();
    let mut out = Vec::new();
    for (i, &l) in nontrivial.iter().enumerate() {
        if nontrivial.iter().filter(|&&x| x == l).count() > 1 || out.iter().any(|&(x, _)| x == l) {
            continue;
        }
        let rest = nontrivial
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(1usize, |acc, (_, &x)| acc.lcm(&x));
        if rest == 1 {
            out.push((l, Method::Dedekind));
        } else if rest.gcd(&l) == 1 {
            out.push((l, Method::DedekindPower));
        }
    }
    out
}

fn dedekind_evidence(f: &IntPolynomial, p: u64, n: usize) -> Option<GaloisEvidence> {
    let pattern = dedekind_cycle_type(f, p).ok()?;
    let mut ev = GaloisEvidence::empty(n);
    if pattern == [n] {
        ev.add_irreducibility(IrreducibilityProof::IrreducibleModP { prime: p });
    }
    for (l, method) in literal_cycles(&pattern) {
        ev.add_cycle(l, CycleWitness { method, prime: p, pattern: pattern.clone() });
    }
    ev.patterns.insert(pattern, p);
    Some(ev)
}

/// Certificates read from one Newton polygon of a degree-n polynomial.
pub fn newton_evidence(np: &NewtonPolygon, n: usize) -> GaloisEvidence {
    let mut ev = GaloisEvidence::empty(n);
    let p = np.p;
    if np.degree() != n {
        return ev;
    }
    if np.certifies_irreducible() {
        ev.add_irreducibility(IrreducibilityProof::NewtonSegment { prime: p });
    }
    if let Some(d) = np.global_divisor() {
        keep_min(&mut ev.factor_degree_divisors, d, p);
    }
    for fc in factor_degree_constraints(np) {
        if let Some(l) = fc.irreducible_degree {
            keep_min(&mut ev.local_factors, l, p);
        }
    }
    if let Ok(lengths) = certified_cycles(np, n, CycleCheck::Strict) {
        for l in lengths {
            ev.add_cycle(l, CycleWitness { method: Method::Newton, prime: p, pattern: Vec::new() });
        }
    }
    ev
}

/// Dedekind reduction at every prime up to `prime_budget`, merged with the supplied polygons.
pub fn collect_evidence(f: &IntPolynomial, prime_budget: u64, polygons: &[NewtonPolygon]) -> GaloisEvidence {
    let n = f.degree().unwrap_or(0);
    let mut ev = GaloisEvidence::empty(n);
    for p in primes_up_to(prime_budget) {
        if let Some(e) = dedekind_evidence(f, p, n) {
            ev = ev.merge(e);
        }
    }
    for np in polygons {
        ev = ev.merge(newton_evidence(np, n));
    }
    ev
}

/// Irreducibility by Newton polygons, irreducibility mod p, or the degree sieve, over primes up to the budget.
pub fn certify_irreducible(f: &IntPolynomial, prime_budget: u64) -> Option<IrreducibilityProof> {
    let n = f.degree()?;
    if n == 0 {
        return None;
    }
    if n == 1 {
        return Some(IrreducibilityProof::DegreeSieve { primes: Vec::new() });
    }
    let mut ev = GaloisEvidence::empty(n);
    for p in primes_up_to(prime_budget) {
        if let Ok(np) = newton_polygon(f, p) {
            if np.certifies_irreducible() {
                ev.add_irreducibility(IrreducibilityProof::NewtonSegment { prime: p });
            }
        }
        if let Some(e) = dedekind_evidence(f, p, n) {
            ev = ev.merge(e);
        }
        if let Some(proof) = ev.irreducibility_proof() {
            return Some(proof);
        }
    }
    None
}

/// Outcome of the pigeonhole step for gcd(m, n) strictly between 1 and m.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseCUpgrade {
    pub proof: IrreducibilityProof,
    /// Whether `n >= 2m^2 - m`; reported, not required.
    pub size_hypothesis_met: bool,
}

/// Irreducible when some local factor has degree `ell` and `divisor > n - ell`.
pub fn case_c_combine(evidence: &GaloisEvidence, divisor: usize, n: usize, m: usize) -> Result<CaseCUpgrade, GaloisError> {
    let Some((&ell, &ell_prime)) = evidence.local_factors.iter().next_back() else {
        return Err(GaloisError::HypothesisUnmet("no certified local factor".into()));
    };
    if divisor == 0 || divisor <= n - ell {
        return Err(GaloisError::HypothesisUnmet(format!("{divisor} > {n} - {ell} fails")));
    }
    let divisor_prime = evidence.factor_degree_divisors.get(&divisor).copied().unwrap_or(0);
    Ok(CaseCUpgrade {
        proof: IrreducibilityProof::Pigeonhole { ell, ell_prime, divisor, divisor_prime },
        size_hypothesis_met: n + m >= 2 * m * m,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SnStatus {
    CertifiedSn,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub clause: String,
    pub length: Option<usize>,
    pub witness: Option<CycleWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SnVerdict {
    pub status: SnStatus,
    /// `"generating-set"` or `"long-cycle"` when certified.
    pub route: Option<String>,
    pub irreducibility: Option<IrreducibilityProof>,
    pub clauses: Vec<Clause>,
}

fn is_prime_usize(x: usize) -> bool {
    crate::arith::is_prime(x as u64)
}

/// Applies the generating-set shortcut, then the four-clause criterion with parameter m.
pub fn certify_sn(evidence: &GaloisEvidence, m: usize) -> SnVerdict {
    let n = evidence.n;
    let irreducibility = evidence.irreducibility_proof();
    let clause = |name: &str, l: usize| Clause {
        clause: name.into(),
        length: Some(l),
        witness: evidence.cycles.get(&l).cloned(),
    };
    let inconclusive = |clauses| SnVerdict { status: SnStatus::Inconclusive, route: None, irreducibility: irreducibility.clone(), clauses };
    if n < 2 || irreducibility.is_none() || !evidence.has_cycle(2) {
        return inconclusive(Vec::new());
    }
    let transposition = clause("transposition", 2);

    let big = if n == 2 || evidence.has_cycle(n - 1) {
        Some(n - 1)
    } else {
        (n / 2 + 1..=n).rev().find(|&l| is_prime_usize(l) && 2 * l > n && evidence.has_cycle(l))
    };
    if let Some(l) = big {
        let name = if l == n - 1 { "cycle-n-minus-1" } else { "prime-cycle-above-half" };
        let mut c = clause(name, l);
        if l <= 1 {
            c.witness = None;
        }
        return SnVerdict {
            status: SnStatus::CertifiedSn,
            route: Some("generating-set".into()),
            irreducibility,
            clauses: vec![transposition, c],
        };
    }

    if n <= m {
        return inconclusive(vec![transposition]);
    }
    let q = evidence.cycles.keys().copied().find(|&l| l > m && is_prime_usize(l));
    let long = evidence.cycles.keys().copied().find(|&l| l + m >= n && l < n);
    match (q, long) {
        (Some(q), Some(l)) => SnVerdict {
            status: SnStatus::CertifiedSn,
            route: Some("long-cycle".into()),
            irreducibility,
            clauses: vec![transposition, clause("prime-cycle", q), clause("long-cycle", l)],
        },
        _ => inconclusive(vec![transposition]),
    }
}

/// Distinct primes up to `bound` at which F has a squarefree reduction of full degree.
pub fn good_primes(f: &IntPolynomial, bound: u64) -> BTreeSet<u64> {
    primes_up_to(bound).into_iter().filter(|&p| mod_factor_degrees(f, p).is_ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn dedekind_examples() {
        let f = poly(&[-1, -1, 0, 1]);
        assert_eq!(dedekind_cycle_type(&f, 2).unwrap(), vec![3]);
        assert_eq!(dedekind_cycle_type(&f, 5).unwrap(), vec![1, 2]);
        assert!(matches!(
            dedekind_cycle_type(&poly(&[1, 0, 1]), 2),
            Err(GaloisError::Arith(ArithError::NotSquarefreeModP(2)))
        ));
    }

    #[test]
    fn literal_cycle_extraction() {
        assert_eq!(literal_cycles(&[1, 1, 2]), vec![(2, Method::Dedekind)]);
        assert_eq!(literal_cycles(&[1, 2, 3]), vec![(2, Method::DedekindPower), (3, Method::DedekindPower)]);
        assert!(literal_cycles(&[2, 2]).is_empty());
        assert!(literal_cycles(&[2, 4]).is_empty());
        assert_eq!(literal_cycles(&[5]), vec![(5, Method::Dedekind)]);
    }

    #[test]
    fn irreducibility_routes() {
        assert_eq!(certify_irreducible(&poly(&[2, 0, 0, 0, 0, 1]), 10), Some(IrreducibilityProof::NewtonSegment { prime: 2 }));
        assert_eq!(certify_irreducible(&poly(&[-1, -1, 0, 1]), 10), Some(IrreducibilityProof::IrreducibleModP { prime: 2 }));
        let product = &poly(&[1, 0, 1]) * &poly(&[2, 0, 1]);
        assert_eq!(certify_irreducible(&product, 200), None);
    }

    #[test]
    fn sieve_certifies_without_irreducible_reduction() {
        // x^4 + x + 1 style patterns: {1,3} and {2,2} leave no proper subset sum in common
        let mut patterns = BTreeMap::new();
        patterns.insert(vec![1, 3], 5);
        patterns.insert(vec![2, 2], 7);
        assert_eq!(degree_sieve(4, &patterns), Some(vec![5, 7]));
    }

    #[test]
    fn case_c_examples() {
        let mut ev = GaloisEvidence::empty(10);
        ev.local_factors.insert(9, 3);
        let up = case_c_combine(&ev, 5, 10, 4).unwrap();
        assert!(matches!(up.proof, IrreducibilityProof::Pigeonhole { ell: 9, divisor: 5, .. }));
        assert!(!up.size_hypothesis_met);
        let mut ev = GaloisEvidence::empty(12);
        ev.local_factors.insert(8, 3);
        assert!(matches!(case_c_combine(&ev, 3, 12, 4), Err(GaloisError::HypothesisUnmet(_))));
    }

    #[test]
    fn sn_examples() {
        let f = poly(&[-1, -1, 0, 1]);
        let ev = collect_evidence(&f, 10, &[]);
        assert!(ev.has_cycle(3) && ev.has_cycle(2));
        let v = certify_sn(&ev, 2);
        assert_eq!(v.status, SnStatus::CertifiedSn);

        let mut ev = GaloisEvidence::empty(6);
        ev.irreducibility = Some(IrreducibilityProof::IrreducibleModP { prime: 7 });
        let w = CycleWitness { method: Method::Dedekind, prime: 11, pattern: Vec::new() };
        for l in [2, 3, 4] {
            ev.add_cycle(l, w.clone());
        }
        let v = certify_sn(&ev, 2);
        assert_eq!(v.status, SnStatus::CertifiedSn);
        assert_eq!(v.route.as_deref(), Some("long-cycle"));
        ev.cycles.remove(&2);
        assert_eq!(certify_sn(&ev, 2).status, SnStatus::Inconclusive);
    }

    #[test]
    fn evidence_collection_edges() {
        let ev = collect_evidence(&poly(&[1, 0, 1]), 10, &[]);
        assert_eq!(ev.cycles.get(&2).map(|w| w.prime), Some(3));
        let ev = collect_evidence(&poly(&[1, 0, 1]), 0, &[]);
        assert!(ev.cycles.is_empty() && ev.patterns.is_empty());
    }
}
