//! The rational-point family: the top `sm - n` coefficients of `F` are
//! removed by solving for `a_s, a_{s-1}, ...` one at a time.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::laurent::{Laurent, SymPoly};
use super::{FamilyError, RatPolynomial, SpecializationVector};
use crate::arith::{IntPolynomial, Rational};
use crate::planner::{Curve, PointPlan};

/// Closed-form expressions for the eliminated coefficients of g.
#[derive(Debug, Clone)]
pub struct PointEliminationTable {
    pub plan: PointPlan,
    pub var_names: Vec<String>,
    /// `(index of a, expression)`, in elimination order.
    pub entries: Vec<(u64, Laurent)>,
    /// Symbolic coefficients of F at `t^n ..= t^{sm}`, indexed from `t^n`.
    pub top_coefficients: Vec<Laurent>,
}

impl PointEliminationTable {
    /// True when every coefficient above `t^n` is identically zero and the `t^n` one is not.
    pub fn degree_contract_holds(&self) -> bool {
        !self.top_coefficients[0].is_zero() && self.top_coefficients[1..].iter().all(Laurent::is_zero)
    }
}

impl Serialize for PointEliminationTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let entries: Vec<(String, String)> = self
            .entries
            .iter()
            .map(|(i, e)| (format!("a_{i}"), e.display_with(&self.var_names)))
            .collect();
        let mut st = s.serialize_struct("PointEliminationTable", 3)?;
        st.serialize_field("plan", &self.plan)?;
        st.serialize_field("entries", &entries)?;
        st.serialize_field("degree_contract_holds", &self.degree_contract_holds())?;
        st.end()
    }
}

struct Layout {
    top_a: usize,
    deg_h: usize,
    r: usize,
}

impl Layout {
    fn new(plan: &PointPlan) -> Self {
        Self { top_a: plan.top_free_a() as usize, deg_h: plan.deg_h as usize, r: plan.r as usize }
    }

    fn nvars(&self) -> usize {
        self.top_a + 1 + self.deg_h + 1 + self.r + 1
    }

    fn a(&self, i: usize) -> usize {
        i
    }

    fn b(&self, j: usize) -> usize {
        self.top_a + 1 + j
    }

    fn alpha(&self, j: usize) -> usize {
        self.top_a + 1 + self.deg_h + 1 + j
    }

    fn beta(&self) -> usize {
        self.alpha(self.r)
    }

    fn names(&self) -> Vec<String> {
        let mut v: Vec<String> = (0..=self.top_a).map(|i| format!("a{i}")).collect();
        v.extend((0..=self.deg_h).map(|j| format!("b{j}")));
        v.extend((0..self.r).map(|j| format!("alpha{j}")));
        v.push("beta".into());
        v
    }
}

fn f_rational(curve: &Curve) -> Vec<Rational> {
    curve.f().coeffs().iter().map(|c| Rational::from_integer(c.clone())).collect()
}

/// Derives the eliminations by expanding the `t^{sm-u}` coefficient of F and solving
/// for `a_{s-u}`, then checks symbolically that the top coefficients vanish.
pub fn point_elimination_table(curve: &Curve, plan: &PointPlan) -> Result<PointEliminationTable, FamilyError> {
    if !curve.is_monic() {
        return Err(FamilyError::Shape("point-case family needs a monic f".into()));
    }
    let lay = Layout::new(plan);
    let nv = lay.nvars();
    let m = plan.m as usize;
    let s = plan.s as usize;
    let n = plan.n as usize;
    let var = |i| Laurent::var(nv, i);

    let h = SymPoly::from_coeffs(nv, (0..=lay.deg_h).map(|j| var(lay.b(j))).collect());
    let mut gamma: Vec<Laurent> = (0..lay.r).map(|j| var(lay.alpha(j))).collect();
    gamma.push(var(lay.beta()).pow(plan.gamma_lead_power() as u32));
    let gamma = SymPoly::from_coeffs(nv, gamma);
    let lhs = h.pow(m as u32).mul(&gamma.compose_into(&f_rational(curve)));

    let mut a: Vec<Laurent> = (0..=s)
        .map(|i| if i <= lay.top_a { var(lay.a(i)) } else { Laurent::zero(nv) })
        .collect();
    let a_s = var(lay.b(lay.deg_h)).mul(&var(lay.beta()).pow(plan.a_top_power() as u32));
    a[s] = a_s.clone();
    let mut entries = vec![(s as u64, a_s.clone())];
    let pivot = a_s.pow(m as u32 - 1).scale(&Rational::from_integer(BigInt::from(m)));
    for u in 1..(m - plan.k as usize) {
        let g = SymPoly::from_coeffs(nv, a.clone());
        let c = lhs.sub(&g.pow(m as u32)).coeff(s * m - u);
        let solved = c.div_monomial(&pivot).expect("pivot is a single term");
        a[s - u] = solved.clone();
        entries.push(((s - u) as u64, solved));
    }
    let g = SymPoly::from_coeffs(nv, a);
    let full = lhs.sub(&g.pow(m as u32));
    let top_coefficients: Vec<Laurent> = (n..=s * m).map(|i| full.coeff(i)).collect();
    let table = PointEliminationTable { plan: plan.clone(), var_names: lay.names(), entries, top_coefficients };
    if let Some(bad) = table.top_coefficients[1..].iter().position(|c| !c.is_zero()) {
        return Err(FamilyError::EliminationFailed(n + 1 + bad));
    }
    Ok(table)
}

impl PointEliminationTable {
    /// Evaluates the eliminated coefficients at a free specialization.
    pub fn evaluate(&self, free: &SpecializationVector) -> Option<Vec<(u64, Rational)>> {
        let mut vals: Vec<Rational> = Vec::new();
        for v in free.a.iter().chain(&free.b).chain(&free.alpha) {
            vals.push(Rational::from_integer(v.clone()));
        }
        self.entries.iter().map(|(i, e)| e.eval(&vals).map(|v| (*i, v))).collect()
    }
}

fn check_shape(plan: &PointPlan, free: &SpecializationVector) -> Result<(), FamilyError> {
    let want = (plan.top_free_a() as usize + 1, plan.deg_h as usize + 1, plan.r as usize + 1);
    let got = (free.a.len(), free.b.len(), free.alpha.len());
    if want != got {
        return Err(FamilyError::Shape(format!("expected (a, b, alpha) lengths {want:?}, got {got:?}")));
    }
    Ok(())
}

/// Builds the degree-n member; `free.alpha[r]` is the base beta of gamma's leading coefficient.
#[allow(non_snake_case)]
pub fn build_point_F(curve: &Curve, plan: &PointPlan, free: &SpecializationVector) -> Result<RatPolynomial, FamilyError> {
    if !curve.is_monic() {
        return Err(FamilyError::Shape("point-case family needs a monic f".into()));
    }
    check_shape(plan, free)?;
    let m = plan.m as usize;
    let s = plan.s as usize;
    let r = plan.r as usize;
    let beta = &free.alpha[r];
    let mut gamma = free.alpha[..r].to_vec();
    gamma.push(num_traits::pow(beta.clone(), plan.gamma_lead_power() as usize));
    let h = IntPolynomial::new(free.b.clone());
    let lhs = &h.pow(m as u32) * &curve.f().compose(&IntPolynomial::new(gamma));
    let lhs: Vec<Rational> = (0..=s * m).map(|i| Rational::from_integer(lhs.coeff(i))).collect();

    let a_s = free.b[plan.deg_h as usize].clone() * num_traits::pow(beta.clone(), plan.a_top_power() as usize);
    if a_s.is_zero() {
        return Err(FamilyError::ZeroLeadingData);
    }
    let mut a: Vec<Rational> = vec![Rational::zero(); s + 1];
    for (i, v) in free.a.iter().enumerate() {
        a[i] = Rational::from_integer(v.clone());
    }
    a[s] = Rational::from_integer(a_s.clone());
    let pivot = Rational::from_integer(BigInt::from(m) * num_traits::pow(a_s, m - 1));
    for u in 1..(m - plan.k as usize) {
        let gm = rat_pow_poly(&a, m);
        let c = &lhs[s * m - u] - gm.get(s * m - u).cloned().unwrap_or_default();
        a[s - u] = c / &pivot;
    }
    let gm = rat_pow_poly(&a, m);
    let out = (0..=s * m)
        .map(|i| &lhs[i] - gm.get(i).cloned().unwrap_or_default())
        .collect();
    Ok(RatPolynomial::new(out))
}

fn rat_pow_poly(p: &[Rational], k: usize) -> Vec<Rational> {
    let mut out = vec![Rational::one()];
    for _ in 0..k {
        let mut next = vec![Rational::zero(); out.len() + p.len() - 1];
        for (i, x) in out.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in p.iter().enumerate() {
                next[i + j] += x * y;
            }
        }
        out = next;
    }
    out
}
