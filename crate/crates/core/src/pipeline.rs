//! End-to-end runs: plan, recipe, box, seeded sample, polygon check and Galois verdict.

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{valuation_unchecked, IntPolynomial, Rational, Valuation};
use crate::constraints::{
    recipe_case, recipe_point_long, recipe_short_cycle, sample, short_cycle_prime, ConstraintError, ConstraintSet,
    Recipe,
};
use crate::family::{build_F, build_point_F, coefficient_box, coefficient_box_point, CoefficientBox, FamilyError, SpecializationVector};
use crate::galois::{certify_sn, collect_evidence, GaloisEvidence, SnStatus, SnVerdict};
use crate::newton::{newton_polygon, NewtonPolygon};
use crate::planner::{plan_degrees, plan_point_case, Curve, DegreePlan, PlanError, PointPlan};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Target {
    Generic(DegreePlan),
    Point(PointPlan),
}

impl Target {
    pub fn n(&self) -> u64 {
        match self {
            Target::Generic(p) => p.n,
            Target::Point(p) => p.n,
        }
    }
}

/// Everything needed to draw samples for one recipe.
#[derive(Debug, Clone, Serialize)]
pub struct Prepared {
    #[serde(skip)]
    pub curve: Curve,
    pub target: Target,
    pub constraints: ConstraintSet,
    #[serde(rename = "box")]
    pub bx: CoefficientBox,
}

pub fn prepare(curve: &Curve, n: u64, recipe: Recipe, y: &Rational, budget: u64) -> Result<Prepared, PipelineError> {
    let (target, constraints, bx) = match recipe {
        Recipe::PointLong => {
            let plan = plan_point_case(curve, n)?;
            let cs = recipe_point_long(curve, &plan, budget)?;
            let bx = coefficient_box_point(&plan, y);
            (Target::Point(plan), cs, bx)
        }
        Recipe::ShortCycle { ell } => {
            let plan = plan_degrees(curve, n)?;
            let (p, a0) = short_cycle_prime(curve, n, budget)?;
            let cs = recipe_short_cycle(&plan, ell, p, &a0)?;
            let bx = coefficient_box(&plan, y);
            (Target::Generic(plan), cs, bx)
        }
        _ => {
            let plan = plan_degrees(curve, n)?;
            let cs = recipe_case(curve, &plan, recipe, budget)?;
            let bx = coefficient_box(&plan, y);
            (Target::Generic(plan), cs, bx)
        }
    };
    Ok(Prepared { curve: curve.clone(), target, constraints, bx })
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleRecord {
    pub index: u64,
    pub spec: SpecializationVector,
    /// Integer multiple of F (F itself for the generic family).
    #[serde(rename = "F")]
    pub f: IntPolynomial,
    /// The multiplier used to clear denominators.
    #[serde(with = "crate::arith::bigint_string")]
    pub scale: BigInt,
    /// Reason for rejection, when the sample degenerates.
    pub rejected: Option<String>,
    pub polygons: Vec<NewtonPolygon>,
    pub polygon_matches: bool,
    pub evidence: Option<GaloisEvidence>,
    pub verdict: Option<SnVerdict>,
}

impl SampleRecord {
    pub fn certified(&self) -> bool {
        self.verdict.as_ref().is_some_and(|v| v.status == SnStatus::CertifiedSn)
    }
}

/// The polygon of `F = g / scale` at p, from the polygon of the integral model g.
fn shifted_polygon(g: &IntPolynomial, scale: &BigInt, p: u64) -> NewtonPolygon {
    let mut np = newton_polygon(g, p).expect("recipe primes are prime and F is nonzero");
    if let Valuation::Finite(v) = valuation_unchecked(scale, p) {
        for vertex in &mut np.vertices {
            vertex.1 -= v as i64;
        }
    }
    np
}

/// Draws sample `index`, builds F, and checks the predicted polygons.
/// With `prime_budget = Some(_)`, also gathers evidence and an S_n verdict.
pub fn run_sample(prep: &Prepared, seed: u64, index: u64, prime_budget: Option<u64>) -> Result<SampleRecord, PipelineError> {
    let spec = sample(&prep.constraints, &prep.bx, seed, index)?;
    let (f, scale) = match &prep.target {
        Target::Generic(_) => (build_F(&prep.curve, &spec), BigInt::from(1)),
        Target::Point(plan) => build_point_F(&prep.curve, plan, &spec)?.to_integral(),
    };
    let n = prep.target.n() as usize;
    let mut record = SampleRecord {
        index,
        spec,
        f,
        scale,
        rejected: None,
        polygons: Vec::new(),
        polygon_matches: false,
        evidence: None,
        verdict: None,
    };
    if record.f.degree() != Some(n) {
        record.rejected = Some(format!("degree {:?} instead of {n}", record.f.degree()));
        return Ok(record);
    }
    record.polygons = prep
        .constraints
        .predicted
        .iter()
        .map(|pp| shifted_polygon(&record.f, &record.scale, pp.p))
        .collect();
    record.polygon_matches = prep.constraints.predicted.iter().zip(&record.polygons).all(|(pp, np)| pp.matches(np));
    if let Some(budget) = prime_budget {
        let ev = collect_evidence(&record.f, budget, &record.polygons);
        record.verdict = Some(certify_sn(&ev, prep.curve.m() as usize));
        record.evidence = Some(ev);
    }
    Ok(record)
}
