//! p-adic Newton polygons and the certificates read off their segments.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith::{is_prime, rational_string, valuation_unchecked, IntPolynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewtonError {
    #[error("Newton polygon of the zero polynomial")]
    ZeroPolynomial,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cycle certificate needs gcd(n, p) = 1, got n = {n}, p = {p}")]
    ConditionViolated { n: usize, p: u64 },
}

/// Whether the gcd(n, p) = 1 side condition is enforced before emitting cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleCheck {
    Strict,
    /// Exploration only; never used by certified pipelines.
    Relaxed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub x_start: usize,
    pub x_end: usize,
    pub y_start: i64,
    pub y_end: i64,
    pub slope: Rational,
    pub length: usize,
}

impl Segment {
    /// Signed rise `y_end - y_start`.
    pub fn rise(&self) -> i64 {
        self.y_end - self.y_start
    }

    /// Denominator of the slope in lowest terms.
    pub fn reduced_denominator(&self) -> usize {
        let g = (self.rise().unsigned_abs() as usize).gcd(&self.length);
        self.length / g
    }

    /// True when rise and length are coprime.
    pub fn is_coprime(&self) -> bool {
        self.reduced_denominator() == self.length
    }
}

impl Serialize for Segment {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Segment", 3)?;
        st.serialize_field("from", &[self.x_start as i64, self.y_start])?;
        st.serialize_field("to", &[self.x_end as i64, self.y_end])?;
        st.serialize_field("slope", &rational_string(&self.slope))?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub p: u64,
    pub vertices: Vec<(usize, i64)>,
}

impl Serialize for NewtonPolygon {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let verts: Vec<[i64; 2]> = self.vertices.iter().map(|&(x, y)| [x as i64, y]).collect();
        let mut st = s.serialize_struct("NewtonPolygon", 3)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("vertices", &verts)?;
        st.serialize_field("segments", &self.segments())?;
        st.end()
    }
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i128 {
    (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
}

/// Lower convex hull of points sorted by strictly increasing x.
/// Collinear interior points are dropped.
pub fn lower_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(points.len());
    for &pt in points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0 {
            hull.pop();
        }
        hull.push(pt);
    }
    hull
}

impl NewtonPolygon {
    pub fn segments(&self) -> Vec<Segment> {
        self.vertices
            .windows(2)
            .map(|w| {
                let (x0, y0) = w[0];
                let (x1, y1) = w[1];
                let length = x1 - x0;
                Segment {
                    x_start: x0,
                    x_end: x1,
                    y_start: y0,
                    y_end: y1,
                    slope: Rational::new(BigInt::from(y1 - y0), BigInt::from(length as i64)),
                    length,
                }
            })
            .collect()
    }

    /// Degree of the polynomial the polygon was built from.
    pub fn degree(&self) -> usize {
        self.vertices.last().map(|v| v.0).unwrap_or(0)
    }

    /// A divisor of the degree of every rational factor, when one segment spans the whole polygon from x = 0.
    pub fn global_divisor(&self) -> Option<usize> {
        match self.segments().as_slice() {
            [seg] if seg.x_start == 0 => Some(seg.reduced_denominator()),
            _ => None,
        }
    }

    /// True when a single coprime segment spans from x = 0 to the degree.
    pub fn certifies_irreducible(&self) -> bool {
        match self.segments().as_slice() {
            [seg] => seg.x_start == 0 && seg.is_coprime(),
            _ => false,
        }
    }
}

pub fn newton_polygon(f: &IntPolynomial, p: u64) -> Result<NewtonPolygon, NewtonError> {
    if f.is_zero() {
        return Err(NewtonError::ZeroPolynomial);
    }
    if !is_prime(p) {
        return Err(NewtonError::NotPrime(p));
    }
    let points: Vec<(i64, i64)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| valuation_unchecked(c, p).finite().map(|v| (i as i64, v as i64)))
        .collect();
    let vertices = lower_hull(&points)
        .into_iter()
        .map(|(x, y)| (x as usize, y))
        .collect();
    Ok(NewtonPolygon { p, vertices })
}

/// What one segment says about the p-adic factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorConstraint {
    pub x_start: usize,
    pub x_end: usize,
    /// Every irreducible factor of the segment's factor has degree divisible by this.
    pub divisor: usize,
    /// Degree of the irreducible factor certified when the slope data is coprime.
    pub irreducible_degree: Option<usize>,
}

pub fn factor_degree_constraints(np: &NewtonPolygon) -> Vec<FactorConstraint> {
    np.segments()
        .iter()
        .map(|s| FactorConstraint {
            x_start: s.x_start,
            x_end: s.x_end,
            divisor: s.reduced_denominator(),
            irreducible_degree: s.is_coprime().then_some(s.length),
        })
        .collect()
}

/// Cycle lengths certified in the Galois group of a degree-n polynomial.
/// Segments with reduced denominator 1 are skipped.
pub fn certified_cycles(np: &NewtonPolygon, n: usize, check: CycleCheck) -> Result<Vec<usize>, NewtonError> {
    if check == CycleCheck::Strict && (n as u64).gcd(&np.p) != 1 {
        return Err(NewtonError::ConditionViolated { n, p: np.p });
    }
    Ok(np
        .segments()
        .iter()
        .filter(|s| s.is_coprime() && s.length >= 2)
        .map(|s| s.length)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn np(c: &[i64], p: u64) -> NewtonPolygon {
        newton_polygon(&IntPolynomial::from_i64(c), p).unwrap()
    }

    #[test]
    fn eisenstein_shape() {
        let poly = np(&[2, 0, 0, 0, 0, 1], 2);
        assert_eq!(poly.vertices, vec![(0, 1), (5, 0)]);
        assert_eq!(poly.segments()[0].slope, Rational::new((-1).into(), 5.into()));
        assert!(poly.certifies_irreducible());
        assert_eq!(
            certified_cycles(&poly, 5, CycleCheck::Strict).unwrap(),
            vec![5]
        );
    }

    #[test]
    fn side_condition() {
        // (t^2 - 3) at p = 3 inside a degree-6 polynomial is withheld; p = 5 with n = 6 passes
        let poly = np(&[5, 0, 1, 1, 1, 1, 1], 5);
        assert_eq!(poly.vertices[..2], [(0, 1), (2, 0)]);
        assert_eq!(certified_cycles(&poly, 6, CycleCheck::Strict).unwrap(), vec![2]);
        let poly3 = np(&[3, 0, 0, 0, 0, 1], 3);
        assert_eq!(certified_cycles(&poly3, 5, CycleCheck::Strict).unwrap(), vec![5]);
        let poly2 = np(&[2, 0, 0, 0, 0, 0, 1], 2);
        assert_eq!(
            certified_cycles(&poly2, 6, CycleCheck::Strict),
            Err(NewtonError::ConditionViolated { n: 6, p: 2 })
        );
        assert_eq!(certified_cycles(&poly2, 6, CycleCheck::Relaxed).unwrap(), vec![6]);
    }

    #[test]
    fn non_coprime_segment() {
        // points (0,2), (4,0): slope -1/2, length 4
        let poly = np(&[4, 0, 0, 0, 1], 2);
        let fc = factor_degree_constraints(&poly);
        assert_eq!(fc[0].divisor, 2);
        assert_eq!(fc[0].irreducible_degree, None);
        assert!(certified_cycles(&poly, 4, CycleCheck::Relaxed).unwrap().is_empty());
        assert_eq!(poly.global_divisor(), Some(2));
    }

    #[test]
    fn collinear_points_merge() {
        // 4 + 2t + t^2 at p = 2: (0,2),(1,1),(2,0) collinear
        let poly = np(&[4, 2, 1], 2);
        assert_eq!(poly.vertices, vec![(0, 2), (2, 0)]);
    }

    #[test]
    fn json_shape() {
        let poly = np(&[2, 0, 0, 0, 0, 1], 2);
        let j = serde_json::to_string(&poly).unwrap();
        assert_eq!(
            j,
            r#"{"p":2,"vertices":[[0,1],[5,0]],"segments":[{"from":[0,1],"to":[5,0],"slope":"-1/5"}]}"#
        );
    }
}
