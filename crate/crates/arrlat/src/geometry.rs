//! Projective points and lines, exact intersection lattices, and the
//! numerical invariants built on the multiplicity census.

use crate::exactfield::{NumberField, Rational, Scalar};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

pub const MAX_LINES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("lines {0} and {1} coincide")]
    CoincidentLines(usize, usize),
    #[error("line {0} has all coefficients zero")]
    ZeroLine(usize),
    #[error("an arrangement holds at most {MAX_LINES} lines, got {0}")]
    TooManyLines(usize),
    #[error("coefficients from different number fields")]
    FieldMismatch,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub fn cross<F: Scalar>(a: &[F; 3], b: &[F; 3]) -> [F; 3] {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

pub fn dot<F: Scalar>(a: &[F; 3], b: &[F; 3]) -> F {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone() + a[2].clone() * b[2].clone()
}

pub fn det3<F: Scalar>(a: &[F; 3], b: &[F; 3], c: &[F; 3]) -> F {
    dot(a, &cross(b, c))
}

fn all_zero<F: Scalar>(v: &[F; 3]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Same projective point/line: the cross product of the triples vanishes.
pub fn proportional<F: Scalar>(a: &[F; 3], b: &[F; 3]) -> bool {
    all_zero(&cross(a, b))
}

/// The line `A x + B y + C z = 0`.
#[derive(Clone, Debug)]
pub struct ProjLine<F> {
    pub coeffs: [F; 3],
}

#[derive(Clone, Debug)]
pub struct ProjPoint<F> {
    pub coords: [F; 3],
}

impl<F: Scalar> ProjLine<F> {
    pub fn new(a: F, b: F, c: F) -> Result<Self, GeometryError> {
        let coeffs = [a, b, c];
        if all_zero(&coeffs) {
            return Err(GeometryError::ZeroLine(0));
        }
        Ok(ProjLine { coeffs })
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Self {
        ProjLine::new(F::from_i64(a), F::from_i64(b), F::from_i64(c)).expect("nonzero line")
    }

    pub fn incident(&self, p: &ProjPoint<F>) -> bool {
        dot(&self.coeffs, &p.coords).is_zero()
    }

    pub fn scaled(&self, s: &F) -> Self {
        ProjLine { coeffs: self.coeffs.clone().map(|c| c * s.clone()) }
    }

    /// Display-only normalization: first nonzero coefficient becomes 1.
    pub fn normalized(&self) -> Self {
        ProjLine { coeffs: normalize(&self.coeffs) }
    }
}

impl<F: Scalar> PartialEq for ProjLine<F> {
    fn eq(&self, o: &Self) -> bool {
        proportional(&self.coeffs, &o.coeffs)
    }
}

impl<F: Scalar> ProjPoint<F> {
    pub fn new(x: F, y: F, z: F) -> Result<Self, GeometryError> {
        let coords = [x, y, z];
        if all_zero(&coords) {
            return Err(GeometryError::InvalidInput("the zero vector is not a point".into()));
        }
        Ok(ProjPoint { coords })
    }

    pub fn normalized(&self) -> Self {
        ProjPoint { coords: normalize(&self.coords) }
    }
}

impl<F: Scalar> PartialEq for ProjPoint<F> {
    fn eq(&self, o: &Self) -> bool {
        proportional(&self.coords, &o.coords)
    }
}

fn normalize<F: Scalar>(v: &[F; 3]) -> [F; 3] {
    match v.iter().find(|c| !c.is_zero()) {
        Some(p) => {
            let p = p.clone();
            v.clone().map(|c| c / p.clone())
        }
        None => v.clone(),
    }
}

impl<F: Scalar + fmt::Display> fmt::Display for ProjLine<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.normalized();
        write!(f, "[{} : {} : {}]", n.coeffs[0], n.coeffs[1], n.coeffs[2])
    }
}

impl<F: Scalar + fmt::Display> fmt::Display for ProjPoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.normalized();
        write!(f, "({} : {} : {})", n.coords[0], n.coords[1], n.coords[2])
    }
}

/// Intersection point of two distinct lines.
pub fn meet<F: Scalar>(l1: &ProjLine<F>, l2: &ProjLine<F>) -> Result<ProjPoint<F>, GeometryError> {
    let c = cross(&l1.coeffs, &l2.coeffs);
    if all_zero(&c) {
        return Err(GeometryError::CoincidentLines(1, 2));
    }
    Ok(ProjPoint { coords: c })
}

/// Line through two distinct points.
pub fn join<F: Scalar>(p: &ProjPoint<F>, q: &ProjPoint<F>) -> Result<ProjLine<F>, GeometryError> {
    let c = cross(&p.coords, &q.coords);
    if all_zero(&c) {
        return Err(GeometryError::InvalidInput("points coincide".into()));
    }
    Ok(ProjLine { coeffs: c })
}

/// An ordered list of pairwise distinct lines over one coefficient field.
#[derive(Clone, Debug)]
pub struct Arrangement<F> {
    pub field: Option<Arc<NumberField>>,
    pub lines: Vec<ProjLine<F>>,
}

impl<F: Scalar> Arrangement<F> {
    pub fn new(field: Option<Arc<NumberField>>, lines: Vec<ProjLine<F>>) -> Result<Self, GeometryError> {
        if lines.len() > MAX_LINES {
            return Err(GeometryError::TooManyLines(lines.len()));
        }
        for (i, l) in lines.iter().enumerate() {
            if all_zero(&l.coeffs) {
                return Err(GeometryError::ZeroLine(i + 1));
            }
            for c in &l.coeffs {
                if let Some(f) = c.number_field() {
                    if field.as_deref() != Some(f.as_ref()) {
                        return Err(GeometryError::FieldMismatch);
                    }
                }
            }
        }
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                if lines[i] == lines[j] {
                    return Err(GeometryError::CoincidentLines(i + 1, j + 1));
                }
            }
        }
        Ok(Arrangement { field, lines })
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Same arrangement with line `i` (1-based) removed.
    pub fn delete_line(&self, i: usize) -> Self {
        let mut lines = self.lines.clone();
        lines.remove(i - 1);
        Arrangement { field: self.field.clone(), lines }
    }

    /// Relabel: new line `k` is old line `perm[k]` (both 1-based).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Arrangement { field: self.field.clone(), lines: perm.iter().map(|&p| self.lines[p - 1].clone()).collect() }
    }
}

/// One intersection point with its incident lines (1-based, ascending).
#[derive(Clone, Debug)]
pub struct LatticePoint<F> {
    pub point: ProjPoint<F>,
    pub lines: Vec<usize>,
}

impl<F> LatticePoint<F> {
    pub fn multiplicity(&self) -> usize {
        self.lines.len()
    }
}

#[derive(Clone, Debug)]
pub struct IntersectionLattice<F> {
    pub n: usize,
    pub points: Vec<LatticePoint<F>>,
    /// r -> n_r, only nonzero counts are stored.
    pub census: BTreeMap<usize, usize>,
}

/// All pairwise meets grouped by exact projective equality.
pub fn compute_lattice<F: Scalar>(a: &Arrangement<F>) -> IntersectionLattice<F> {
    let n = a.lines.len();
    let mut points: Vec<LatticePoint<F>> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let p = meet(&a.lines[i], &a.lines[j]).expect("arrangement lines are distinct");
            match points.iter_mut().find(|q| q.point == p) {
                Some(q) => {
                    for k in [i + 1, j + 1] {
                        if !q.lines.contains(&k) {
                            q.lines.push(k);
                        }
                    }
                }
                None => points.push(LatticePoint { point: p, lines: vec![i + 1, j + 1] }),
            }
        }
    }
    for p in points.iter_mut() {
        p.lines.sort_unstable();
    }
    points.sort_by(|a, b| a.lines.cmp(&b.lines));
    let census = census_of(&points);
    IntersectionLattice { n, points, census }
}

fn census_of<F>(points: &[LatticePoint<F>]) -> BTreeMap<usize, usize> {
    let mut census = BTreeMap::new();
    for p in points {
        *census.entry(p.multiplicity()).or_insert(0) += 1;
    }
    census
}

impl<F: Scalar> IntersectionLattice<F> {
    pub fn n_r(&self, r: usize) -> usize {
        self.census.get(&r).copied().unwrap_or(0)
    }

    /// Incident sets of the points of multiplicity at least 3.
    pub fn multiple_point_sets(&self) -> Vec<Vec<usize>> {
        self.points.iter().filter(|p| p.multiplicity() >= 3).map(|p| p.lines.clone()).collect()
    }
}

pub fn multiplicity_census<F: Scalar>(lat: &IntersectionLattice<F>) -> BTreeMap<usize, usize> {
    lat.census.clone()
}

/// Points of multiplicity >= 3 on line `i` (1-based).
pub fn multiple_points_on_line<F: Scalar>(
    lat: &IntersectionLattice<F>,
    i: usize,
) -> Result<Vec<&LatticePoint<F>>, GeometryError> {
    if i == 0 || i > lat.n {
        return Err(GeometryError::InvalidInput(format!("line index {i} out of range 1..={}", lat.n)));
    }
    Ok(lat.points.iter().filter(|p| p.multiplicity() >= 3 && p.lines.contains(&i)).collect())
}

/// `k(k-1)/2 = sum_r n_r r(r-1)/2`.
pub fn check_counting_formula<F>(lat: &IntersectionLattice<F>, k: usize) -> bool {
    let lhs = k * k.saturating_sub(1) / 2;
    let rhs: usize = lat.census.iter().map(|(r, n)| n * r * (r - 1) / 2).sum();
    lhs == rhs
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hirzebruch {
    Holds,
    Violated,
    PreconditionFailed,
}

impl Hirzebruch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Hirzebruch::Holds => "holds",
            Hirzebruch::Violated => "violated",
            Hirzebruch::PreconditionFailed => "precondition_failed",
        }
    }
}

/// `n_2 + 3/4 n_3 >= k + sum_{r>=5} (2r-9) n_r` when `n_k = n_{k-1} = n_{k-2} = 0`.
pub fn check_hirzebruch<F>(lat: &IntersectionLattice<F>, k: usize) -> Hirzebruch {
    let get = |r: usize| lat.census.get(&r).copied().unwrap_or(0);
    for r in [k, k.wrapping_sub(1), k.wrapping_sub(2)] {
        if r >= 2 && r <= k && get(r) != 0 {
            return Hirzebruch::PreconditionFailed;
        }
    }
    let r = |n: i64| Rational::from_integer(n.into());
    let lhs = r(get(2) as i64) + r(3) * r(get(3) as i64) / r(4);
    let mut rhs = r(k as i64);
    for (&m, &c) in &lat.census {
        if m >= 5 {
            rhs += r((2 * m as i64 - 9) * c as i64);
        }
    }
    if lhs >= rhs {
        Hirzebruch::Holds
    } else {
        Hirzebruch::Violated
    }
}

/// Every line passes through at least 3 points of multiplicity >= 3.
pub fn is_non_reductive<F>(lat: &IntersectionLattice<F>, k: usize) -> bool {
    (1..=k).all(|i| lat.points.iter().filter(|p| p.lines.len() >= 3 && p.lines.contains(&i)).count() >= 3)
}

pub type RationalLine = ProjLine<Rational>;
pub type RationalPoint = ProjPoint<Rational>;
pub type RationalArrangement = Arrangement<Rational>;
pub type ExactLine = ProjLine<crate::FieldValue>;
pub type ExactPoint = ProjPoint<crate::FieldValue>;
pub type ExactArrangement = Arrangement<crate::FieldValue>;
pub type ExactLattice = IntersectionLattice<crate::FieldValue>;
pub type FloatLine = ProjLine<f64>;
