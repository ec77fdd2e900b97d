//! Moduli spaces of incidence specs by frame fixing and elimination.
//!
//! Four lines of the incidence spec in general position are sent to a fixed frame
//! (a cross-section of the PGL(3) action). The remaining lines are
//! determined by propagation (a line through two known points is their
//! join) or introduced with one parameter (a pencil through one known
//! point, parametrized affinely by where it meets a reference line) or two.
//! Every multiple point not used in a construction yields a 3x3
//! determinant condition. The system is solved by linear substitution
//! (branching on vanishing leading coefficients), resultants and factoring
//! over Q; every candidate is finally instantiated over its number field
//! and accepted only if its exact lattice reproduces the incidence spec.

use crate::combinatorics::{spec_from_lattice, IncidenceSpec};
use crate::exactfield::{
    factor_over_q, fmt_rational, FieldValue, MPoly, NumberField, Poly, QMPoly, QPoly,
    Rational, Scalar, NVARS,
};
use crate::geometry::{compute_lattice, cross, dot, Arrangement, ExactArrangement, ProjLine};
use num_traits::{One, Zero};
use serde_json::{json, Value};
use std::sync::Arc;
use thiserror::Error;

pub const PARAM_NAMES: [&str; NVARS] = ["t1", "t2", "t3"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizationError {
    #[error("no four lines of the spec are in general position")]
    FrameNotFound,
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("more than {NVARS} residual parameters would be needed")]
    TooManyParameters,
    #[error("spec and arrangement sizes differ")]
    SizeMismatch,
}

type FV = FieldValue;
type FPoly = MPoly<FieldValue>;

/// Four spec lines and their fixed images, plus optional pinned lines that
/// are imposed as extra equations and an optional order in which lines are
/// preferred when a new parameter has to be introduced.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameAssignment {
    pub lines: [usize; 4],
    pub images: [[Rational; 3]; 4],
    pub pins: Vec<(usize, [Rational; 3])>,
    pub pencils: Vec<usize>,
}

pub fn default_images() -> [[Rational; 3]; 4] {
    let r = |a: i64, b: i64, c: i64| [Rational::from_integer(a.into()), Rational::from_integer(b.into()), Rational::from_integer(c.into())];
    // {y=0}, {y=z}, {x=0}, {x=z}
    [r(0, 1, 0), r(0, 1, -1), r(1, 0, 0), r(1, 0, -1)]
}

impl FrameAssignment {
    pub fn with_default_images(lines: [usize; 4]) -> Self {
        FrameAssignment { lines, images: default_images(), pins: Vec::new(), pencils: Vec::new() }
    }

    /// `a,b,c,d` (default images) or `a=A:B:C,...` (explicit images), with
    /// optional extra `k=A:B:C` entries pinning further lines and an
    /// optional `/p,q,...` suffix listing preferred parameter lines.
    pub fn parse(s: &str) -> Result<Self, RealizationError> {
        let bad = |m: &str| RealizationError::InvalidFrame(format!("{m} in `{s}`"));
        let (s, pencil_part) = match s.split_once('/') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let pencils: Vec<usize> = match pencil_part {
            None => Vec::new(),
            Some(b) => b
                .split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| bad("bad pencil line")))
                .collect::<Result<_, _>>()?,
        };
        let mut lines = Vec::new();
        let mut images = Vec::new();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            match item.split_once('=') {
                None => {
                    lines.push(item.parse::<usize>().map_err(|_| bad("bad line index"))?);
                    images.push(None);
                }
                Some((l, img)) => {
                    let l = l.trim().parse::<usize>().map_err(|_| bad("bad line index"))?;
                    let c: Vec<Rational> = img
                        .split(':')
                        .map(|t| crate::exactfield::parse_rational(t).ok_or_else(|| bad("bad coefficient")))
                        .collect::<Result<_, _>>()?;
                    if c.len() != 3 {
                        return Err(bad("an image needs three coefficients"));
                    }
                    lines.push(l);
                    images.push(Some([c[0].clone(), c[1].clone(), c[2].clone()]));
                }
            }
        }
        if lines.len() < 4 {
            return Err(bad("a frame needs four lines"));
        }
        let defaults = default_images();
        let mut imgs: [[Rational; 3]; 4] = defaults.clone();
        for k in 0..4 {
            if let Some(img) = &images[k] {
                imgs[k] = img.clone();
            }
        }
        let mut pins = Vec::new();
        for k in 4..lines.len() {
            match &images[k] {
                Some(img) => pins.push((lines[k], img.clone())),
                None => return Err(bad("lines beyond the first four need an explicit image")),
            }
        }
        Ok(FrameAssignment { lines: [lines[0], lines[1], lines[2], lines[3]], images: imgs, pins, pencils })
    }

    pub fn to_text(&self) -> String {
        let mut parts: Vec<String> = (0..4)
            .map(|k| format!("{}={}", self.lines[k], self.images[k].iter().map(fmt_rational).collect::<Vec<_>>().join(":")))
            .collect();
        for (l, img) in &self.pins {
            parts.push(format!("{}={}", l, img.iter().map(fmt_rational).collect::<Vec<_>>().join(":")));
        }
        let mut s = parts.join(",");
        if !self.pencils.is_empty() {
            s.push('/');
            s.push_str(&self.pencils.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","));
        }
        s
    }
}

fn concurrent_in_spec(s: &IncidenceSpec, a: usize, b: usize, c: usize) -> bool {
    s.points().iter().any(|p| p.contains(&a) && p.contains(&b) && p.contains(&c))
}

fn admissible(s: &IncidenceSpec, q: &[usize; 4]) -> bool {
    let mut sorted = *q;
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) || sorted[0] == 0 || sorted[3] > s.n() {
        return false;
    }
    for i in 0..4 {
        for j in i + 1..4 {
            for k in j + 1..4 {
                if concurrent_in_spec(s, q[i], q[j], q[k]) {
                    return false;
                }
            }
        }
    }
    true
}

/// All admissible quadruples in lexicographic order.
pub fn admissible_frames(s: &IncidenceSpec) -> Vec<[usize; 4]> {
    let n = s.n();
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                for d in c + 1..=n {
                    if admissible(s, &[a, b, c, d]) {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

pub fn choose_frame(s: &IncidenceSpec, hint: Option<&FrameAssignment>) -> Result<FrameAssignment, RealizationError> {
    match hint {
        Some(h) => {
            if !admissible(s, &h.lines) {
                return Err(RealizationError::InvalidFrame(
                    "frame lines must be distinct, in range, and no three on a common multiple point".into(),
                ));
            }
            let im = &h.images;
            for i in 0..4 {
                for j in i + 1..4 {
                    for k in j + 1..4 {
                        if dot(&im[i], &cross(&im[j], &im[k])).is_zero() {
                            return Err(RealizationError::InvalidFrame("three frame images are concurrent".into()));
                        }
                    }
                }
            }
            for (l, _) in &h.pins {
                if *l == 0 || *l > s.n() || h.lines.contains(l) {
                    return Err(RealizationError::InvalidFrame(format!("bad pinned line {l}")));
                }
            }
            for l in &h.pencils {
                if *l == 0 || *l > s.n() || h.lines.contains(l) {
                    return Err(RealizationError::InvalidFrame(format!("bad pencil line {l}")));
                }
            }
            Ok(h.clone())
        }
        None => admissible_frames(s)
            .into_iter()
            .next()
            .map(FrameAssignment::with_default_images)
            .ok_or(RealizationError::FrameNotFound),
    }
}

// ---------- constraint system ----------

#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub spec: IncidenceSpec,
    pub frame: FrameAssignment,
    pub nparams: usize,
    /// Parametric line coefficients.
    pub lines: Vec<[QMPoly; 3]>,
    pub equations: Vec<(QMPoly, String)>,
    pub inequations: Vec<(QMPoly, String)>,
    pub audit: Vec<String>,
}

fn q2f(p: &QMPoly) -> FPoly {
    p.map(|c| FV::Rat(c.clone()))
}

fn qcross(a: &[QMPoly; 3], b: &[QMPoly; 3]) -> [QMPoly; 3] {
    [
        a[1].mul(&b[2]).sub(&a[2].mul(&b[1])),
        a[2].mul(&b[0]).sub(&a[0].mul(&b[2])),
        a[0].mul(&b[1]).sub(&a[1].mul(&b[0])),
    ]
}

fn qdot(a: &[QMPoly; 3], b: &[QMPoly; 3]) -> QMPoly {
    a[0].mul(&b[0]).add(&a[1].mul(&b[1])).add(&a[2].mul(&b[2]))
}

fn qzero3(a: &[QMPoly; 3]) -> bool {
    a.iter().all(|c| c.is_zero())
}

fn weight(a: &[QMPoly; 3]) -> (usize, usize) {
    (a.iter().map(|c| c.total_degree()).sum(), a.iter().map(|c| c.terms().count()).sum())
}

/// Scale a constant triple so its last nonzero entry is 1 and strip
/// rational content from parametric ones.
fn tidy(a: [QMPoly; 3]) -> [QMPoly; 3] {
    if a.iter().all(|c| c.is_constant()) {
        if let Some(last) = a.iter().rev().find(|c| !c.is_zero()) {
            let s = Rational::one() / last.constant_value().unwrap();
            return a.map(|c| c.scale(&s));
        }
        return a;
    }
    let content = rational_content(&a);
    a.map(|c| c.scale(&content))
}

fn rational_content(a: &[QMPoly; 3]) -> Rational {
    use num_integer::Integer;
    let mut l = num_bigint::BigInt::one();
    let mut g = num_bigint::BigInt::zero();
    for c in a {
        for (_, x) in c.terms() {
            l = l.lcm(x.denom());
        }
    }
    for c in a {
        for (_, x) in c.terms() {
            g = g.gcd(&(x * Rational::from_integer(l.clone())).to_integer());
        }
    }
    if g.is_zero() {
        return Rational::one();
    }
    Rational::new(l, g)
}

fn line_text(l: &[QMPoly; 3]) -> String {
    format!(
        "[{}, {}, {}]",
        l[0].to_text(&PARAM_NAMES),
        l[1].to_text(&PARAM_NAMES),
        l[2].to_text(&PARAM_NAMES)
    )
}

pub fn build_constraints(s: &IncidenceSpec, f: &FrameAssignment) -> Result<ConstraintSystem, RealizationError> {
    let n = s.n();
    let mut lines: Vec<Option<[QMPoly; 3]>> = vec![None; n + 1];
    let mut audit = Vec::new();
    let mut inequations: Vec<(QMPoly, String)> = Vec::new();
    let mut order: Vec<usize> = Vec::new(); // determination order, frame first
    for k in 0..4 {
        let img = f.images[k].clone().map(QMPoly::constant);
        audit.push(format!("frame: L{} := {}", f.lines[k], line_text(&img)));
        lines[f.lines[k]] = Some(img);
        order.push(f.lines[k]);
    }
    let mut nparams = 0;
    loop {
        // propagate joins
        loop {
            let mut progressed = false;
            for l in 1..=n {
                if lines[l].is_some() {
                    continue;
                }
                let pts = known_points(s, &lines, l);
                if pts.len() >= 2 {
                    let mut best: Option<([QMPoly; 3], String)> = None;
                    for i in 0..pts.len() {
                        for j in i + 1..pts.len() {
                            let c = qcross(&pts[i].0, &pts[j].0);
                            if qzero3(&c) {
                                continue;
                            }
                            let c = tidy(c);
                            if best.as_ref().is_none_or(|b| weight(&c) < weight(&b.0)) {
                                best = Some((c, format!("{} and {}", pts[i].1, pts[j].1)));
                            }
                        }
                    }
                    if let Some((c, why)) = best {
                        audit.push(format!("join: L{l} := {} through {why}", line_text(&c)));
                        lines[l] = Some(c);
                        order.push(l);
                        progressed = true;
                        break;
                    }
                }
            }
            if !progressed {
                break;
            }
        }
        let open: Vec<usize> = (1..=n).filter(|&l| lines[l].is_none()).collect();
        if open.is_empty() {
            break;
        }
        let preferred = f.pencils.iter().copied().find(|&l| lines[l].is_none() && !known_points(s, &lines, l).is_empty());
        let pick = preferred.unwrap_or_else(|| {
            *open
                .iter()
                .max_by_key(|&&l| (known_points(s, &lines, l).len().min(1), std::cmp::Reverse(l)))
                .unwrap()
        });
        let pts = known_points(s, &lines, pick);
        if let Some((p, pdesc)) = pts.into_iter().next() {
            if nparams + 1 > NVARS {
                return Err(RealizationError::TooManyParameters);
            }
            let t = nparams;
            nparams += 1;
            let (q0, q1, rdesc) = reference_points(&lines, &order, Some(&p)).ok_or(RealizationError::TooManyParameters)?;
            let tv = QMPoly::var(t);
            let one_minus = QMPoly::one().sub(&tv);
            let q: [QMPoly; 3] = std::array::from_fn(|k| q0[k].mul(&one_minus).add(&q1[k].mul(&tv)));
            let l = tidy(qcross(&p, &q));
            audit.push(format!(
                "pencil: L{pick} := {} through {pdesc}, meeting {rdesc} at parameter {}",
                line_text(&l),
                PARAM_NAMES[t]
            ));
            inequations.push((tv.clone(), format!("L{pick} avoids the reference point at {}=0", PARAM_NAMES[t])));
            inequations.push((tv.sub(&QMPoly::one()), format!("L{pick} avoids the reference point at {}=1", PARAM_NAMES[t])));
            lines[pick] = Some(l);
            order.push(pick);
        } else {
            if nparams + 2 > NVARS {
                return Err(RealizationError::TooManyParameters);
            }
            let (s0, s1) = (nparams, nparams + 1);
            nparams += 2;
            let (a0, a1, d1) = reference_points(&lines, &order, None).ok_or(RealizationError::TooManyParameters)?;
            let (b0, b1, d2) = second_reference(&lines, &order).ok_or(RealizationError::TooManyParameters)?;
            let (u, v) = (QMPoly::var(s0), QMPoly::var(s1));
            let qa: [QMPoly; 3] = std::array::from_fn(|k| a0[k].mul(&QMPoly::one().sub(&u)).add(&a1[k].mul(&u)));
            let qb: [QMPoly; 3] = std::array::from_fn(|k| b0[k].mul(&QMPoly::one().sub(&v)).add(&b1[k].mul(&v)));
            let l = tidy(qcross(&qa, &qb));
            audit.push(format!(
                "free: L{pick} := {} meeting {d1} at {} and {d2} at {}",
                line_text(&l),
                PARAM_NAMES[s0],
                PARAM_NAMES[s1]
            ));
            lines[pick] = Some(l);
            order.push(pick);
        }
    }
    let lines: Vec<[QMPoly; 3]> = lines.into_iter().skip(1).map(|l| l.unwrap()).collect();
    let mut equations: Vec<(QMPoly, String)> = Vec::new();
    for p in s.points() {
        // defining pair: lightest cross product
        let mut best: Option<(usize, usize, [QMPoly; 3])> = None;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                let c = qcross(&lines[p[i] - 1], &lines[p[j] - 1]);
                if qzero3(&c) {
                    continue;
                }
                if best.as_ref().is_none_or(|b| weight(&c) < weight(&b.2)) {
                    best = Some((p[i], p[j], c));
                }
            }
        }
        let Some((a, b, x)) = best else { continue };
        for &c in p {
            if c == a || c == b {
                continue;
            }
            let e = qdot(&lines[c - 1], &x);
            if !e.is_zero() {
                equations.push((e.primitive(), format!("L{c} through L{a}∩L{b}")));
            }
        }
    }
    for (l, img) in &f.pins {
        let t = img.clone().map(QMPoly::constant);
        for (k, e) in qcross(&lines[l - 1], &t).into_iter().enumerate() {
            if !e.is_zero() {
                equations.push((e.primitive(), format!("pin L{l} (component {k})")));
            }
        }
    }
    for (e, why) in &equations {
        audit.push(format!("equation: {} = 0  [{why}]", e.to_text(&PARAM_NAMES)));
    }
    audit.push(format!(
        "inequations: {} recorded; distinctness of all {} line pairs and absence of extra multiple points are checked on every candidate",
        inequations.len(),
        n * (n - 1) / 2
    ));
    Ok(ConstraintSystem { spec: s.clone(), frame: f.clone(), nparams, lines, equations, inequations, audit })
}

/// Known multiple points on line `l`: coordinates and a description.
fn known_points(s: &IncidenceSpec, lines: &[Option<[QMPoly; 3]>], l: usize) -> Vec<([QMPoly; 3], String)> {
    let mut out = Vec::new();
    for p in s.points() {
        if !p.contains(&l) {
            continue;
        }
        let det: Vec<usize> = p.iter().copied().filter(|&k| k != l && lines[k].is_some()).collect();
        let mut best: Option<([QMPoly; 3], String)> = None;
        for i in 0..det.len() {
            for j in i + 1..det.len() {
                let c = qcross(lines[det[i]].as_ref().unwrap(), lines[det[j]].as_ref().unwrap());
                if qzero3(&c) {
                    continue;
                }
                let c = tidy(c);
                if best.as_ref().is_none_or(|b| weight(&c) < weight(&b.0)) {
                    best = Some((c, format!("L{}∩L{}", det[i], det[j])));
                }
            }
        }
        if let Some(b) = best {
            out.push(b);
        }
    }
    out
}

/// A known line not through `avoid` and two known points on it.
fn reference_points(
    lines: &[Option<[QMPoly; 3]>],
    order: &[usize],
    avoid: Option<&[QMPoly; 3]>,
) -> Option<([QMPoly; 3], [QMPoly; 3], String)> {
    for &r in order {
        let rl = lines[r].as_ref().unwrap();
        if let Some(p) = avoid {
            if qdot(rl, p).is_zero() {
                continue;
            }
        }
        // candidate points in order, constant affine points first
        let mut cands: Vec<([QMPoly; 3], usize)> = Vec::new();
        for &a in order {
            if a == r {
                continue;
            }
            let c = qcross(rl, lines[a].as_ref().unwrap());
            if !qzero3(&c) {
                cands.push((tidy(c), a));
            }
        }
        cands.sort_by_key(|(c, _)| !(c.iter().all(|x| x.is_constant()) && !c[2].is_zero()));
        let mut pts: Vec<([QMPoly; 3], usize)> = Vec::new();
        for (c, a) in cands {
            if pts.iter().all(|(q, _)| !qzero3(&qcross(q, &c))) {
                pts.push((c, a));
            }
            if pts.len() == 2 {
                let desc = format!("L{r} (0 at L{r}∩L{}, 1 at L{r}∩L{})", pts[0].1, pts[1].1);
                return Some((pts[0].0.clone(), pts[1].0.clone(), desc));
            }
        }
    }
    None
}

fn second_reference(lines: &[Option<[QMPoly; 3]>], order: &[usize]) -> Option<([QMPoly; 3], [QMPoly; 3], String)> {
    // second known line of the order, used for two-parameter lines
    let first = order[0];
    let rest: Vec<usize> = order.iter().copied().filter(|&l| l != first).collect();
    let mut reordered = rest.clone();
    reordered.push(first);
    reference_points(lines, &reordered[1..].iter().copied().chain(std::iter::once(reordered[0])).collect::<Vec<_>>(), None)
        .or_else(|| reference_points(lines, &rest, None))
}

// ---------- elimination ----------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuliStatus {
    Empty,
    ZeroDimensional,
    PositiveDimensional,
    Unresolved,
}

impl ModuliStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModuliStatus::Empty => "empty",
            ModuliStatus::ZeroDimensional => "zero_dimensional",
            ModuliStatus::PositiveDimensional => "positive_dimensional",
            ModuliStatus::Unresolved => "unresolved",
        }
    }
}

/// One component of the moduli space. Zero-dimensional components are the
/// individual roots: all roots of one irreducible factor share `field` and
/// `values` (exact values in that field) and differ by `root_index`.
#[derive(Clone, Debug)]
pub struct Component {
    pub field: Option<Arc<NumberField>>,
    /// Variable whose minimal polynomial generates `field`.
    pub residual: Option<usize>,
    pub root_index: usize,
    pub is_real: bool,
    pub dimension: usize,
    /// Parameter values (`None` for free parameters of a positive-dimensional family).
    pub values: Vec<Option<FieldValue>>,
    /// Witness arrangement (zero-dimensional: exact; positive-dimensional: a sample).
    pub arrangement: Option<ExactArrangement>,
}

#[derive(Clone, Debug)]
pub struct ModuliReport {
    pub status: ModuliStatus,
    pub dimension: usize,
    pub nparams: usize,
    pub defining_polys: Vec<(String, QPoly)>,
    pub components: Vec<Component>,
    pub m_count: usize,
    pub mc_count: usize,
    pub real_count: usize,
    pub frame: Option<FrameAssignment>,
    pub audit: Vec<String>,
}

#[derive(Clone, Debug)]
struct Branch {
    eqs: Vec<FPoly>,
    ineqs: Vec<FPoly>,
    subs: Vec<(usize, FPoly, FPoly)>,
    fixed: Vec<Option<FV>>,
    field: Option<Arc<NumberField>>,
    residual: Option<usize>,
    label: String,
}

enum Outcome {
    Point(Branch),
    Family { branch: Branch, sample_vars: Vec<usize> },
    Unresolved(String),
}

fn is_rational_poly(p: &FPoly) -> bool {
    p.terms().all(|(_, c)| c.as_rational().is_some())
}

fn to_q(p: &FPoly) -> QMPoly {
    p.map(|c| match c.as_rational() {
        Some(r) => r,
        None => panic!("not rational"),
    })
}

fn normalize(p: &FPoly) -> FPoly {
    if is_rational_poly(p) {
        q2f(&to_q(p).primitive())
    } else {
        p.monic()
    }
}

pub fn ftext(p: &FPoly) -> String {
    if is_rational_poly(p) {
        return to_q(p).to_text(&PARAM_NAMES);
    }
    let mut parts = Vec::new();
    for (e, c) in p.terms().collect::<Vec<_>>().into_iter().rev() {
        let mono: Vec<String> = (0..NVARS)
            .filter(|&k| e[k] > 0)
            .map(|k| if e[k] == 1 { PARAM_NAMES[k].to_string() } else { format!("{}^{}", PARAM_NAMES[k], e[k]) })
            .collect();
        let coef = format!("({})", c.to_text());
        parts.push(if mono.is_empty() { coef } else { format!("{coef}*{}", mono.join("*")) });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

struct Solver<'a> {
    audit: Vec<String>,
    budget: usize,
    nparams: usize,
    _cs: &'a ConstraintSystem,
}

impl Solver<'_> {
    fn clean(&mut self, b: &mut Branch) -> bool {
        let mut out: Vec<FPoly> = Vec::new();
        for e in b.eqs.drain(..) {
            if e.is_zero() {
                continue;
            }
            let mut e = normalize(&e);
            for g in &b.ineqs {
                if g.is_constant() {
                    continue;
                }
                while let Some(q) = e.exact_div(g) {
                    e = normalize(&q);
                }
            }
            if e.is_constant() {
                return false;
            }
            if !out.contains(&e) {
                out.push(e);
            }
        }
        out.sort_by_key(|e| (e.total_degree(), e.nvars(), ftext(e)));
        b.eqs = out;
        b.ineqs.retain(|g| !g.is_constant());
        if b.ineqs.iter().any(|g| g.is_zero()) {
            return false;
        }
        true
    }

    fn solve(&mut self, mut b: Branch, out: &mut Vec<Outcome>) {
        if self.budget == 0 {
            out.push(Outcome::Unresolved("branch budget exhausted".into()));
            return;
        }
        self.budget -= 1;
        loop {
            if !self.clean(&mut b) {
                self.audit.push(format!("[{}] contradiction: branch is empty", b.label));
                return;
            }
            let unsolved: Vec<usize> = (0..self.nparams)
                .filter(|&v| b.fixed[v].is_none() && !b.subs.iter().any(|(w, _, _)| *w == v))
                .collect();
            if b.eqs.is_empty() {
                if unsolved.is_empty() {
                    out.push(Outcome::Point(b));
                } else {
                    out.push(Outcome::Family { branch: b, sample_vars: unsolved });
                }
                return;
            }
            // linear step
            let mut cand: Option<(usize, usize)> = None;
            let mut key = (usize::MAX, true, usize::MAX);
            for (i, e) in b.eqs.iter().enumerate() {
                for v in e.vars() {
                    if e.degree_in(v) == 1 {
                        let cs = e.coeffs_in(v);
                        let k = (e.total_degree(), !cs[1].is_constant(), v);
                        if k < key {
                            key = k;
                            cand = Some((i, v));
                        }
                    }
                }
            }
            if let Some((i, v)) = cand {
                let e = b.eqs.remove(i);
                let cs = e.coeffs_in(v);
                let (a, c0) = (cs[1].clone(), cs[0].clone());
                let num = c0.neg();
                if !a.is_constant() {
                    let mut side = b.clone();
                    side.eqs.push(a.clone());
                    side.eqs.push(c0.clone());
                    side.label = format!("{} / {}=0", b.label, ftext(&a));
                    self.audit.push(format!(
                        "[{}] branch: leading coefficient {} of {} vanishes",
                        b.label,
                        ftext(&a),
                        PARAM_NAMES[v]
                    ));
                    self.solve(side, out);
                }
                self.audit.push(format!(
                    "[{}] solve {} = {} / ({})",
                    b.label,
                    PARAM_NAMES[v],
                    ftext(&num),
                    ftext(&a)
                ));
                b.eqs = b.eqs.iter().map(|g| g.subst_fraction(v, &num, &a)).collect();
                b.ineqs = b.ineqs.iter().map(|g| g.subst_fraction(v, &num, &a)).collect();
                if !a.is_constant() {
                    b.ineqs.push(normalize(&a));
                }
                b.subs.push((v, num, a));
                continue;
            }
            // univariate step
            let mut uni: Option<usize> = None;
            for e in &b.eqs {
                if e.nvars() == 1 {
                    let v = e.vars()[0];
                    if uni.is_none_or(|u: usize| e.degree_in(v) < b.eqs.iter().filter(|x| x.nvars() == 1 && x.uses(u)).map(|x| x.degree_in(u)).min().unwrap()) {
                        uni = Some(v);
                    }
                }
            }
            if let Some(u) = uni {
                self.univariate(b, u, out);
                return;
            }
            // resultant step
            let mut pair: Option<(usize, usize, usize)> = None;
            let mut pkey = usize::MAX;
            for i in 0..b.eqs.len() {
                for j in i + 1..b.eqs.len() {
                    for v in b.eqs[i].vars() {
                        if b.eqs[j].uses(v) {
                            let k = b.eqs[i].degree_in(v) * b.eqs[j].degree_in(v) * 8 + v;
                            if k < pkey {
                                pkey = k;
                                pair = Some((i, j, v));
                            }
                        }
                    }
                }
            }
            if let Some((i, j, v)) = pair {
                let r = b.eqs[i].resultant(&b.eqs[j], v);
                self.audit.push(format!(
                    "[{}] resultant in {} of equations {} and {}",
                    b.label,
                    PARAM_NAMES[v],
                    i + 1,
                    j + 1
                ));
                // keep the lower-degree equation for back-substitution
                let (keep, drop) = if b.eqs[i].degree_in(v) <= b.eqs[j].degree_in(v) { (i, j) } else { (j, i) };
                let _ = keep;
                if r.is_zero() {
                    b.eqs.remove(drop);
                } else {
                    b.eqs[drop] = r;
                }
                continue;
            }
            // underdetermined: no two equations share a parameter
            let mut sample: Vec<usize> = Vec::new();
            for e in &b.eqs {
                let vs = e.vars();
                sample.extend(vs[..vs.len() - 1].iter().copied());
            }
            sample.extend(unsolved.iter().copied().filter(|v| !b.eqs.iter().any(|e| e.uses(*v))));
            sample.sort_unstable();
            sample.dedup();
            out.push(Outcome::Family { branch: b, sample_vars: sample });
            return;
        }
    }

    fn univariate(&mut self, b: Branch, u: usize, out: &mut Vec<Outcome>) {
        let polys: Vec<Poly<FV>> = b.eqs.iter().filter(|e| e.nvars() == 1 && e.uses(u)).map(|e| e.to_univariate(u).unwrap()).collect();
        let mut g = polys[0].clone();
        for p in &polys[1..] {
            g = g.gcd(p).expect("nonzero");
        }
        if g.is_constant() {
            self.audit.push(format!("[{}] univariate equations in {} have no common root", b.label, PARAM_NAMES[u]));
            return;
        }
        let rational = g.coeffs().iter().all(|c| c.as_rational().is_some());
        if b.field.is_some() || !rational {
            // already inside a number field: only linear factors can be resolved
            if g.deg() == 1 {
                let val = -(g.coeff(0) / g.coeff(1));
                self.fix(b, u, val, None, None, out);
            } else {
                let rq: Option<QPoly> = if rational { Some(g.map(|c| c.as_rational().unwrap())) } else { None };
                // rational roots of a rational polynomial are still resolvable
                if let Some(q) = rq {
                    let f = factor_over_q(&q).expect("nonzero");
                    let mut ok = true;
                    for (h, _) in &f.factors {
                        if h.deg() == 1 {
                            let val = FV::Rat(-(h.coeff(0) / h.coeff(1)));
                            self.fix(b.clone(), u, val, None, None, out);
                        } else {
                            ok = false;
                        }
                    }
                    if !ok {
                        out.push(Outcome::Unresolved(format!(
                            "[{}] {} satisfies {} over an existing number field",
                            b.label,
                            PARAM_NAMES[u],
                            q.to_text(PARAM_NAMES[u])
                        )));
                    }
                } else {
                    out.push(Outcome::Unresolved(format!(
                        "[{}] {} satisfies a degree-{} polynomial over the number field",
                        b.label,
                        PARAM_NAMES[u],
                        g.deg()
                    )));
                }
            }
            return;
        }
        let q: QPoly = g.map(|c| c.as_rational().unwrap());
        let f = factor_over_q(&q).expect("nonzero");
        let ftxt: Vec<String> = f.factors.iter().map(|(h, m)| format!("({})^{m}", h.to_text(PARAM_NAMES[u]))).collect();
        self.audit.push(format!("[{}] factor in {}: {}", b.label, PARAM_NAMES[u], ftxt.join(" * ")));
        if f.unresolved {
            out.push(Outcome::Unresolved(format!("[{}] factoring not certified", b.label)));
        }
        for (h, _) in &f.factors {
            match h.deg() {
                1 => {
                    let val = FV::Rat(-(h.coeff(0) / h.coeff(1)));
                    self.fix(b.clone(), u, val, None, Some(h.clone()), out);
                }
                2..=4 => {
                    let k = NumberField::new(PARAM_NAMES[u], h).expect("irreducible factor");
                    let val = FV::Alg(crate::exactfield::AlgNum::generator(&k));
                    self.fix(b.clone(), u, val, Some(k), Some(h.clone()), out);
                }
                d => out.push(Outcome::Unresolved(format!(
                    "[{}] irreducible factor of degree {d} in {} exceeds the supported field degree",
                    b.label,
                    PARAM_NAMES[u]
                ))),
            }
        }
    }

    fn fix(&mut self, mut b: Branch, u: usize, val: FV, field: Option<Arc<NumberField>>, _h: Option<QPoly>, out: &mut Vec<Outcome>) {
        if let Some(k) = field {
            b.field = Some(k);
            b.residual = Some(u);
        }
        b.label = format!("{} / {}={}", b.label, PARAM_NAMES[u], val.to_text());
        b.eqs = b.eqs.iter().map(|e| e.subst_value(u, &val)).collect();
        b.ineqs = b.ineqs.iter().map(|e| e.subst_value(u, &val)).collect();
        b.fixed[u] = Some(val);
        self.solve(b, out);
    }
}

/// Parameter values of a branch after back-substitution; `None` if a
/// denominator vanishes.
fn back_substitute(b: &Branch, nparams: usize) -> Option<Vec<Option<FV>>> {
    let mut vals: Vec<Option<FV>> = b.fixed.clone();
    vals.resize(NVARS, None);
    for (v, num, den) in b.subs.iter().rev() {
        let d = den.eval(&vals)?;
        if d.is_zero() {
            return None;
        }
        let n = num.eval(&vals)?;
        vals[*v] = Some(n / d);
    }
    vals.truncate(nparams.max(0));
    Some(vals)
}

/// Instantiate the parametric lines; `None` if a line degenerates or two coincide.
pub fn instantiate(cs: &ConstraintSystem, vals: &[Option<FV>], field: Option<Arc<NumberField>>) -> Option<ExactArrangement> {
    let mut full: Vec<Option<FV>> = vals.to_vec();
    full.resize(NVARS, None);
    let mut lines = Vec::new();
    for l in &cs.lines {
        let c: Vec<FV> = l.iter().map(|p| q2f(p).eval(&full)).collect::<Option<_>>()?;
        lines.push(ProjLine::new(c[0].clone(), c[1].clone(), c[2].clone()).ok()?);
    }
    Arrangement::new(field, lines).ok()
}

/// `verify_realization`: the arrangement's exact lattice is exactly the incidence spec.
pub fn verify_realization<F: Scalar>(s: &IncidenceSpec, a: &Arrangement<F>) -> bool {
    s.n() == a.len() && spec_from_lattice(&compute_lattice(a)) == *s
}

fn sample_values(attempt: usize, var: usize) -> Rational {
    const NUM: [i64; 12] = [7, -5, 11, 13, -17, 19, 23, -29, 31, 37, -41, 43];
    const DEN: [i64; 12] = [3, 2, 5, 7, 3, 11, 4, 13, 9, 5, 17, 8];
    let k = (attempt * 5 + var * 3) % 12;
    Rational::new(NUM[k].into(), DEN[(k + var + attempt) % 12].into())
}

pub fn eliminate(cs: &ConstraintSystem) -> ModuliReport {
    let mut solver = Solver { audit: Vec::new(), budget: 400, nparams: cs.nparams, _cs: cs };
    let root = Branch {
        eqs: cs.equations.iter().map(|(e, _)| q2f(e)).collect(),
        ineqs: cs.inequations.iter().map(|(e, _)| q2f(e)).collect(),
        subs: Vec::new(),
        fixed: vec![None; NVARS],
        field: None,
        residual: None,
        label: "root".into(),
    };
    let mut outcomes = Vec::new();
    solver.solve(root, &mut outcomes);
    let mut audit = cs.audit.clone();
    audit.append(&mut solver.audit);

    let mut components: Vec<Component> = Vec::new();
    let mut defining: Vec<(String, QPoly)> = Vec::new();
    let mut unresolved = false;
    let mut seen: Vec<String> = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Unresolved(why) => {
                audit.push(format!("unresolved: {why}"));
                unresolved = true;
            }
            Outcome::Point(b) => {
                let Some(vals) = back_substitute(&b, cs.nparams) else {
                    audit.push(format!("[{}] rejected: vanishing denominator", b.label));
                    continue;
                };
                let key = format!(
                    "{}|{}",
                    b.field.as_ref().map(|k| k.header()).unwrap_or_default(),
                    vals.iter().map(|v| v.as_ref().map(|x| x.to_text()).unwrap_or_default()).collect::<Vec<_>>().join(",")
                );
                if seen.contains(&key) {
                    continue;
                }
                seen.push(key);
                let arr = instantiate(cs, &vals, b.field.clone());
                let ok = arr.as_ref().is_some_and(|a| verify_realization(&cs.spec, a));
                if !ok {
                    audit.push(format!(
                        "[{}] rejected: {}",
                        b.label,
                        if arr.is_none() { "lines degenerate or coincide" } else { "lattice differs from the incidence spec" }
                    ));
                    continue;
                }
                audit.push(format!("[{}] accepted", b.label));
                match &b.field {
                    None => {
                        components.push(Component {
                            field: None,
                            residual: b.residual,
                            root_index: 0,
                            is_real: true,
                            dimension: 0,
                            values: vals,
                            arrangement: arr,
                        });
                    }
                    Some(k) => {
                        let var = PARAM_NAMES[b.residual.unwrap()].to_string();
                        if !defining.iter().any(|(v, p)| *v == var && *p == k.minpoly.primitive()) {
                            defining.push((var, k.minpoly.primitive()));
                        }
                        for r in 0..k.degree() {
                            components.push(Component {
                                field: Some(k.clone()),
                                residual: b.residual,
                                root_index: r,
                                is_real: r < k.real_root_count,
                                dimension: 0,
                                values: vals.clone(),
                                arrangement: arr.clone(),
                            });
                        }
                    }
                }
            }
            Outcome::Family { branch, sample_vars } => {
                let dim = sample_vars.len();
                let mut witness = None;
                for attempt in 0..8 {
                    let mut b = branch.clone();
                    for &v in &sample_vars {
                        let x = FV::Rat(sample_values(attempt, v));
                        b.eqs = b.eqs.iter().map(|e| e.subst_value(v, &x)).collect();
                        b.ineqs = b.ineqs.iter().map(|e| e.subst_value(v, &x)).collect();
                        b.fixed[v] = Some(x);
                    }
                    let mut sub = Solver { audit: Vec::new(), budget: 50, nparams: cs.nparams, _cs: cs };
                    let mut outs = Vec::new();
                    sub.solve(b, &mut outs);
                    for o in outs {
                        if let Outcome::Point(pb) = o {
                            if let Some(vals) = back_substitute(&pb, cs.nparams) {
                                if let Some(a) = instantiate(cs, &vals, pb.field.clone()) {
                                    if verify_realization(&cs.spec, &a) {
                                        witness = Some((vals, a, pb.field.clone()));
                                        break;
                                    }
                                }
                            }
                        }
                    }
                    if witness.is_some() {
                        break;
                    }
                }
                let free: Vec<&str> = sample_vars.iter().map(|&v| PARAM_NAMES[v]).collect();
                match witness {
                    Some((vals, a, field)) => {
                        audit.push(format!(
                            "[{}] accepted: family of dimension {dim} (free {}), sample verified",
                            branch.label,
                            free.join(", ")
                        ));
                        let mut shown = vals.clone();
                        for &v in &sample_vars {
                            shown[v] = None;
                        }
                        components.push(Component {
                            is_real: field.is_none(),
                            field,
                            residual: None,
                            root_index: 0,
                            dimension: dim,
                            values: shown,
                            arrangement: Some(a),
                        });
                    }
                    None => audit.push(format!(
                        "[{}] rejected: family of dimension {dim} has no valid sample",
                        branch.label
                    )),
                }
            }
        }
    }
    defining.sort_by(|a, b| a.0.cmp(&b.0).then(crate::exactfield::factor_order(&a.1, &b.1)));
    let dimension = components.iter().map(|c| c.dimension).max().unwrap_or(0);
    let real = components.iter().filter(|c| c.is_real).count();
    let complex = components.len() - real;
    let status = if unresolved {
        ModuliStatus::Unresolved
    } else if components.is_empty() {
        ModuliStatus::Empty
    } else if dimension > 0 {
        ModuliStatus::PositiveDimensional
    } else {
        ModuliStatus::ZeroDimensional
    };
    ModuliReport {
        status,
        dimension,
        nparams: cs.nparams,
        defining_polys: defining,
        m_count: components.len(),
        mc_count: real + complex / 2,
        real_count: real,
        components,
        frame: Some(cs.frame.clone()),
        audit,
    }
}

pub fn moduli_of_spec(s: &IncidenceSpec, hint: Option<&FrameAssignment>) -> Result<ModuliReport, RealizationError> {
    let f = choose_frame(s, hint)?;
    let cs = build_constraints(s, &f)?;
    Ok(eliminate(&cs))
}

impl ModuliReport {
    pub fn to_json(&self) -> Value {
        let comps: Vec<Value> = self
            .components
            .iter()
            .map(|c| {
                let vals: Vec<Value> = c
                    .values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        json!({
                            "param": PARAM_NAMES[i],
                            "value": v.as_ref().map(|x| Value::String(x.to_text())).unwrap_or(Value::String("free".into())),
                        })
                    })
                    .collect();
                json!({
                    "field": c.field.as_ref().map(|k| k.header()).unwrap_or_else(|| "Q".into()),
                    "minimal_polynomial": c.field.as_ref().map(|k| Value::String(k.minpoly.to_text(&k.name))).unwrap_or(Value::Null),
                    "root_index": c.root_index,
                    "is_real": c.is_real,
                    "dimension": c.dimension,
                    "values": vals,
                })
            })
            .collect();
        json!({
            "schema": 1,
            "status": self.status.as_str(),
            "dimension": self.dimension,
            "parameters": PARAM_NAMES[..self.nparams],
            "frame": self.frame.as_ref().map(|f| f.to_text()),
            "defining_polys": self.defining_polys.iter().map(|(v, p)| json!({"variable": v, "poly": p.to_text(v)})).collect::<Vec<_>>(),
            "components": comps,
            "m_count": self.m_count,
            "mc_count": self.mc_count,
            "real_count": self.real_count,
            "audit": self.audit,
        })
    }
}

/// Whether `g` and `p` (irreducible, same degree) define the same parameter
/// up to a Möbius change `u -> (a u + b)/(c u + d)` with small integer
/// coefficients: some such image of a root of `g` is a root of `p`.
pub fn mobius_equivalent(g: &QPoly, p: &QPoly, bound: i64) -> bool {
    if g.deg() != p.deg() {
        return false;
    }
    let n = p.deg();
    let r = |x: i64| Rational::from_integer(x.into());
    for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                for d in -bound..=bound {
                    if a * d - b * c == 0 {
                        continue;
                    }
                    // homogenized p(a u + b, c u + d) mod g
                    let num = QPoly::new(vec![r(b), r(a)]);
                    let den = QPoly::new(vec![r(d), r(c)]);
                    let mut acc = QPoly::zero();
                    for (k, coef) in p.coeffs().iter().enumerate() {
                        let term = num.pow(k as u32).mul(&den.pow((n - k) as u32)).scale(coef);
                        acc = acc.add(&term);
                    }
                    if acc.rem(g).is_zero() {
                        return true;
                    }
                }
            }
        }
    }
    false
}
