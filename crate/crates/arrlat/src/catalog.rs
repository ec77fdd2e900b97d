//! Embedded catalog of explicit ten-line arrangements with their expected
//! invariants, and the verification harness behind `catalog verify`.
//!
//! Every entry is an arrangement file under `data/catalog/` together with
//! its frozen incidence spec (`<id>.spec`). Conjugate roots of one defining
//! polynomial share their line coefficients and differ only in the root
//! designation.

use crate::arrfile::ArrangementFile;
use crate::combinatorics::{IncidenceSpec, LatticePermutation};
use crate::exactfield::QPoly;
use crate::geometry::{check_counting_formula, check_hirzebruch, compute_lattice, is_non_reductive, Hirzebruch};
use crate::realization::{mobius_equivalent, moduli_of_spec, verify_realization, FrameAssignment};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown catalog id `{0}`")]
    NotFound(String),
}

struct Raw {
    id: &'static str,
    description: &'static str,
    arr: &'static str,
    spec: &'static str,
    census: &'static str,
    quadruples: usize,
    moduli: Option<(usize, Option<usize>)>,
    frame: Option<&'static str>,
    reference_poly: Option<&'static str>,
}

macro_rules! raw {
    ($id:literal, $desc:literal, $census:literal, $n4:literal, $moduli:expr, $frame:expr, $poly:expr) => {
        Raw {
            id: $id,
            description: $desc,
            arr: include_str!(concat!("../../../data/catalog/", $id, ".arr")),
            spec: include_str!(concat!("../../../data/catalog/", $id, ".spec")),
            census: $census,
            quadruples: $n4,
            moduli: $moduli,
            frame: $frame,
            reference_poly: $poly,
        }
    };
}

#[rustfmt::skip]
static RAW: &[Raw] = &[
    raw!("eq1_plus", "two collinear quadruple points, golden ratio t^2-t-1, root (1+sqrt5)/2", "2:9,3:8,4:2", 2, Some((2, Some(2))), Some("3,2,4,5"), Some("t^2-t-1")),
    raw!("eq1_minus", "two collinear quadruple points, golden ratio t^2-t-1, root (1-sqrt5)/2", "2:9,3:8,4:2", 2, Some((2, Some(2))), Some("3,2,4,5"), Some("t^2-t-1")),
    raw!("eq2_real", "two collinear quadruple points, s^3-s^2+1 with s=t2-1, real root", "2:9,3:8,4:2", 2, Some((3, Some(2))), Some("3,1,4,6"), Some("t^3-t^2+1")),
    raw!("eq2_cplx_a", "two collinear quadruple points, s^3-s^2+1, complex root (+imag)", "2:9,3:8,4:2", 2, Some((3, Some(2))), Some("3,1,4,6"), Some("t^3-t^2+1")),
    raw!("eq2_cplx_b", "two collinear quadruple points, s^3-s^2+1, complex root (-imag)", "2:9,3:8,4:2", 2, Some((3, Some(2))), Some("3,1,4,6"), Some("t^3-t^2+1")),
    raw!("eq3_plus", "two collinear quadruple points, t^2+t-1, root (-1+sqrt5)/2", "2:9,3:8,4:2", 2, Some((2, Some(2))), Some("3,2,4,5"), Some("t^2+t-1")),
    raw!("eq3_minus", "two collinear quadruple points, t^2+t-1, root (-1-sqrt5)/2", "2:9,3:8,4:2", 2, Some((2, Some(2))), Some("3,2,4,5"), Some("t^2+t-1")),
    raw!("eq4_plus", "two collinear quadruple points over Q(sqrt2), upper signs", "2:9,3:8,4:2", 2, Some((2, Some(2))), Some("3,2,4,5"), Some("t^2-2")),
    raw!("eq4_minus", "two collinear quadruple points over Q(sqrt2), lower signs", "2:9,3:8,4:2", 2, Some((2, Some(2))), Some("3,2,4,5"), Some("t^2-2")),
    raw!("eq5_root1", "one quadruple point, ten triple points, quartic t^4-2t^3+4t^2-3t+1, root 1", "2:9,3:10,4:1", 1, Some((4, Some(2))), Some("7,3,4,5"), Some("t^4-2*t^3+4*t^2-3*t+1")),
    raw!("eq5_root2", "one quadruple point, ten triple points, quartic, root 2", "2:9,3:10,4:1", 1, Some((4, Some(2))), Some("7,3,4,5"), Some("t^4-2*t^3+4*t^2-3*t+1")),
    raw!("eq5_root3", "one quadruple point, ten triple points, quartic, root 3", "2:9,3:10,4:1", 1, Some((4, Some(2))), Some("7,3,4,5"), Some("t^4-2*t^3+4*t^2-3*t+1")),
    raw!("eq5_root4", "one quadruple point, ten triple points, quartic, root 4", "2:9,3:10,4:1", 1, Some((4, Some(2))), Some("7,3,4,5"), Some("t^4-2*t^3+4*t^2-3*t+1")),
    raw!("eq6_root1", "one quadruple point, line through three frame points, t^3-t^2+1, real root", "2:9,3:10,4:1", 1, Some((3, Some(2))), Some("2,1,5,6"), Some("t^3-t^2+1")),
    raw!("eq6_root2", "one quadruple point, line through three frame points, t^3-t^2+1, complex root", "2:9,3:10,4:1", 1, Some((3, Some(2))), Some("2,1,5,6"), Some("t^3-t^2+1")),
    raw!("eq6_root3", "one quadruple point, line through three frame points, t^3-t^2+1, complex root", "2:9,3:10,4:1", 1, Some((3, Some(2))), Some("2,1,5,6"), Some("t^3-t^2+1")),
    raw!("eq6_rational", "one quadruple point, second line branch, t1=-1, t2=-3, t3=3", "2:9,3:10,4:1", 1, Some((1, Some(1))), None, None),
    raw!("eq7_root1", "one quadruple point, ten triple points, t^3-t^2-2t+1, root 1", "2:9,3:10,4:1", 1, Some((3, Some(3))), Some("1,2,5,6/7,3,4"), Some("t^3-t^2-2*t+1")),
    raw!("eq7_root2", "one quadruple point, ten triple points, t^3-t^2-2t+1, root 2", "2:9,3:10,4:1", 1, Some((3, Some(3))), Some("1,2,5,6/7,3,4"), Some("t^3-t^2-2*t+1")),
    raw!("eq7_root3", "one quadruple point, ten triple points, t^3-t^2-2t+1, root 3", "2:9,3:10,4:1", 1, Some((3, Some(3))), Some("1,2,5,6/7,3,4"), Some("t^3-t^2-2*t+1")),
    raw!("eq8_root1", "one quadruple point, t1=t2 branch, t^3-2t^2+3t-1, real root", "2:9,3:10,4:1", 1, Some((3, None)), Some("1,2,5,6"), Some("t^3-2*t^2+3*t-1")),
    raw!("eq8_root2", "one quadruple point, t1=t2 branch, t^3-2t^2+3t-1, complex root", "2:9,3:10,4:1", 1, Some((3, None)), Some("1,2,5,6"), Some("t^3-2*t^2+3*t-1")),
    raw!("eq8_root3", "one quadruple point, t1=t2 branch, t^3-2t^2+3t-1, complex root", "2:9,3:10,4:1", 1, Some((3, None)), Some("1,2,5,6"), Some("t^3-2*t^2+3*t-1")),
    raw!("eq9_root1", "one quadruple point, t^3-2t^2+t-1, real root", "2:9,3:10,4:1", 1, Some((3, None)), Some("1,2,5,6"), Some("t^3-2*t^2+t-1")),
    raw!("eq9_root2", "one quadruple point, t^3-2t^2+t-1, complex root", "2:9,3:10,4:1", 1, Some((3, None)), Some("1,2,5,6"), Some("t^3-2*t^2+t-1")),
    raw!("eq9_root3", "one quadruple point, t^3-2t^2+t-1, complex root", "2:9,3:10,4:1", 1, Some((3, None)), Some("1,2,5,6"), Some("t^3-2*t^2+t-1")),
    raw!("star_plus", "one quadruple point, triple points on three concurrent lines, t1=(1+i)/2", "2:6,3:11,4:1", 1, Some((2, Some(1))), Some("1,2,5,6"), Some("2*t^2-2*t+1")),
    raw!("star_minus", "one quadruple point, triple points on three concurrent lines, t1=(1-i)/2", "2:6,3:11,4:1", 1, Some((2, Some(1))), Some("1,2,5,6"), Some("2*t^2-2*t+1")),
    raw!("sec42_cplx_plus", "two non-collinear quadruple points, L10 through crossed pairs, t1=1+i", "2:9,3:8,4:2", 2, Some((2, Some(1))), Some("5,6,4,3"), Some("t^2-2*t+2")),
    raw!("sec42_cplx_minus", "two non-collinear quadruple points, L10 through crossed pairs, t1=1-i", "2:9,3:8,4:2", 2, Some((2, Some(1))), Some("5,6,4,3"), Some("t^2-2*t+2")),
    raw!("case211_plus", "two collinear quadruple points, L1∩L6 and L3∩L5 on L8, t=(1+i)/2", "2:9,3:8,4:2", 2, Some((2, Some(1))), Some("3,2,4,5"), Some("2*t^2-2*t+1")),
    raw!("case211_minus", "two collinear quadruple points, L1∩L6 and L3∩L5 on L8, t=(1-i)/2", "2:9,3:8,4:2", 2, Some((2, Some(1))), Some("3,2,4,5"), Some("2*t^2-2*t+1")),
    raw!("case3_plus", "two collinear quadruple points, L1∩L5 on L8, t=1+i", "2:9,3:8,4:2", 2, Some((2, Some(1))), Some("2,5,1,4"), Some("t^2-2*t+2")),
    raw!("case3_minus", "two collinear quadruple points, L1∩L5 on L8, t=1-i", "2:9,3:8,4:2", 2, Some((2, Some(1))), Some("2,5,1,4"), Some("t^2-2*t+2")),
    raw!("sec52_t1_2", "one quadruple point, L8∩L9 not triple, rational point t1=2, t2=3/2, t3=3", "2:9,3:10,4:1", 1, Some((1, Some(1))), None, None),
    raw!("sec52_t1_neg1", "one quadruple point, L3∩L5 on L10, rational point t1=-1, t2=3/2, t3=3", "2:9,3:10,4:1", 1, Some((1, Some(1))), None, None),
    raw!("sec53_t_neg1", "eleven triple points, L8 through L1∩L5 and L2∩L6, t=-1", "2:6,3:11,4:1", 1, None, None, None),
    raw!("sec53_t_2", "eleven triple points, L8 through L1∩L5 and L2∩L9, t=2", "2:6,3:11,4:1", 1, None, None, None),
    raw!("sec53_t_half", "eleven triple points, L8 through L1∩L5 and L6∩L9, t=1/2", "2:6,3:11,4:1", 1, None, None, None),
];

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub description: &'static str,
    pub text: &'static str,
    pub file: ArrangementFile,
    pub expected_spec: IncidenceSpec,
    pub expected_census: BTreeMap<usize, usize>,
    /// Expected number of quadruple points.
    pub quadruples: usize,
    /// `(m, m^c)`; `m^c` is `None` where no conjugation count is asserted.
    pub expected_moduli: Option<(usize, Option<usize>)>,
    /// Frame (and parameter order) mirroring the hand computation.
    pub frame_hint: Option<FrameAssignment>,
    /// Reference defining polynomial in `t`, up to unit and Möbius change.
    pub reference_poly: Option<QPoly>,
}

fn parse_census(s: &str) -> BTreeMap<usize, usize> {
    s.split(',')
        .map(|kv| {
            let (k, v) = kv.split_once(':').expect("census literal");
            (k.parse().unwrap(), v.parse().unwrap())
        })
        .collect()
}

fn build(r: &Raw) -> CatalogEntry {
    CatalogEntry {
        id: r.id,
        description: r.description,
        text: r.arr,
        file: ArrangementFile::parse(r.arr).unwrap_or_else(|e| panic!("catalog entry {}: {e}", r.id)),
        expected_spec: IncidenceSpec::parse(r.spec).unwrap_or_else(|e| panic!("catalog spec {}: {e}", r.id)),
        expected_census: parse_census(r.census),
        quadruples: r.quadruples,
        expected_moduli: r.moduli,
        frame_hint: r.frame.map(|f| FrameAssignment::parse(f).expect("catalog frame")),
        reference_poly: r.reference_poly.map(|p| QPoly::parse(p, "t").expect("catalog polynomial")),
    }
}

pub fn catalog_list() -> Vec<&'static str> {
    RAW.iter().map(|r| r.id).collect()
}

pub fn catalog_get(id: &str) -> Result<CatalogEntry, CatalogError> {
    RAW.iter().find(|r| r.id == id).map(build).ok_or_else(|| CatalogError::NotFound(id.to_string()))
}

pub fn catalog_entries() -> Vec<CatalogEntry> {
    RAW.iter().map(build).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct EntryReport {
    pub id: String,
    pub checks: Vec<CheckResult>,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn census_text(c: &BTreeMap<usize, usize>) -> String {
    c.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(",")
}

pub fn verify_entry(e: &CatalogEntry) -> EntryReport {
    let mut checks = Vec::new();
    let mut push = |name: &'static str, pass: bool, detail: String| checks.push(CheckResult { name, pass, detail });
    let a = &e.file.arrangement;
    let k = a.len();
    push("round_trip", e.file.to_text() == e.text, "serialize(parse(file)) is byte-identical".into());
    let lat = compute_lattice(a);
    let got = census_text(&lat.census);
    let want = census_text(&e.expected_census);
    push(
        "census",
        got == want,
        if got == want { got.clone() } else { format!("expected {want}, computed {got}") },
    );
    push("counting_formula", check_counting_formula(&lat, k), format!("k={k}"));
    let h = check_hirzebruch(&lat, k);
    push("hirzebruch", h == Hirzebruch::Holds, h.as_str().into());
    let n4 = lat.census.get(&4).copied().unwrap_or(0);
    let high: usize = lat.census.iter().filter(|(r, _)| **r >= 5).map(|(_, n)| n).sum();
    push(
        "multiplicity_bounds",
        n4 == e.quadruples && high == 0,
        format!("n_4={n4} (expected {}), points of multiplicity >=5: {high}", e.quadruples),
    );
    push("non_reductive", is_non_reductive(&lat, k), "every line carries >= 3 multiple points".into());
    push("spec", verify_realization(&e.expected_spec, a), "lattice equals the stored spec".into());
    if let Some((m, mc)) = e.expected_moduli {
        match moduli_of_spec(&e.expected_spec, None) {
            Ok(r) => {
                let complex = r.m_count - r.real_count;
                let ok = r.m_count == m
                    && mc.is_none_or(|c| c == r.mc_count)
                    && complex % 2 == 0
                    && r.mc_count == r.real_count + complex / 2;
                push(
                    "moduli",
                    ok,
                    format!(
                        "m={} m^c={} real={} (expected m={m}{})",
                        r.m_count,
                        r.mc_count,
                        r.real_count,
                        mc.map(|c| format!(" m^c={c}")).unwrap_or_default()
                    ),
                );
                // the entry's own field must be one of the fields found
                let member = r.components.iter().any(|c| match (&c.field, &e.file.field) {
                    (None, None) => true,
                    (Some(a), Some(b)) => mobius_equivalent(&a.minpoly, &b.minpoly, 2),
                    _ => false,
                });
                push("moduli_contains_entry", member, "a component over the entry's field".into());
            }
            Err(err) => push("moduli", false, err.to_string()),
        }
    }
    EntryReport { id: e.id.to_string(), checks }
}

/// `catalog_verify("all")` or a single id.
pub fn catalog_verify(sel: &str) -> Result<Vec<EntryReport>, CatalogError> {
    let entries = if sel == "all" { catalog_entries() } else { vec![catalog_get(sel)?] };
    let mut out: Vec<EntryReport> = std::thread::scope(|s| {
        let handles: Vec<_> = entries.iter().map(|e| s.spawn(move || verify_entry(e))).collect();
        handles.into_iter().map(|h| h.join().expect("verification thread")).collect()
    });
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

/// The Möbius–Kantor (MacLane) configuration, shipped as external data.
pub fn maclane_spec() -> IncidenceSpec {
    IncidenceSpec::parse(include_str!("../../../data/stubs/maclane.spec")).expect("maclane stub")
}

/// The nine-line Falk–Sturmfels pattern, shipped as external data.
pub fn falk_sturmfels_spec() -> IncidenceSpec {
    IncidenceSpec::parse(include_str!("../../../data/stubs/falk_sturmfels.spec")).expect("falk-sturmfels stub")
}

/// A ten-line spec containing the Falk–Sturmfels pattern on lines 1..=9.
pub fn falk_sturmfels_extended_spec() -> IncidenceSpec {
    IncidenceSpec::parse(include_str!("../../../data/stubs/falk_sturmfels_ext.spec")).expect("extended stub")
}

/// Parse cycle notation like `(2,3)(6,7)` into a permutation of `1..=n`
/// (`perm[i-1]` is the image of line `i`).
pub fn permutation_from_cycles(s: &str, n: usize) -> Option<LatticePermutation> {
    let mut perm: Vec<usize> = (1..=n).collect();
    let mut used = vec![false; n + 1];
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(')?;
        let close = body.find(')')?;
        let cyc: Vec<usize> = body[..close].split(',').map(|x| x.trim().parse().ok()).collect::<Option<_>>()?;
        for &c in &cyc {
            if c == 0 || c > n || std::mem::replace(&mut used[c], true) {
                return None;
            }
        }
        for i in 0..cyc.len() {
            perm[cyc[i] - 1] = cyc[(i + 1) % cyc.len()];
        }
        rest = body[close + 1..].trim_start();
    }
    Some(perm)
}
