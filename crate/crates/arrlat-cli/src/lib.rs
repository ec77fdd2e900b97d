//! Command implementations behind the `arrlat` binary. Every command returns
//! its output text and exit code so it can be driven without a process.

use arrlat::arrfile::{ArrFileError, ArrangementFile};
use arrlat::catalog::{catalog_get, catalog_list, catalog_verify, CatalogError};
use arrlat::combinatorics::{are_isomorphic, spec_from_lattice, IncidenceSpec, SpecError};
use arrlat::geometry::{check_counting_formula, check_hirzebruch, compute_lattice, is_non_reductive, Hirzebruch};
use arrlat::realization::{moduli_of_spec, FrameAssignment, ModuliStatus, RealizationError};
use num_traits::Zero;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::Path;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_EMPTY: i32 = 4;
pub const EXIT_UNRESOLVED: i32 = 5;
pub const EXIT_TOO_MANY_PARAMETERS: i32 = 6;
pub const EXIT_NOT_REAL: i32 = 7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }
}

pub type CmdResult = Result<Output, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn arr_error(path: &Path, e: ArrFileError) -> CliError {
    let code = match e {
        ArrFileError::Parse { .. } => EXIT_PARSE,
        ArrFileError::Geometry(_) => EXIT_DEGENERATE,
    };
    CliError::new(code, format!("{}: {e}", path.display()))
}

fn spec_error(path: &Path, e: SpecError) -> CliError {
    let code = match e {
        SpecError::Parse { .. } => EXIT_PARSE,
        SpecError::InvalidSpec(_) => EXIT_DEGENERATE,
    };
    CliError::new(code, format!("{}: {e}", path.display()))
}

pub fn load_arrangement(path: &Path) -> Result<ArrangementFile, CliError> {
    ArrangementFile::parse(&read(path)?).map_err(|e| arr_error(path, e))
}

fn is_arrangement_text(text: &str) -> bool {
    text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#')).is_some_and(|l| l.starts_with("field"))
}

/// A spec file, or the lattice of an arrangement file.
pub fn load_spec(path: &Path) -> Result<IncidenceSpec, CliError> {
    let text = read(path)?;
    if is_arrangement_text(&text) {
        let f = ArrangementFile::parse(&text).map_err(|e| arr_error(path, e))?;
        Ok(spec_from_lattice(&compute_lattice(&f.arrangement)))
    } else {
        IncidenceSpec::parse(&text).map_err(|e| spec_error(path, e))
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn census_json(c: &std::collections::BTreeMap<usize, usize>) -> Value {
    Value::Object(c.iter().map(|(r, n)| (r.to_string(), json!(n))).collect())
}

pub fn cmd_census(path: &Path) -> CmdResult {
    let f = load_arrangement(path)?;
    let k = f.arrangement.len();
    let lat = compute_lattice(&f.arrangement);
    let counting = check_counting_formula(&lat, k);
    let hirz = check_hirzebruch(&lat, k);
    let v = json!({
        "schema": 1,
        "lines": k,
        "field": f.field.as_ref().map(|k| k.header()).unwrap_or_else(|| "Q".into()),
        "census": census_json(&lat.census),
        "counting_formula": counting,
        "hirzebruch": hirz.as_str(),
        "non_reductive": is_non_reductive(&lat, k),
    });
    let ok = counting && hirz != Hirzebruch::Violated;
    Ok(Output { text: pretty(&v), code: if ok { EXIT_OK } else { EXIT_CHECK_FAILED } })
}

/// Disjoint-cycle notation of a permutation given by images of `1..=n`.
pub fn cycle_notation(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len() + 1];
    let mut out = String::new();
    for start in 1..=perm.len() {
        if seen[start] || perm[start - 1] == start {
            continue;
        }
        let mut cyc = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cyc.push(i.to_string());
            i = perm[i - 1];
        }
        write!(out, "({})", cyc.join(",")).unwrap();
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

pub fn cmd_isom(a: &Path, b: &Path) -> CmdResult {
    let sa = load_spec(a)?;
    let sb = load_spec(b)?;
    let w = are_isomorphic(&sa, &sb);
    let v = json!({
        "schema": 1,
        "isomorphic": w.is_some(),
        "permutation": w.as_ref().map(|p| json!(p)),
        "cycles": w.as_ref().map(|p| cycle_notation(p)),
    });
    Ok(Output { text: pretty(&v), code: if w.is_some() { EXIT_OK } else { EXIT_CHECK_FAILED } })
}

pub fn cmd_realize(path: &Path, frame: Option<&str>, timestamps: bool) -> CmdResult {
    let s = load_spec(path)?;
    let hint = frame
        .map(FrameAssignment::parse)
        .transpose()
        .map_err(|e| CliError::new(EXIT_PARSE, format!("--frame: {e}")))?;
    let r = moduli_of_spec(&s, hint.as_ref()).map_err(|e| {
        let code = match e {
            RealizationError::TooManyParameters => EXIT_TOO_MANY_PARAMETERS,
            RealizationError::InvalidFrame(_) | RealizationError::SizeMismatch => EXIT_PARSE,
            RealizationError::FrameNotFound => EXIT_UNRESOLVED,
        };
        CliError::new(code, e.to_string())
    })?;
    let mut v = r.to_json();
    if timestamps {
        let secs = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        v["generated_at_unix"] = Value::String(secs.to_string());
    }
    let code = match r.status {
        ModuliStatus::ZeroDimensional | ModuliStatus::PositiveDimensional => EXIT_OK,
        ModuliStatus::Empty => EXIT_EMPTY,
        ModuliStatus::Unresolved => EXIT_UNRESOLVED,
    };
    Ok(Output { text: pretty(&v), code })
}

pub fn cmd_catalog_list() -> CmdResult {
    let mut text = String::new();
    for id in catalog_list() {
        let e = catalog_get(id).expect("listed");
        writeln!(text, "{id}\t{}", e.description).unwrap();
    }
    Ok(Output { text, code: EXIT_OK })
}

pub fn cmd_catalog_verify(sel: &str, as_json: bool) -> CmdResult {
    let reports = catalog_verify(sel).map_err(|e| match e {
        CatalogError::NotFound(id) => CliError::new(EXIT_PARSE, format!("unknown catalog id `{id}`")),
    })?;
    let ok = reports.iter().all(|r| r.passed());
    let text = if as_json {
        let entries: Vec<Value> = reports
            .iter()
            .map(|r| {
                json!({
                    "id": r.id,
                    "passed": r.passed(),
                    "checks": r.checks.iter().map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail})).collect::<Vec<_>>(),
                })
            })
            .collect();
        pretty(&json!({"schema": 1, "passed": ok, "entries": entries}))
    } else {
        let mut t = String::new();
        for r in &reports {
            if r.passed() {
                writeln!(t, "PASS {}", r.id).unwrap();
            } else {
                for c in r.checks.iter().filter(|c| !c.pass) {
                    writeln!(t, "FAIL {} {}: {}", r.id, c.name, c.detail).unwrap();
                }
            }
        }
        writeln!(t, "{} of {} entries passed", reports.iter().filter(|r| r.passed()).count(), reports.len()).unwrap();
        t
    };
    Ok(Output { text, code: if ok { EXIT_OK } else { EXIT_CHECK_FAILED } })
}

/// Affine window `[x0, y0, x1, y1]` with `x0 < x1`, `y0 < y1`.
pub type Window = [f64; 4];

pub fn parse_window(s: &str) -> Result<Window, CliError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::new(EXIT_PARSE, format!("--window: {e}")))?;
    match v[..] {
        [x0, y0, x1, y1] if x0 < x1 && y0 < y1 && v.iter().all(|x| x.is_finite()) => Ok([x0, y0, x1, y1]),
        _ => Err(CliError::new(EXIT_PARSE, "--window expects x0,y0,x1,y1 with x0<x1 and y0<y1")),
    }
}

/// Real line coefficients and finite intersection points (with their
/// multiplicities) under the file's designated real embedding.
pub struct RealPicture {
    pub lines: Vec<[f64; 3]>,
    pub points: Vec<([f64; 2], usize)>,
}

pub fn real_picture(f: &ArrangementFile) -> Result<RealPicture, CliError> {
    if !f.is_real() {
        return Err(CliError::new(EXIT_NOT_REAL, "the designated embedding of the field is not real"));
    }
    let z = f.embedding().unwrap_or_default();
    let lines = f.numeric_lines().expect("real embedding").iter().map(|l| l.map(|c| c.re)).collect();
    let lat = compute_lattice(&f.arrangement);
    let mut points = Vec::new();
    for p in &lat.points {
        if p.point.coords[2].is_zero() {
            continue;
        }
        let c = p.point.coords.clone().map(|x| x.eval_at(z).re);
        points.push(([c[0] / c[2], c[1] / c[2]], p.multiplicity()));
    }
    Ok(RealPicture { lines, points })
}

/// Bounding box of the finite intersection points, padded by 20% per side.
pub fn default_window(points: &[([f64; 2], usize)]) -> Window {
    if points.is_empty() {
        return [-1.0, -1.0, 1.0, 1.0];
    }
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for ([x, y], _) in points {
        x0 = x0.min(*x);
        x1 = x1.max(*x);
        y0 = y0.min(*y);
        y1 = y1.max(*y);
    }
    let w = if x1 > x0 { x1 - x0 } else { 1.0 };
    let h = if y1 > y0 { y1 - y0 } else { 1.0 };
    [x0 - 0.2 * w, y0 - 0.2 * h, x1 + 0.2 * w, y1 + 0.2 * h]
}

/// Clip `a x + b y + c = 0` to the window; `None` if it misses it or is
/// the line at infinity.
pub fn clip_line(l: &[f64; 3], w: &Window) -> Option<([f64; 2], [f64; 2])> {
    let [a, b, c] = *l;
    let [x0, y0, x1, y1] = *w;
    let mut hits: Vec<[f64; 2]> = Vec::new();
    if b != 0.0 {
        for x in [x0, x1] {
            let y = -(a * x + c) / b;
            if y >= y0 && y <= y1 {
                hits.push([x, y]);
            }
        }
    }
    if a != 0.0 {
        for y in [y0, y1] {
            let x = -(b * y + c) / a;
            if x >= x0 && x <= x1 {
                hits.push([x, y]);
            }
        }
    }
    hits.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let (p, q) = (*hits.first()?, *hits.last()?);
    (p != q).then_some((p, q))
}

const CANVAS: f64 = 800.0;

fn num(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn px(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" { "0.00".into() } else { s }
}

/// SVG 1.1 picture of a real arrangement. Geometry is written in affine
/// world coordinates inside one y-flipping transform; labels are placed in
/// canvas coordinates so they read upright.
pub fn render_svg(f: &ArrangementFile, window: Option<Window>) -> Result<String, CliError> {
    let pic = real_picture(f)?;
    let w = window.unwrap_or_else(|| default_window(&pic.points));
    let [x0, y0, x1, y1] = w;
    let scale = CANVAS / (x1 - x0);
    let height = (y1 - y0) * scale;
    let to_px = |p: [f64; 2]| [(p[0] - x0) * scale, (y1 - p[1]) * scale];
    let stroke = num(1.5 / scale);
    let radius = num(4.0 / scale);

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        px(CANVAS),
        px(height),
        px(CANVAS),
        px(height)
    )
    .unwrap();
    writeln!(s, "<desc>window {},{},{},{}</desc>", num(x0), num(y0), num(x1), num(y1)).unwrap();
    writeln!(s, "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>", px(CANVAS), px(height)).unwrap();
    writeln!(
        s,
        "<g id=\"world\" transform=\"matrix({} 0 0 {} {} {})\">",
        num(scale),
        num(-scale),
        num(-x0 * scale),
        num(y1 * scale)
    )
    .unwrap();
    let mut labels = Vec::new();
    for (i, l) in pic.lines.iter().enumerate() {
        let k = i + 1;
        match clip_line(l, &w) {
            Some((p, q)) => {
                writeln!(
                    s,
                    "<line id=\"L{k}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"{stroke}\"/>",
                    num(p[0]),
                    num(p[1]),
                    num(q[0]),
                    num(q[1])
                )
                .unwrap();
                labels.push((k, to_px(q)));
            }
            None if l[0] == 0.0 && l[1] == 0.0 => writeln!(s, "<!-- L{k} is the line at infinity -->").unwrap(),
            None => writeln!(s, "<!-- L{k} misses the window -->").unwrap(),
        }
    }
    for ([x, y], m) in &pic.points {
        if *x < x0 || *x > x1 || *y < y0 || *y > y1 {
            continue;
        }
        let fill = if *m >= 3 { "red" } else { "black" };
        writeln!(s, "<circle class=\"m{m}\" cx=\"{}\" cy=\"{}\" r=\"{radius}\" fill=\"{fill}\"/>", num(*x), num(*y)).unwrap();
    }
    s.push_str("</g>\n");
    for (k, [lx, ly]) in labels {
        let lx = lx.clamp(12.0, CANVAS - 28.0);
        let ly = ly.clamp(14.0, height - 4.0);
        writeln!(s, "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"14\">L{k}</text>", px(lx), px(ly)).unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn cmd_render(path: &Path, window: Option<&str>) -> CmdResult {
    let f = load_arrangement(path)?;
    let w = window.map(parse_window).transpose()?;
    Ok(Output { text: render_svg(&f, w)?, code: EXIT_OK })
}
