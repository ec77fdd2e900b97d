//! Text format for exact arrangements.
//!
//! ```text
//! field Q(t) minpoly -1-t+t^2 root [3/2,2]
//! lines 3
//! L1: 1 0 0
//! L2: 0 1 -t
//! L3: 1 -1 1/2*t
//! ```
//!
//! `field Q` declares rational coefficients. A root is designated either by
//! a rational interval isolating one real root or by an index into the
//! fixed root order (real roots ascending, then conjugate pairs with the
//! positive imaginary part first). Serialization is canonical, so
//! `parse` followed by `to_text` reproduces a canonical file byte for byte.

use crate::exactfield::{fmt_rational, ordered_roots, parse_rational, sturm, AlgNum, FieldValue, NumberField, QPoly, Rational};
use crate::geometry::{Arrangement, ExactArrangement, GeometryError, ProjLine};
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrFileError {
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Debug, PartialEq)]
pub enum RootDesignation {
    Interval(Rational, Rational),
    Index(usize),
}

#[derive(Clone, Debug)]
pub struct ArrangementFile {
    pub var: String,
    pub field: Option<Arc<NumberField>>,
    pub root: Option<RootDesignation>,
    /// Coefficient residues as written (reduced modulo the minimal polynomial).
    pub rows: Vec<[QPoly; 3]>,
    pub arrangement: ExactArrangement,
}

fn compact(p: &QPoly, var: &str) -> String {
    p.to_text(var).replace(' ', "")
}

impl RootDesignation {
    fn to_text(&self) -> String {
        match self {
            RootDesignation::Interval(lo, hi) => format!("[{},{}]", fmt_rational(lo), fmt_rational(hi)),
            RootDesignation::Index(k) => k.to_string(),
        }
    }
}

impl ArrangementFile {
    /// Build from residues over an optional field; validates the arrangement.
    pub fn new(
        var: &str,
        field: Option<Arc<NumberField>>,
        root: Option<RootDesignation>,
        rows: Vec<[QPoly; 3]>,
    ) -> Result<Self, ArrFileError> {
        let rows: Vec<[QPoly; 3]> = match &field {
            Some(k) => rows.into_iter().map(|r| r.map(|p| p.rem(&k.minpoly))).collect(),
            None => rows,
        };
        let mut lines = Vec::with_capacity(rows.len());
        for r in &rows {
            let c: Vec<FieldValue> = r
                .iter()
                .map(|p| match &field {
                    Some(k) => FieldValue::Alg(AlgNum::new(k, p)),
                    None => FieldValue::Rat(p.coeff(0)),
                })
                .collect();
            lines.push(ProjLine::new(c[0].clone(), c[1].clone(), c[2].clone()).map_err(|_| {
                GeometryError::ZeroLine(lines.len() + 1)
            })?);
        }
        let arrangement = Arrangement::new(field.clone(), lines)?;
        Ok(ArrangementFile { var: var.to_string(), field, root, rows, arrangement })
    }

    pub fn from_arrangement(a: &ExactArrangement, root: Option<RootDesignation>) -> Self {
        let var = a.field.as_ref().map(|k| k.name.clone()).unwrap_or_else(|| "t".into());
        let rows = a.lines.iter().map(|l| l.coeffs.clone().map(|c| c.residue())).collect();
        ArrangementFile { var, field: a.field.clone(), root, rows, arrangement: a.clone() }
    }

    /// Index of the designated root in the fixed root order.
    pub fn root_index(&self) -> Option<usize> {
        let k = self.field.as_ref()?;
        match self.root.as_ref()? {
            RootDesignation::Index(i) => Some(*i),
            RootDesignation::Interval(lo, hi) => {
                // the unique real root inside [lo, hi]
                k.root_isolations.iter().position(|iv| &iv.mid() >= lo && &iv.mid() <= hi)
            }
        }
    }

    /// Complex value of the generator under the designated embedding.
    pub fn embedding(&self) -> Option<Complex64> {
        let k = self.field.as_ref()?;
        ordered_roots(&k.minpoly).get(self.root_index()?).copied()
    }

    /// Whether the designated embedding is real (always for `field Q`).
    pub fn is_real(&self) -> bool {
        match &self.field {
            None => true,
            Some(k) => self.root_index().is_some_and(|i| i < k.real_root_count),
        }
    }

    /// Floating-point line coefficients under the designated embedding.
    pub fn numeric_lines(&self) -> Option<Vec<[Complex64; 3]>> {
        let z = match &self.field {
            None => Complex64::new(0.0, 0.0),
            Some(_) => self.embedding()?,
        };
        Some(self.arrangement.lines.iter().map(|l| l.coeffs.clone().map(|c| c.eval_at(z))).collect())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        match &self.field {
            None => s.push_str("field Q\n"),
            Some(k) => {
                s.push_str(&format!("field Q({}) minpoly {}", self.var, compact(&k.minpoly, &self.var)));
                if let Some(r) = &self.root {
                    s.push_str(&format!(" root {}", r.to_text()));
                }
                s.push('\n');
            }
        }
        s.push_str(&format!("lines {}\n", self.rows.len()));
        for (i, r) in self.rows.iter().enumerate() {
            let cells: Vec<String> = r.iter().map(|p| compact(p, &self.var)).collect();
            s.push_str(&format!("L{}: {}\n", i + 1, cells.join(" ")));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, ArrFileError> {
        let mut body = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let perr = |line: usize, col: usize, msg: String| ArrFileError::Parse { line: line + 1, col: col + 1, msg };
        let col_of = |raw: &str, tok: &str| raw.find(tok).unwrap_or(0);

        let (ln, raw) = body.next().ok_or_else(|| perr(0, 0, "empty file".into()))?;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if toks.first() != Some(&"field") {
            return Err(perr(ln, 0, "expected `field`".into()));
        }
        let (var, field, root) = match toks.get(1) {
            Some(&"Q") if toks.len() == 2 => ("t".to_string(), None, None),
            Some(f) if f.starts_with("Q(") && f.ends_with(')') && f.len() > 3 => {
                let var = f[2..f.len() - 1].to_string();
                if !var.chars().all(|c| c.is_ascii_alphabetic()) {
                    return Err(perr(ln, col_of(raw, f), format!("bad generator name `{var}`")));
                }
                if toks.get(2) != Some(&"minpoly") || toks.len() < 4 {
                    return Err(perr(ln, col_of(raw, f) + f.len(), "expected `minpoly <poly>`".into()));
                }
                let mp = QPoly::parse(toks[3], &var).map_err(|e| perr(ln, col_of(raw, toks[3]), e.to_string()))?;
                let k = NumberField::new(&var, &mp).map_err(|e| perr(ln, col_of(raw, toks[3]), e.to_string()))?;
                let root = match toks.get(4) {
                    None => None,
                    Some(&"root") => {
                        let r = toks.get(5).ok_or_else(|| perr(ln, raw.len(), "missing root designation".into()))?;
                        let c = col_of(raw, r);
                        if toks.len() > 6 {
                            return Err(perr(ln, col_of(raw, toks[6]), format!("unexpected token `{}`", toks[6])));
                        }
                        Some(parse_root(r, &k).map_err(|m| perr(ln, c, m))?)
                    }
                    Some(t) => return Err(perr(ln, col_of(raw, t), format!("unexpected token `{t}`"))),
                };
                (var, Some(k), root)
            }
            Some(t) => return Err(perr(ln, col_of(raw, t), format!("unknown field `{t}`"))),
            None => return Err(perr(ln, raw.len(), "missing field".into())),
        };

        let (ln, raw) = body.next().ok_or_else(|| perr(ln + 1, 0, "expected `lines <n>`".into()))?;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let n = match toks.as_slice() {
            ["lines", k] => k.parse::<usize>().map_err(|_| perr(ln, col_of(raw, k), format!("bad line count `{k}`")))?,
            _ => return Err(perr(ln, 0, "expected `lines <n>`".into())),
        };
        let mut rows = Vec::with_capacity(n);
        let mut last = ln;
        for (ln, raw) in body {
            last = ln;
            let toks: Vec<&str> = raw.split_whitespace().collect();
            let label = format!("L{}:", rows.len() + 1);
            if toks.first() != Some(&label.as_str()) {
                return Err(perr(ln, 0, format!("expected `{label}`")));
            }
            if toks.len() != 4 {
                return Err(perr(ln, 0, format!("expected three coefficients, found {}", toks.len().saturating_sub(1))));
            }
            let mut cells: Vec<QPoly> = Vec::with_capacity(3);
            for t in &toks[1..] {
                let c = col_of(raw, t);
                let p = match &field {
                    None => parse_rational(t).map(QPoly::constant).ok_or_else(|| perr(ln, c, format!("bad rational `{t}`")))?,
                    Some(_) => QPoly::parse(t, &var).map_err(|e| perr(ln, c, e.to_string()))?,
                };
                cells.push(p);
            }
            rows.push([cells[0].clone(), cells[1].clone(), cells[2].clone()]);
        }
        if rows.len() != n {
            return Err(perr(last, 0, format!("declared {n} lines, found {}", rows.len())));
        }
        ArrangementFile::new(&var, field, root, rows)
    }
}

fn parse_root(r: &str, k: &Arc<NumberField>) -> Result<RootDesignation, String> {
    if let Some(inner) = r.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
        let (a, b) = inner.split_once(',').ok_or("expected `[lo,hi]`")?;
        let lo = parse_rational(a).ok_or(format!("bad rational `{a}`"))?;
        let hi = parse_rational(b).ok_or(format!("bad rational `{b}`"))?;
        if lo > hi {
            return Err("empty root interval".into());
        }
        // exactly one root in [lo, hi]
        let at = |x: &Rational| k.minpoly.eval(x);
        let inside = sturm::count_in(&k.minpoly, &lo, &hi).map_err(|e| e.to_string())?
            + usize::from(num_traits::Zero::is_zero(&at(&lo)));
        if inside != 1 {
            return Err(format!("interval contains {inside} real roots, expected 1"));
        }
        Ok(RootDesignation::Interval(lo, hi))
    } else {
        let i: usize = r.parse().map_err(|_| format!("bad root designation `{r}`"))?;
        if i >= k.degree() {
            return Err(format!("root index {i} out of range"));
        }
        Ok(RootDesignation::Index(i))
    }
}

impl fmt::Display for ArrangementFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
