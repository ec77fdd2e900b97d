use super::factor::{approx_complex_roots, factor_over_q};
use super::poly::QPoly;
use super::scalar::{rational_to_f64, Rational, Scalar};
use super::sturm::{self, Interval};
use super::ExactError;
use num_complex::Complex64;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

/// `Q[x]/(minpoly)` with a monic irreducible minimal polynomial of degree 2..=4.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumberField {
    pub name: String,
    pub minpoly: QPoly,
    pub real_root_count: usize,
    /// One isolating interval per real root, ascending.
    pub root_isolations: Vec<Interval>,
}

impl NumberField {
    pub fn new(name: &str, minpoly: &QPoly) -> Result<Arc<Self>, ExactError> {
        let m = minpoly.monic();
        let d = m.degree().unwrap_or(0);
        if !(2..=4).contains(&d) {
            return Err(ExactError::InvalidInput(format!(
                "number field generator must have degree 2..=4, got {d}"
            )));
        }
        let f = factor_over_q(&m)?;
        if f.unresolved || f.factors.len() != 1 || f.factors[0].1 != 1 {
            return Err(ExactError::InvalidInput(format!("{m} is not irreducible over Q")));
        }
        let ivs = sturm::isolate_real_roots(&m, &sturm::default_width())?;
        Ok(Arc::new(NumberField {
            name: name.to_string(),
            real_root_count: ivs.len(),
            root_isolations: ivs,
            minpoly: m,
        }))
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg()
    }

    pub fn complex_roots(&self) -> Vec<Complex64> {
        ordered_roots(&self.minpoly)
    }

    /// Header text `Q(t)/(t^2 - t - 1)`.
    pub fn header(&self) -> String {
        format!("Q({})/({})", self.name, self.minpoly.to_text(&self.name))
    }
}

/// All complex roots in the crate's fixed embedding order: real roots
/// ascending, then non-real roots by real part, positive imaginary part
/// before its conjugate.
pub fn ordered_roots(p: &QPoly) -> Vec<Complex64> {
    let sf = p.squarefree_part().expect("nonzero");
    let reals: Vec<Complex64> = sturm::isolate_real_roots(&sf, &sturm::default_width())
        .expect("square-free")
        .iter()
        .map(|iv| Complex64::new(rational_to_f64(&iv.mid()), 0.0))
        .collect();
    let mut cplx: Vec<Complex64> = approx_complex_roots(&sf)
        .into_iter()
        .filter(|z| z.im.abs() > 1e-9 * (1.0 + z.re.abs()))
        .collect();
    cplx.sort_by(|a, b| {
        let ka = (a.re * 1e8).round();
        let kb = (b.re * 1e8).round();
        ka.partial_cmp(&kb).unwrap().then(b.im.partial_cmp(&a.im).unwrap())
    });
    let mut out = reals;
    out.extend(cplx);
    out
}

/// An element of a number field, stored as its reduced residue.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgNum {
    pub field: Arc<NumberField>,
    pub residue: QPoly,
}

impl AlgNum {
    pub fn new(field: &Arc<NumberField>, p: &QPoly) -> Self {
        AlgNum { field: field.clone(), residue: p.rem(&field.minpoly) }
    }

    pub fn generator(field: &Arc<NumberField>) -> Self {
        AlgNum::new(field, &QPoly::x())
    }

    pub fn from_rational(field: &Arc<NumberField>, r: &Rational) -> Self {
        AlgNum::new(field, &QPoly::constant(r.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    /// The rational value when the residue is constant.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.residue.is_constant() {
            Some(self.residue.coeff(0))
        } else {
            None
        }
    }

    pub fn inverse(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let (g, s, _) = self.residue.xgcd(&self.field.minpoly);
        if !g.is_constant() {
            return Err(ExactError::InvalidInput("modulus is not irreducible".into()));
        }
        Ok(AlgNum::new(&self.field, &s))
    }

    pub fn eval_at(&self, root: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.residue.coeffs().iter().rev() {
            acc = acc * root + rational_to_f64(c);
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// `alg_arith`: checked arithmetic in a single number field.
pub fn alg_arith(a: &AlgNum, b: &AlgNum, op: AlgOp) -> Result<AlgNum, ExactError> {
    if a.field != b.field {
        return Err(ExactError::FieldMismatch);
    }
    let f = &a.field;
    Ok(match op {
        AlgOp::Add => AlgNum::new(f, &a.residue.add(&b.residue)),
        AlgOp::Sub => AlgNum::new(f, &a.residue.sub(&b.residue)),
        AlgOp::Mul => AlgNum::new(f, &a.residue.mul(&b.residue)),
        AlgOp::Div => {
            let inv = b.inverse()?;
            AlgNum::new(f, &a.residue.mul(&inv.residue))
        }
    })
}

/// Exact scalar of an arrangement: a rational, or an element of the
/// arrangement's single number field.
#[derive(Clone, Debug)]
pub enum FieldValue {
    Rat(Rational),
    Alg(AlgNum),
}

impl FieldValue {
    pub fn field(&self) -> Option<&Arc<NumberField>> {
        match self {
            FieldValue::Rat(_) => None,
            FieldValue::Alg(a) => Some(&a.field),
        }
    }

    /// Polynomial representative in the generator (constant for rationals).
    pub fn residue(&self) -> QPoly {
        match self {
            FieldValue::Rat(r) => QPoly::constant(r.clone()),
            FieldValue::Alg(a) => a.residue.clone(),
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            FieldValue::Rat(r) => Some(r.clone()),
            FieldValue::Alg(a) => a.as_rational(),
        }
    }

    fn promote(&self, f: &Arc<NumberField>) -> AlgNum {
        match self {
            FieldValue::Rat(r) => AlgNum::from_rational(f, r),
            FieldValue::Alg(a) => a.clone(),
        }
    }

    pub fn checked(&self, o: &Self, op: AlgOp) -> Result<FieldValue, ExactError> {
        match (self, o) {
            (FieldValue::Rat(a), FieldValue::Rat(b)) => Ok(FieldValue::Rat(match op {
                AlgOp::Add => a + b,
                AlgOp::Sub => a - b,
                AlgOp::Mul => a * b,
                AlgOp::Div => {
                    if b.is_zero() {
                        return Err(ExactError::DivisionByZero);
                    }
                    a / b
                }
            })),
            _ => {
                let f = self.field().or(o.field()).unwrap().clone();
                alg_arith(&self.promote(&f), &o.promote(&f), op).map(FieldValue::Alg)
            }
        }
    }

    pub fn eval_at(&self, root: Complex64) -> Complex64 {
        match self {
            FieldValue::Rat(r) => Complex64::new(rational_to_f64(r), 0.0),
            FieldValue::Alg(a) => a.eval_at(root),
        }
    }

    /// Text form: a rational, or a polynomial in the generator.
    pub fn to_text(&self) -> String {
        match self {
            FieldValue::Rat(r) => super::scalar::fmt_rational(r),
            FieldValue::Alg(a) => a.residue.to_text(&a.field.name),
        }
    }
}

impl PartialEq for FieldValue {
    fn eq(&self, o: &Self) -> bool {
        match (self, o) {
            (FieldValue::Rat(a), FieldValue::Rat(b)) => a == b,
            (FieldValue::Alg(a), FieldValue::Alg(b)) => a.field == b.field && a.residue == b.residue,
            (FieldValue::Rat(r), FieldValue::Alg(a)) | (FieldValue::Alg(a), FieldValue::Rat(r)) => {
                a.as_rational().as_ref() == Some(r)
            }
        }
    }
}

impl fmt::Display for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

macro_rules! fv_op {
    ($tr:ident, $m:ident, $op:expr) => {
        impl $tr for FieldValue {
            type Output = FieldValue;
            fn $m(self, o: FieldValue) -> FieldValue {
                self.checked(&o, $op).expect("field arithmetic")
            }
        }
    };
}
fv_op!(Add, add, AlgOp::Add);
fv_op!(Sub, sub, AlgOp::Sub);
fv_op!(Mul, mul, AlgOp::Mul);
fv_op!(Div, div, AlgOp::Div);

impl Neg for FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        match self {
            FieldValue::Rat(r) => FieldValue::Rat(-r),
            FieldValue::Alg(a) => FieldValue::Alg(AlgNum::new(&a.field.clone(), &a.residue.neg())),
        }
    }
}

impl Zero for FieldValue {
    fn zero() -> Self {
        FieldValue::Rat(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        match self {
            FieldValue::Rat(r) => r.is_zero(),
            FieldValue::Alg(a) => a.is_zero(),
        }
    }
}

impl One for FieldValue {
    fn one() -> Self {
        FieldValue::Rat(Rational::one())
    }
}

impl Scalar for FieldValue {
    fn from_rational(r: &Rational) -> Self {
        FieldValue::Rat(r.clone())
    }
    fn number_field(&self) -> Option<&Arc<NumberField>> {
        self.field()
    }
}
