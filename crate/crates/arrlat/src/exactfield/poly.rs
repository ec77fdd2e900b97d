use super::scalar::{fmt_rational, parse_rational, Rational, Scalar};
use super::ExactError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Dense univariate polynomial, coefficients lowest degree first.
///
/// The zero polynomial is the empty vector; otherwise the last coefficient
/// is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<F = Rational> {
    coeffs: Vec<F>,
}

/// Polynomial over Q; the workhorse of factoring and root isolation.
pub type QPoly = Poly<Rational>;

impl<F: Scalar> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![F::one()] }
    }

    pub fn constant(c: F) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    /// `x`.
    pub fn x() -> Self {
        Poly::monomial(F::one(), 1)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(v)
    }

    pub fn scale(&self, c: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Poly::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Evaluate at a value of another scalar type (e.g. a Q-polynomial at an
    /// algebraic number).
    pub fn eval_in<G: Scalar>(&self, x: &G, lift: impl Fn(&F) -> G) -> G {
        let mut acc = G::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + lift(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * F::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let l = self.lead();
        Poly::new(self.coeffs.iter().map(|c| c.clone() / l.clone()).collect())
    }

    /// Euclidean division; `d` must be nonzero.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self), ExactError> {
        if d.is_zero() {
            return Err(ExactError::InvalidInput("division by the zero polynomial".into()));
        }
        let dd = d.deg();
        let ld = d.lead();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut q = vec![F::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone() / ld.clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].clone() - c.clone() * dc.clone();
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(q), Poly::new(r)))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).expect("nonzero divisor").1
    }

    /// Monic gcd; `gcd(0, 0)` is an error.
    pub fn gcd(&self, o: &Self) -> Result<Self, ExactError> {
        if self.is_zero() && o.is_zero() {
            return Err(ExactError::InvalidInput("gcd of two zero polynomials".into()));
        }
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Extended Euclid: returns `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn xgcd(&self, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let l = F::one() / r0.lead();
        (r0.scale(&l), s0.scale(&l), t0.scale(&l))
    }

    /// `p(a*x + b)` style composition: substitute the polynomial `q` for x.
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&Poly::constant(c.clone()));
        }
        acc
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl QPoly {
    pub fn from_ints(v: &[i64]) -> Self {
        Poly::new(v.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    pub fn from_rationals(v: &[Rational]) -> Self {
        Poly::new(v.to_vec())
    }

    /// Unique primitive integer polynomial with positive leading coefficient
    /// that is a rational multiple of `self`.
    pub fn primitive_int(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let mut v: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for c in &v {
            g = g.gcd(c);
        }
        let sign = if v.last().unwrap().is_negative() { -1 } else { 1 };
        for c in v.iter_mut() {
            *c = &*c / &g * sign;
        }
        v
    }

    /// Rational multiple of `self` with coprime integer coefficients and
    /// positive leading coefficient: the normalization used for equality
    /// "up to unit".
    pub fn primitive(&self) -> Self {
        Poly::new(self.primitive_int().into_iter().map(Rational::from_integer).collect())
    }

    pub fn from_int_coeffs(v: &[BigInt]) -> Self {
        Poly::new(v.iter().cloned().map(Rational::from_integer).collect())
    }

    /// Square-free part `p / gcd(p, p')`, made monic.
    pub fn squarefree_part(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::InvalidInput("square-free part of zero".into()));
        }
        if self.is_constant() {
            return Ok(Poly::one());
        }
        let g = self.gcd(&self.derivative())?;
        Ok(self.divrem(&g)?.0.monic())
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).map(|g| g.is_constant()).unwrap_or(false)
    }

    /// Yun's square-free decomposition: monic `(a_i, i)` with
    /// `p = lc * prod a_i^i`, each `a_i` square-free and pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(Self, usize)>, ExactError> {
        if self.is_zero() {
            return Err(ExactError::InvalidInput("square-free decomposition of zero".into()));
        }
        let mut out = Vec::new();
        if self.is_constant() {
            return Ok(out);
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df)?;
        let mut b = f.divrem(&a0)?.0;
        let mut c = df.divrem(&a0)?.0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let a = b.gcd(&d)?;
            if !a.is_constant() {
                out.push((a.clone(), i));
            }
            b = b.divrem(&a)?.0;
            if b.is_constant() {
                break;
            }
            c = d.divrem(&a)?.0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        Ok(out)
    }

    /// Sylvester resultant of two univariate polynomials.
    pub fn resultant(&self, o: &Self) -> Result<Rational, ExactError> {
        if self.is_zero() || o.is_zero() {
            return Err(ExactError::InvalidInput("resultant with the zero polynomial".into()));
        }
        // Euclidean recurrence: res(a,b) = (-1)^(deg a deg b) lc(b)^(deg a - deg r) res(b, r)
        let (mut a, mut b) = (self.clone(), o.clone());
        let mut acc = Rational::one();
        loop {
            let (da, db) = (a.deg(), b.deg());
            if db == 0 {
                return Ok(acc * num_traits::pow(b.lead(), da));
            }
            let r = a.rem(&b);
            if r.is_zero() {
                return Ok(Rational::zero());
            }
            let dr = r.deg();
            if (da * db) % 2 == 1 {
                acc = -acc;
            }
            acc *= num_traits::pow(b.lead(), da - dr);
            a = b;
            b = r;
        }
    }

    /// Sparse text form `c0 + c1*t + c2*t^2`, rational coefficients `p/q`,
    /// zero terms omitted; the zero polynomial prints as `0`.
    pub fn to_text(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            let body = match k {
                0 => fmt_rational(&a),
                _ => {
                    let m = if k == 1 { var.to_string() } else { format!("{var}^{k}") };
                    if a.is_one() {
                        m
                    } else {
                        format!("{}*{}", fmt_rational(&a), m)
                    }
                }
            };
            if parts.is_empty() {
                parts.push(if neg { format!("-{body}") } else { body });
            } else {
                parts.push(format!("{} {}", if neg { "-" } else { "+" }, body));
            }
        }
        parts.join(" ")
    }

    /// Inverse of [`to_text`](Self::to_text); also accepts unnormalized
    /// input such as `t^2 - t - 1`, `2*t`, `-3/2 + t^3`.
    pub fn parse(s: &str, var: &str) -> Result<Self, ExactError> {
        let err = |m: &str| ExactError::Parse(format!("{m} in polynomial `{s}`"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                terms.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if (ch == '+' || ch == '-') && i == 0 {
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        terms.push((neg, cur));
        let mut coeffs: Vec<Rational> = Vec::new();
        for (neg, t) in terms {
            if t.is_empty() {
                return Err(err("empty term"));
            }
            let (coef, mono) = match t.find(var) {
                None => (t.as_str(), ""),
                Some(p) => {
                    let (c, m) = t.split_at(p);
                    let c = c.strip_suffix('*').unwrap_or(if c.is_empty() { "" } else { "?" });
                    (c, m)
                }
            };
            let c = if coef.is_empty() {
                Rational::one()
            } else {
                parse_rational(coef).ok_or_else(|| err(&format!("bad coefficient `{coef}`")))?
            };
            let k = if mono.is_empty() {
                0
            } else {
                let rest = &mono[var.len()..];
                if rest.is_empty() {
                    1
                } else {
                    let e = rest.strip_prefix('^').ok_or_else(|| err("expected `^`"))?;
                    e.parse::<usize>().map_err(|_| err(&format!("bad exponent `{e}`")))?
                }
            };
            if k > 64 {
                return Err(err("exponent too large"));
            }
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rational::zero());
            }
            coeffs[k] += if neg { -c } else { c };
        }
        Ok(Poly::new(coeffs))
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text("t"))
    }
}
