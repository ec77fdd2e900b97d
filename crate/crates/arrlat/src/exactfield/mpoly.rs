//! Sparse polynomials in at most three parameters `t1, t2, t3`.
//!
//! Only what the realization engine needs: ring arithmetic, exact
//! division, substitution of a parameter by a value or a fraction, and the
//! Sylvester resultant in one parameter.

use super::poly::Poly;
use super::scalar::{fmt_rational, Rational, Scalar};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

pub const NVARS: usize = 3;
pub type Exp = [u16; NVARS];

#[derive(Clone, Debug, PartialEq)]
pub struct MPoly<F = Rational> {
    terms: BTreeMap<Exp, F>,
}

pub type QMPoly = MPoly<Rational>;

impl<F: Scalar> MPoly<F> {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: F) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; NVARS], c);
        }
        MPoly { terms }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; NVARS];
        e[i] = 1;
        Self::term(F::one(), e)
    }

    pub fn term(c: F, e: Exp) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        MPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &F)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_value(&self) -> Option<F> {
        if self.is_constant() {
            Some(self.terms.get(&[0; NVARS]).cloned().unwrap_or_else(F::zero))
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().map(|&x| x as usize).sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> usize {
        self.terms.keys().map(|e| e[v] as usize).max().unwrap_or(0)
    }

    pub fn uses(&self, v: usize) -> bool {
        self.degree_in(v) > 0
    }

    pub fn vars(&self) -> Vec<usize> {
        (0..NVARS).filter(|&v| self.uses(v)).collect()
    }

    pub fn nvars(&self) -> usize {
        self.vars().len()
    }

    /// Leading term in lex order `t1 > t2 > t3`.
    pub fn lead(&self) -> Option<(&Exp, &F)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, e: Exp, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                let s = x.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, -c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        MPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = MPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let mut e = [0; NVARS];
                for i in 0..NVARS {
                    e[i] = e1[i] + e2[i];
                }
                r.add_term(e, c1.clone() * c2.clone());
            }
        }
        r
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(e, x)| (*e, x.clone() * c.clone())).collect() }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut r = MPoly::one();
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Coefficients with respect to `v`, index = power of `v`.
    pub fn coeffs_in(&self, v: usize) -> Vec<Self> {
        let d = self.degree_in(v);
        let mut out = vec![MPoly::zero(); d + 1];
        for (e, c) in &self.terms {
            let mut e2 = *e;
            e2[v] = 0;
            out[e[v] as usize].add_term(e2, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: usize, cs: &[Self]) -> Self {
        let mut r = MPoly::zero();
        for (k, c) in cs.iter().enumerate() {
            for (e, x) in &c.terms {
                let mut e2 = *e;
                e2[v] += k as u16;
                r.add_term(e2, x.clone());
            }
        }
        r
    }

    /// Replace `v` by `num/den` and clear the denominator:
    /// `sum_k c_k num^k den^(d-k)` with `d = degree_in(v)`.
    pub fn subst_fraction(&self, v: usize, num: &Self, den: &Self) -> Self {
        let cs = self.coeffs_in(v);
        let d = cs.len() - 1;
        let mut r = MPoly::zero();
        let mut np = MPoly::one();
        let dp: Vec<Self> = {
            let mut v = vec![MPoly::one()];
            for _ in 0..d {
                let last = v.last().unwrap().mul(den);
                v.push(last);
            }
            v
        };
        for (k, c) in cs.iter().enumerate() {
            if !c.is_zero() {
                r = r.add(&c.mul(&np).mul(&dp[d - k]));
            }
            np = np.mul(num);
        }
        r
    }

    /// Replace `v` by a scalar value.
    pub fn subst_value(&self, v: usize, x: &F) -> Self {
        let cs = self.coeffs_in(v);
        let mut r = MPoly::zero();
        for c in cs.iter().rev() {
            r = r.scale(x).add(c);
        }
        r
    }

    /// Full evaluation; `vals[i]` is used for `t_{i+1}`, missing values are an error.
    pub fn eval(&self, vals: &[Option<F>]) -> Option<F> {
        let mut acc = F::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..NVARS {
                if e[i] > 0 {
                    let x = vals.get(i)?.as_ref()?;
                    for _ in 0..e[i] {
                        t = t * x.clone();
                    }
                }
            }
            acc = acc + t;
        }
        Some(acc)
    }

    pub fn to_univariate(&self, v: usize) -> Option<Poly<F>> {
        if self.vars().iter().any(|&w| w != v) {
            return None;
        }
        let d = self.degree_in(v);
        let mut c = vec![F::zero(); d + 1];
        for (e, x) in &self.terms {
            c[e[v] as usize] = x.clone();
        }
        Some(Poly::new(c))
    }

    pub fn from_univariate(p: &Poly<F>, v: usize) -> Self {
        let mut r = MPoly::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            let mut e = [0; NVARS];
            e[v] = k as u16;
            r.add_term(e, c.clone());
        }
        r
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> MPoly<G> {
        let mut r = MPoly::zero();
        for (e, c) in &self.terms {
            r.add_term(*e, f(c));
        }
        r
    }

    /// Exact quotient `self / d` if `d` divides `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (de, dc) = d.lead()?;
        let (de, dc) = (*de, dc.clone());
        let mut p = self.clone();
        let mut q = MPoly::zero();
        while let Some((pe, pc)) = p.lead() {
            let mut e = [0; NVARS];
            for i in 0..NVARS {
                if pe[i] < de[i] {
                    return None;
                }
                e[i] = pe[i] - de[i];
            }
            let t = MPoly::term(pc.clone() / dc.clone(), e);
            p = p.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    /// Scale so the lex-leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.lead() {
            Some((_, c)) => {
                let inv = F::one() / c.clone();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Resultant with respect to `v` (Sylvester determinant, Bareiss).
    pub fn resultant(&self, o: &Self, v: usize) -> Self {
        let a = self.coeffs_in(v);
        let b = o.coeffs_in(v);
        let (m, n) = (a.len() - 1, b.len() - 1);
        if m == 0 && n == 0 {
            return MPoly::one();
        }
        if m == 0 {
            return a[0].pow(n);
        }
        if n == 0 {
            return b[0].pow(m);
        }
        let size = m + n;
        let mut mat = vec![vec![MPoly::zero(); size]; size];
        for i in 0..n {
            for (j, c) in a.iter().rev().enumerate() {
                mat[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in b.iter().rev().enumerate() {
                mat[n + i][i + j] = c.clone();
            }
        }
        bareiss_det(mat)
    }
}

fn bareiss_det<F: Scalar>(mut m: Vec<Vec<MPoly<F>>>) -> MPoly<F> {
    let n = m.len();
    let mut sign = false;
    let mut prev = MPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = !sign;
                }
                None => return MPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        d.neg()
    } else {
        d
    }
}

impl QMPoly {
    /// Integer coefficients with gcd 1 and positive lex-leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut l = num_bigint::BigInt::one();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
        }
        let mut g = num_bigint::BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(&(c * Rational::from_integer(l.clone())).to_integer());
        }
        let mut s = Rational::new(l, g);
        if self.lead().unwrap().1.is_negative() {
            s = -s;
        }
        self.scale(&s)
    }

    pub fn to_text(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            let mono: Vec<String> = (0..NVARS)
                .filter(|&k| e[k] > 0)
                .map(|k| if e[k] == 1 { names[k].to_string() } else { format!("{}^{}", names[k], e[k]) })
                .collect();
            let body = if mono.is_empty() {
                fmt_rational(&a)
            } else if a.is_one() {
                mono.join("*")
            } else {
                format!("{}*{}", fmt_rational(&a), mono.join("*"))
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}
