//! Factoring over Q.
//!
//! Square-free decomposition first, then rational roots (located through
//! Sturm isolation, so the constant term never has to be factored), then a
//! search for quadratic factors (Kronecker interpolation, which is the
//! integer quadratic-split search made finite by Gauss's lemma). Degrees
//! up to 4 are therefore always decided. Larger residual factors are
//! attacked with a floating root-subset search whose candidates are checked
//! by exact division; irreducibility of what is left is certified by
//! distinct-degree factorization modulo small primes, and when no
//! certificate is found the result carries `unresolved = true`.

use super::poly::QPoly;
use super::scalar::Rational;
use super::sturm;
use super::ExactError;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    /// `p = unit * prod f^m`
    pub unit: Rational,
    /// Primitive integer factors with positive leading coefficient.
    pub factors: Vec<(QPoly, usize)>,
    /// Set when some factor of degree > 4 could not be certified irreducible.
    pub unresolved: bool,
}

impl Factorization {
    pub fn product(&self) -> QPoly {
        let mut acc = QPoly::constant(self.unit.clone());
        for (f, m) in &self.factors {
            acc = acc.mul(&f.pow(*m as u32));
        }
        acc
    }
}

/// Deterministic factor order: by degree, then lexicographic coefficients.
pub fn factor_order(a: &QPoly, b: &QPoly) -> Ordering {
    a.deg().cmp(&b.deg()).then_with(|| a.coeffs().cmp(b.coeffs()))
}

pub fn factor_over_q(p: &QPoly) -> Result<Factorization, ExactError> {
    if p.is_zero() {
        return Err(ExactError::InvalidInput("cannot factor the zero polynomial".into()));
    }
    let mut factors = Vec::new();
    let mut unresolved = false;
    for (part, mult) in p.squarefree_decomposition()? {
        let (fs, unres) = factor_squarefree(&part.primitive());
        unresolved |= unres;
        factors.extend(fs.into_iter().map(|f| (f, mult)));
    }
    factors.sort_by(|a, b| factor_order(&a.0, &b.0));
    let mut prod = QPoly::one();
    for (f, m) in &factors {
        prod = prod.mul(&f.pow(*m as u32));
    }
    let unit = p.lead() / prod.lead();
    Ok(Factorization { unit, factors, unresolved })
}

/// Irreducible factors of a primitive square-free polynomial.
fn factor_squarefree(p: &QPoly) -> (Vec<QPoly>, bool) {
    let mut out = Vec::new();
    let mut rest = p.clone();
    for r in rational_roots(p) {
        let lin = QPoly::new(vec![-r.clone(), Rational::one()]).primitive();
        rest = rest.divrem(&lin).expect("nonzero").0;
        out.push(lin);
    }
    let mut unresolved = false;
    let mut work = vec![rest.primitive()];
    while let Some(f) = work.pop() {
        if f.deg() == 0 {
            continue;
        }
        if f.deg() <= 3 {
            out.push(f);
            continue;
        }
        match split(&f) {
            Split::Found(g) => {
                let h = f.divrem(&g).expect("nonzero").0.primitive();
                work.push(g.primitive());
                work.push(h);
            }
            Split::Irreducible => out.push(f),
            Split::Unknown => {
                unresolved = true;
                out.push(f);
            }
        }
    }
    (out, unresolved)
}

enum Split {
    Found(QPoly),
    Irreducible,
    Unknown,
}

/// One step of splitting a primitive square-free polynomial of degree >= 4
/// without rational roots.
fn split(f: &QPoly) -> Split {
    let n = f.deg();
    if n <= 5 {
        // only a quadratic factor is possible
        match kronecker_quadratic(f) {
            Some(Some(g)) => return Split::Found(g),
            Some(None) => return Split::Irreducible,
            None => {}
        }
    }
    if ddf_certifies_irreducible(f) {
        return Split::Irreducible;
    }
    match numeric_factor(f) {
        Some(g) => Split::Found(g),
        None => Split::Unknown,
    }
}

/// Rational roots of a nonzero polynomial, ascending.
///
/// A rational root `p/q` of a primitive integer polynomial has `q | a_n`.
/// Two distinct rationals with denominators at most `|a_n|` are at least
/// `1/a_n^2` apart, so after isolating real roots to width below that, the
/// simplest rational inside each interval is the only candidate.
pub fn rational_roots(p: &QPoly) -> Vec<Rational> {
    let sf = match p.squarefree_part() {
        Ok(s) => s.primitive(),
        Err(_) => return Vec::new(),
    };
    if sf.deg() == 0 {
        return Vec::new();
    }
    let an = sf.lead().to_integer().abs();
    let width = Rational::new(BigInt::one(), &an * &an * BigInt::from(2));
    let ivs = sturm::isolate_real_roots(&sf, &width).expect("square-free");
    let mut out = Vec::new();
    for iv in ivs {
        let c = simplest_rational(&iv.lo, &iv.hi);
        if sf.eval(&c).is_zero() && !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// The rational with the smallest denominator in `[lo, hi]`.
pub fn simplest_rational(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    let cl = lo.ceil();
    if &cl <= hi {
        if lo.is_positive() {
            return cl;
        }
        if hi.is_negative() {
            return hi.floor();
        }
        return Rational::zero();
    }
    let fl = lo.floor();
    let a = (hi - &fl).recip();
    let b = (lo - &fl).recip();
    fl + simplest_rational(&a, &b).recip()
}

fn int_coeffs(f: &QPoly) -> Vec<BigInt> {
    f.coeffs().iter().map(|c| c.to_integer()).collect()
}

fn eval_int(c: &[BigInt], x: i64) -> BigInt {
    let x = BigInt::from(x);
    let mut acc = BigInt::zero();
    for a in c.iter().rev() {
        acc = acc * &x + a;
    }
    acc
}

const TRIAL_LIMIT: u64 = 100_000_000_000_000;

fn divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > TRIAL_LIMIT {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    Some(small)
}

/// Search for an integer quadratic factor by interpolation at three
/// integer points. `Some(None)` certifies there is none, `None` means the
/// search was over budget.
fn kronecker_quadratic(f: &QPoly) -> Option<Option<QPoly>> {
    let c = int_coeffs(f);
    let mut pts: Vec<(i64, BigInt)> = (-8i64..=8).map(|k| (k, eval_int(&c, k))).collect();
    pts.retain(|(_, v)| !v.is_zero());
    pts.sort_by(|a, b| a.1.abs().cmp(&b.1.abs()).then(a.0.abs().cmp(&b.0.abs())).then(a.0.cmp(&b.0)));
    if pts.len() < 3 {
        return None;
    }
    let pts = &pts[..3];
    let ds: Vec<Vec<u64>> = pts.iter().map(|(_, v)| divisors(v)).collect::<Option<_>>()?;
    let budget: u128 = ds.iter().map(|d| d.len() as u128).product::<u128>() * 4;
    if budget > 20_000_000 {
        return None;
    }
    let xs: Vec<Rational> = pts.iter().map(|(k, _)| Rational::from_integer(BigInt::from(*k))).collect();
    let lead = c.last().unwrap().clone();
    let c0 = c[0].clone();
    for d0 in &ds[0] {
        for d1 in &ds[1] {
            for s1 in [1i64, -1] {
                for d2 in &ds[2] {
                    for s2 in [1i64, -1] {
                        let ys = [
                            Rational::from_integer(BigInt::from(*d0)),
                            Rational::from_integer(BigInt::from(*d1) * s1),
                            Rational::from_integer(BigInt::from(*d2) * s2),
                        ];
                        let g = lagrange(&xs, &ys);
                        if g.deg() != 2 || g.coeffs().iter().any(|q| !q.is_integer()) {
                            continue;
                        }
                        let gl = g.lead().to_integer();
                        let g0 = g.coeff(0).to_integer();
                        if !lead.is_multiple_of(&gl) || g0.is_zero() || !c0.is_multiple_of(&g0) {
                            continue;
                        }
                        let (_, r) = f.divrem(&g).ok()?;
                        if r.is_zero() {
                            return Some(Some(g.primitive()));
                        }
                    }
                }
            }
        }
    }
    Some(None)
}

fn lagrange(xs: &[Rational], ys: &[Rational]) -> QPoly {
    let mut acc = QPoly::zero();
    for i in 0..xs.len() {
        let mut term = QPoly::constant(ys[i].clone());
        for j in 0..xs.len() {
            if i != j {
                let lin = QPoly::new(vec![-xs[j].clone(), Rational::one()]);
                term = term.mul(&lin).scale(&(Rational::one() / (&xs[i] - &xs[j])));
            }
        }
        acc = acc.add(&term);
    }
    acc
}

// ---------- modular certificate ----------

fn mod_poly(c: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut v: Vec<u64> = c.iter().map(|a| a.mod_floor(&pb).to_u64().unwrap()).collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn mp_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn mp_inv(a: u64, p: u64) -> u64 {
    mp_pow(a, p - 2, p)
}

fn mp_pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * a as u128 % p as u128) as u64;
        }
        a = (a as u128 * a as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

fn mp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    mp_trim(&mut r);
    let db = b.len() - 1;
    let inv = mp_inv(*b.last().unwrap(), p);
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = (*r.last().unwrap() as u128 * inv as u128 % p as u128) as u64;
        for (j, bj) in b.iter().enumerate() {
            let s = (c as u128 * *bj as u128 % p as u128) as u64;
            r[k + j] = (r[k + j] + p - s) % p;
        }
        mp_trim(&mut r);
    }
    r
}

fn mp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] = ((v[i + j] as u128 + *x as u128 * *y as u128) % p as u128) as u64;
        }
    }
    mp_rem(&v, m, p)
}

fn mp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    mp_trim(&mut a);
    mp_trim(&mut b);
    while !b.is_empty() {
        let r = mp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn mp_deriv(a: &[u64], p: u64) -> Vec<u64> {
    let mut v: Vec<u64> = a.iter().enumerate().skip(1).map(|(i, c)| (i as u64 % p) * c % p).collect();
    mp_trim(&mut v);
    v
}

fn mp_div(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = mp_inv(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len().saturating_sub(db)];
    for k in (0..q.len()).rev() {
        let c = (r[k + db] as u128 * inv as u128 % p as u128) as u64;
        q[k] = c;
        for (j, bj) in b.iter().enumerate() {
            let s = (c as u128 * *bj as u128 % p as u128) as u64;
            r[k + j] = (r[k + j] + p - s) % p;
        }
    }
    mp_trim(&mut q);
    q
}

/// Degrees of the irreducible factors of `f` mod `p`, when `f` stays
/// square-free of full degree modulo `p`.
fn ddf_degrees(c: &[BigInt], p: u64) -> Option<Vec<usize>> {
    let f = mod_poly(c, p);
    if f.len() != c.len() {
        return None;
    }
    if mp_gcd(&f, &mp_deriv(&f, p), p).len() != 1 {
        return None;
    }
    let mut degs = Vec::new();
    let mut rest = f.clone();
    let mut h = vec![0, 1u64];
    let mut d = 0;
    while rest.len() > 1 {
        d += 1;
        if 2 * d > rest.len() - 1 {
            degs.push(rest.len() - 1);
            break;
        }
        // h = x^(p^d) mod rest
        let mut acc = vec![1u64];
        let mut base = mp_rem(&h, &rest, p);
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mp_mulmod(&acc, &base, &rest, p);
            }
            base = mp_mulmod(&base, &base, &rest, p);
            e >>= 1;
        }
        h = acc;
        let mut hx = h.clone();
        hx.resize(hx.len().max(2), 0);
        hx[1] = (hx[1] + p - 1) % p;
        mp_trim(&mut hx);
        let g = mp_gcd(&rest, &hx, p);
        let gd = g.len() - 1;
        if gd > 0 {
            for _ in 0..gd / d {
                degs.push(d);
            }
            rest = mp_div(&rest, &g, p);
            h = mp_rem(&h, &rest, p);
        }
    }
    Some(degs)
}

const SMALL_PRIMES: [u64; 24] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// A factor of degree `d` over Q reduces to a product of irreducible
/// factors mod p whose degrees sum to `d`; if no `0 < d < n` survives every
/// prime, `f` is irreducible.
pub fn ddf_certifies_irreducible(f: &QPoly) -> bool {
    let c = f.primitive_int();
    let n = c.len() - 1;
    let mut possible = vec![true; n + 1];
    for &p in SMALL_PRIMES.iter().chain([101u64, 103, 107, 109, 113, 127, 131, 137].iter()) {
        let Some(degs) = ddf_degrees(&c, p) else { continue };
        let mut sums = vec![false; n + 1];
        sums[0] = true;
        for d in degs {
            for s in (d..=n).rev() {
                if sums[s - d] {
                    sums[s] = true;
                }
            }
        }
        for k in 1..n {
            possible[k] &= sums[k];
        }
        if (1..n).all(|k| !possible[k]) {
            return true;
        }
    }
    false
}

// ---------- numeric subset search ----------

/// Complex roots by Aberth–Ehrlich iteration in double precision.
pub fn approx_complex_roots(f: &QPoly) -> Vec<Complex64> {
    let n = f.deg();
    if n == 0 {
        return Vec::new();
    }
    let a: Vec<Complex64> = f
        .coeffs()
        .iter()
        .map(|c| Complex64::new(super::scalar::rational_to_f64(c), 0.0))
        .collect();
    let lead = a[n];
    let a: Vec<Complex64> = a.iter().map(|c| c / lead).collect();
    let r = 1.0 + a[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r * 0.5, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64))
        .collect();
    let eval = |x: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in a.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    // polish with Newton
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval(*zi);
            if dp.norm() > 0.0 {
                *zi -= p / dp;
            }
        }
    }
    z
}

fn numeric_factor(f: &QPoly) -> Option<QPoly> {
    let n = f.deg();
    let roots = approx_complex_roots(f);
    let lead = f.lead().to_integer().abs();
    let max_mult: u64 = lead.to_u64().unwrap_or(100_000).min(100_000);
    for d in 2..=n / 2 {
        let mut idx: Vec<usize> = (0..d).collect();
        loop {
            if let Some(g) = candidate(&roots, &idx, max_mult) {
                if let Ok((_, r)) = f.divrem(&g) {
                    if r.is_zero() {
                        return Some(g.primitive());
                    }
                }
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    None
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let d = idx.len();
    for i in (0..d).rev() {
        if idx[i] != i + n - d {
            idx[i] += 1;
            for j in i + 1..d {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn candidate(roots: &[Complex64], idx: &[usize], max_mult: u64) -> Option<QPoly> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &i in idx {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (k, ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= ck * roots[i];
        }
        c = next;
    }
    if c.iter().any(|z| z.im.abs() > 1e-6 * (1.0 + z.re.abs())) {
        return None;
    }
    for m in 1..=max_mult.max(1) {
        let scaled: Vec<f64> = c.iter().map(|z| z.re * m as f64).collect();
        if scaled.iter().all(|v| (v - v.round()).abs() < 1e-6 * (1.0 + v.abs()).sqrt()) {
            let ints: Vec<BigInt> = scaled.iter().map(|v| BigInt::from(v.round() as i64)).collect();
            return Some(QPoly::from_int_coeffs(&ints));
        }
    }
    None
}
