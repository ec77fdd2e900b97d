//! Sturm sequences and exact real-root isolation over Q.

use super::poly::QPoly;
use super::scalar::Rational;
use super::ExactError;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A closed rational interval `[lo, hi]`; `lo == hi` marks an exact rational root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }
    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// Target isolation width, 2^-40.
pub fn default_width() -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << 40)
}

pub fn sturm_sequence(p: &QPoly) -> Vec<QPoly> {
    let mut seq = vec![p.clone(), p.derivative()];
    while !seq.last().unwrap().is_zero() {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]);
        seq.push(r.neg());
    }
    seq.pop();
    seq
}

fn sign(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut v = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

fn var_at(seq: &[QPoly], x: &Rational) -> usize {
    variations(seq.iter().map(|q| sign(&q.eval(x))))
}

fn var_at_pos_inf(seq: &[QPoly]) -> usize {
    variations(seq.iter().map(|q| sign(&q.lead())))
}

fn var_at_neg_inf(seq: &[QPoly]) -> usize {
    variations(seq.iter().map(|q| {
        let s = sign(&q.lead());
        if q.deg() % 2 == 1 {
            -s
        } else {
            s
        }
    }))
}

/// Cauchy bound: every root has |x| < 1 + max |a_i / a_n|.
pub fn cauchy_bound(p: &QPoly) -> Rational {
    let l = p.lead().abs();
    let mut m = Rational::zero();
    for c in &p.coeffs()[..p.deg()] {
        let v = c.abs() / &l;
        if v > m {
            m = v;
        }
    }
    m + Rational::one()
}

fn check_input(p: &QPoly) -> Result<(), ExactError> {
    if p.is_zero() {
        return Err(ExactError::InvalidInput("Sturm count of the zero polynomial".into()));
    }
    if !p.is_squarefree() {
        return Err(ExactError::InvalidInput(format!("polynomial {p} is not square-free")));
    }
    Ok(())
}

/// Number of distinct real roots of a square-free polynomial.
pub fn real_root_count(p: &QPoly) -> Result<usize, ExactError> {
    check_input(p)?;
    let s = sturm_sequence(p);
    Ok(var_at_neg_inf(&s) - var_at_pos_inf(&s))
}

/// Roots in the half-open interval `(a, b]`.
pub fn count_in(p: &QPoly, a: &Rational, b: &Rational) -> Result<usize, ExactError> {
    check_input(p)?;
    let s = sturm_sequence(p);
    Ok(var_at(&s, a) - var_at(&s, b))
}

/// `sturm_real_roots`: count plus disjoint isolating intervals of width at
/// most `width`, sorted ascending.
pub fn isolate_real_roots(p: &QPoly, width: &Rational) -> Result<Vec<Interval>, ExactError> {
    check_input(p)?;
    let seq = sturm_sequence(p);
    let b = cauchy_bound(p);
    let mut out = Vec::new();
    // work list of half-open (lo, hi] with known root count
    let lo = -b.clone();
    let hi = b;
    let n = var_at(&seq, &lo) - var_at(&seq, &hi);
    let mut stack = vec![(lo, hi, n)];
    while let Some((lo, hi, n)) = stack.pop() {
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(refine_one(p, &seq, lo, hi, width));
            continue;
        }
        let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
        let nl = var_at(&seq, &lo) - var_at(&seq, &mid);
        stack.push((mid.clone(), hi, n - nl));
        stack.push((lo, mid, nl));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(out)
}

/// Bisect `(lo, hi]`, known to hold one root, down to `width`.
fn refine_one(p: &QPoly, seq: &[QPoly], mut lo: Rational, mut hi: Rational, width: &Rational) -> Interval {
    if p.eval(&hi).is_zero() {
        return Interval { lo: hi.clone(), hi };
    }
    let two = Rational::from_integer(BigInt::from(2));
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / &two;
        let v = p.eval(&mid);
        if v.is_zero() {
            return Interval { lo: mid.clone(), hi: mid };
        }
        if var_at(seq, &lo) - var_at(seq, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Interval { lo, hi }
}

/// Further shrink an isolating interval of `p` (square-free) to `width`.
pub fn refine(p: &QPoly, iv: &Interval, width: &Rational) -> Interval {
    if iv.lo == iv.hi {
        return iv.clone();
    }
    let seq = sturm_sequence(p);
    // the root may sit exactly on lo; treat it first
    if p.eval(&iv.lo).is_zero() {
        return Interval { lo: iv.lo.clone(), hi: iv.lo.clone() };
    }
    refine_one(p, &seq, iv.lo.clone(), iv.hi.clone(), width)
}
