//! Independent reference implementations used to cross-check the library.
//! Shared between this crate's tests and the CLI acceptance target.
#![allow(dead_code)]

use arrlat::arrfile::ArrangementFile;
use arrlat::combinatorics::IncidenceSpec;
use arrlat::exactfield::{int, sturm, QPoly, Rational};
use arrlat::geometry::{ProjLine, RationalArrangement};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

// ---------- real roots: sign grid ----------

/// Count sign changes of `q` on the grid `k/64` inside the (integer
/// rounded) Cauchy bound, plus exact zeros on grid points. Evaluation is in
/// integers: `64^deg * q(k/64)` for the primitive integer form of `q`.
pub fn grid_count(q: &QPoly) -> usize {
    const D: i64 = 64;
    let b = sturm::cauchy_bound(q).ceil().to_integer();
    let coeffs = q.primitive_int();
    let deg = coeffs.len() - 1;
    let eval = |k: &BigInt| {
        let mut acc = BigInt::zero();
        for (i, c) in coeffs.iter().enumerate().rev() {
            acc = acc * k + c * BigInt::from(D).pow((deg - i) as u32);
        }
        acc
    };
    let mut count = 0;
    let mut prev: Option<bool> = None;
    let mut k = -&b * D;
    let end = &b * D;
    while k <= end {
        let v = eval(&k);
        if v.is_zero() {
            count += 1;
            prev = None;
        } else {
            let neg = v.is_negative();
            if prev.is_some_and(|p| p != neg) {
                count += 1;
            }
            prev = Some(neg);
        }
        k += 1;
    }
    count
}

/// Random square-free cubic or quartic: distinct roots in `{k/2 : |k| <= 6}`
/// mixed with irreducible quadratics, so roots are at least 1/2 apart and
/// the grid of step 1/64 cannot step over a pair.
pub fn random_separated_poly(rng: &mut StdRng) -> QPoly {
    loop {
        let p = separated_candidate(rng);
        if p.is_squarefree() {
            return p;
        }
    }
}

fn separated_candidate(rng: &mut StdRng) -> QPoly {
    let deg = rng.gen_range(3..=4);
    let mut p = QPoly::from_ints(&[rng.gen_range(1..=3)]);
    let mut roots: Vec<i64> = (-6..=6).collect();
    roots.shuffle(rng);
    let mut d = 0;
    while d < deg {
        if deg - d >= 2 && rng.gen_bool(0.4) {
            // x^2 + b x + c with negative discriminant
            let b = rng.gen_range(-2i64..=2);
            let c = b * b / 4 + rng.gen_range(1..=3);
            p = p.mul(&QPoly::from_ints(&[c, b, 1]));
            d += 2;
        } else {
            let r = roots.pop().unwrap();
            p = p.mul(&QPoly::from_ints(&[-r, 2]));
            d += 1;
        }
    }
    p
}

// ---------- isomorphism by brute force ----------

fn point_set(s: &IncidenceSpec) -> Vec<Vec<usize>> {
    let mut v: Vec<Vec<usize>> = s
        .points()
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q.sort_unstable();
            q
        })
        .collect();
    v.sort();
    v
}

/// Whether `perm` (`perm[i-1]` = image of line `i`) carries the multiple
/// points of `a` onto those of `b`.
pub fn is_witness(a: &IncidenceSpec, b: &IncidenceSpec, perm: &[usize]) -> bool {
    if a.n() != b.n() || perm.len() != a.n() {
        return false;
    }
    let mut img: Vec<Vec<usize>> = a
        .points()
        .iter()
        .map(|p| {
            let mut q: Vec<usize> = p.iter().map(|&i| perm[i - 1]).collect();
            q.sort_unstable();
            q
        })
        .collect();
    img.sort();
    img == point_set(b)
}

/// Exhaustive search over all `n!` permutations (Heap's algorithm) with
/// points encoded as bit masks.
pub fn brute_isomorphic(a: &IncidenceSpec, b: &IncidenceSpec) -> bool {
    let n = a.n();
    if n != b.n() || a.points().len() != b.points().len() {
        return false;
    }
    let mask = |p: &Vec<usize>, f: &dyn Fn(usize) -> usize| p.iter().fold(0u32, |m, &i| m | 1 << f(i));
    let mut target: Vec<u32> = b.points().iter().map(|p| mask(p, &|i| i)).collect();
    target.sort_unstable();
    let mut perm: Vec<usize> = (0..=n).collect();
    let mut img: Vec<u32> = vec![0; target.len()];
    let mut test = |perm: &[usize]| {
        for (k, p) in a.points().iter().enumerate() {
            img[k] = mask(p, &|i| perm[i]);
        }
        img.sort_unstable();
        img == target
    };
    if test(&perm) {
        return true;
    }
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(1, i + 1);
            } else {
                perm.swap(c[i] + 1, i + 1);
            }
            if test(&perm) {
                return true;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    false
}

/// Random linear space on `n` lines: greedily accepted random 3- and 4-sets
/// pairwise sharing at most one line.
pub fn random_spec(rng: &mut StdRng, n: usize) -> IncidenceSpec {
    let tries = rng.gen_range(0..3 * n);
    random_spec_with(rng, n, tries)
}

/// As [`random_spec`] with a fixed number of insertion attempts.
pub fn random_spec_with(rng: &mut StdRng, n: usize, tries: usize) -> IncidenceSpec {
    let mut pts: Vec<Vec<usize>> = Vec::new();
    for _ in 0..tries {
        let m = if rng.gen_bool(0.8) { 3 } else { 4 }.min(n);
        let mut lines: Vec<usize> = (1..=n).collect();
        lines.shuffle(rng);
        let mut p: Vec<usize> = lines[..m].to_vec();
        p.sort_unstable();
        if pts.iter().all(|q| q.iter().filter(|x| p.contains(x)).count() <= 1) {
            pts.push(p);
        }
    }
    IncidenceSpec::new(n, pts).expect("random linear space")
}

pub fn random_perm(rng: &mut StdRng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (1..=n).collect();
    p.shuffle(rng);
    p
}

// ---------- C<=3 by quantifier expansion ----------

/// Literal reading: exists a triple of lines covering every multiple point;
/// simple iff for some covering triple the three are concurrent or some
/// member carries at most one multiple point off the other two.
pub fn c3_oracle(s: &IncidenceSpec) -> &'static str {
    let n = s.n();
    let pts = s.points();
    if pts.is_empty() {
        return "C3_simple";
    }
    let on = |p: &Vec<usize>, l: usize| p.contains(&l);
    let mut any = false;
    let mut simple = false;
    for a in 1..=n {
        for b in 1..=n {
            for c in 1..=n {
                if !(a < b && b < c) {
                    continue;
                }
                let covers = pts.iter().all(|p| on(p, a) || on(p, b) || on(p, c));
                if !covers {
                    continue;
                }
                any = true;
                let concurrent = pts.iter().any(|p| on(p, a) && on(p, b) && on(p, c));
                let lonely = [(a, b, c), (b, a, c), (c, a, b)]
                    .iter()
                    .any(|&(l, u, v)| pts.iter().filter(|p| on(p, l) && !on(p, u) && !on(p, v)).count() <= 1);
                simple |= concurrent || lonely;
            }
        }
    }
    match (any, simple) {
        (false, _) => "not_C3",
        (true, true) => "C3_simple",
        (true, false) => "C3_nonsimple",
    }
}

// ---------- random rational arrangements ----------

pub fn random_rational_arrangement(rng: &mut StdRng, k: usize) -> RationalArrangement {
    loop {
        let mut lines: Vec<ProjLine<Rational>> = Vec::new();
        while lines.len() < k {
            // small coefficients make coincidences frequent
            let c: Vec<i64> = (0..3).map(|_| rng.gen_range(-3..=3)).collect();
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            let l = ProjLine::from_ints(c[0], c[1], c[2]);
            if lines.iter().all(|m| !arrlat::geometry::proportional(&m.coeffs, &l.coeffs)) {
                lines.push(l);
            }
        }
        if let Ok(a) = RationalArrangement::new(None, lines) {
            return a;
        }
    }
}

// ---------- 128-bit interval arithmetic ----------

const BITS: u32 = 128;

fn scale() -> BigInt {
    BigInt::one() << BITS
}

/// Closed interval `[lo, hi] / 2^128`, endpoints rounded outward.
#[derive(Clone, Debug)]
pub struct Iv {
    lo: BigInt,
    hi: BigInt,
}

impl Iv {
    pub fn from_rational(r: &Rational) -> Iv {
        let s = r * Rational::from_integer(scale());
        Iv { lo: s.floor().to_integer(), hi: s.ceil().to_integer() }
    }
    fn hull(lo: &Rational, hi: &Rational) -> Iv {
        let s = Rational::from_integer(scale());
        Iv { lo: (lo * &s).floor().to_integer(), hi: (hi * &s).ceil().to_integer() }
    }
    fn add(&self, o: &Iv) -> Iv {
        Iv { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }
    fn neg(&self) -> Iv {
        Iv { lo: -&self.hi, hi: -&self.lo }
    }
    fn sub(&self, o: &Iv) -> Iv {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Iv) -> Iv {
        let ps = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = ps.iter().min().unwrap();
        let hi = ps.iter().max().unwrap();
        let s = scale();
        Iv { lo: lo.div_floor(&s), hi: hi.div_ceil(&s) }
    }
    fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }
    pub fn width_bits(&self) -> u64 {
        (&self.hi - &self.lo).bits()
    }
}

#[derive(Clone, Debug)]
pub struct CIv {
    re: Iv,
    im: Iv,
}

impl CIv {
    fn real(r: &Rational) -> CIv {
        CIv { re: Iv::from_rational(r), im: Iv::from_rational(&Rational::zero()) }
    }
    fn add(&self, o: &CIv) -> CIv {
        CIv { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }
    fn sub(&self, o: &CIv) -> CIv {
        CIv { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }
    fn mul(&self, o: &CIv) -> CIv {
        CIv {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }
    fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }
}

type C = (Rational, Rational);

fn cmul(a: &C, b: &C) -> C {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn ceval(p: &QPoly, z: &C) -> C {
    let mut acc = (Rational::zero(), Rational::zero());
    for c in p.coeffs().iter().rev() {
        acc = cmul(&acc, z);
        acc.0 += c;
    }
    acc
}

fn round_dyadic(r: &Rational, bits: u32) -> Rational {
    let s = Rational::from_integer(BigInt::one() << bits);
    (r * &s).round() / s
}

/// Rigorous box around a simple root of `p` near `z0`: Newton polishing in
/// dyadic arithmetic, then the disc of radius `deg * |p(z)| / |p'(z)|`,
/// which always contains a root.
pub fn root_box(p: &QPoly, z0: (f64, f64)) -> CIv {
    let dp = p.derivative();
    let to_r = |x: f64| Rational::from_float(x).unwrap_or_else(Rational::zero);
    let mut z: C = (to_r(z0.0), to_r(z0.1));
    for _ in 0..10 {
        let f = ceval(p, &z);
        let d = ceval(&dp, &z);
        let nrm = &d.0 * &d.0 + &d.1 * &d.1;
        if nrm.is_zero() {
            break;
        }
        // f / d = f * conj(d) / |d|^2
        let q = cmul(&f, &(d.0.clone(), -d.1.clone()));
        z = (round_dyadic(&(&z.0 - &q.0 / &nrm), 220), round_dyadic(&(&z.1 - &q.1 / &nrm), 220));
    }
    let f = ceval(p, &z);
    let d = ceval(&dp, &z);
    let dmax = d.0.abs().max(d.1.abs());
    assert!(dmax.is_positive(), "root is not simple");
    let r = (f.0.abs() + f.1.abs()) * int(p.deg() as i64) / dmax;
    CIv { re: Iv::hull(&(&z.0 - &r), &(&z.0 + &r)), im: Iv::hull(&(&z.1 - &r), &(&z.1 + &r)) }
}

fn eval_box(p: &QPoly, t: &CIv) -> CIv {
    let mut acc = CIv::real(&Rational::zero());
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(t).add(&CIv::real(c));
    }
    acc
}

fn cross_box(a: &[CIv; 3], b: &[CIv; 3]) -> [CIv; 3] {
    [
        a[1].mul(&b[2]).sub(&a[2].mul(&b[1])),
        a[2].mul(&b[0]).sub(&a[0].mul(&b[2])),
        a[0].mul(&b[1]).sub(&a[1].mul(&b[0])),
    ]
}

/// Outcome of grouping the pairwise meets of an arrangement file with
/// 128-bit complex interval arithmetic under its designated embedding.
pub struct IntervalGrouping {
    /// Incident line sets of size >= 3, sorted.
    pub multiple_points: Vec<Vec<usize>>,
    /// Pairs of meets that were neither certainly equal-candidates nor
    /// certainly distinct in a way inconsistent with a clean partition.
    pub ambiguous: usize,
}

pub fn interval_grouping(f: &ArrangementFile) -> IntervalGrouping {
    let t = match &f.field {
        None => CIv::real(&Rational::zero()),
        Some(k) => {
            let z = f.embedding().expect("designated root");
            root_box(&k.minpoly, (z.re, z.im))
        }
    };
    let lines: Vec<[CIv; 3]> = f
        .rows
        .iter()
        .map(|r| [eval_box(&r[0], &t), eval_box(&r[1], &t), eval_box(&r[2], &t)])
        .collect();
    let n = lines.len();
    let mut meets: Vec<((usize, usize), [CIv; 3])> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            meets.push(((i + 1, j + 1), cross_box(&lines[i], &lines[j])));
        }
    }
    // union-find over "possibly equal" meets
    let m = meets.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut possibly = vec![vec![false; m]; m];
    for a in 0..m {
        for b in a + 1..m {
            let c = cross_box(&meets[a].1, &meets[b].1);
            if c.iter().all(|x| x.contains_zero()) {
                possibly[a][b] = true;
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    // a clean partition has every class a clique of "possibly equal"
    let mut ambiguous = 0;
    for a in 0..m {
        for b in a + 1..m {
            if find(&mut parent, a) == find(&mut parent, b) && !possibly[a][b] {
                ambiguous += 1;
            }
        }
    }
    let mut classes: std::collections::BTreeMap<usize, std::collections::BTreeSet<usize>> = Default::default();
    for (k, ((i, j), _)) in meets.iter().enumerate() {
        let r = find(&mut parent, k);
        let e = classes.entry(r).or_default();
        e.insert(*i);
        e.insert(*j);
    }
    let mut multiple_points: Vec<Vec<usize>> =
        classes.into_values().filter(|s| s.len() >= 3).map(|s| s.into_iter().collect()).collect();
    multiple_points.sort();
    IntervalGrouping { multiple_points, ambiguous }
}

pub fn exact_multiple_points(f: &ArrangementFile) -> Vec<Vec<usize>> {
    let lat = arrlat::geometry::compute_lattice(&f.arrangement);
    let mut v: Vec<Vec<usize>> = lat.points.iter().map(|p| p.lines.clone()).filter(|l| l.len() >= 3).collect();
    v.sort();
    v
}

// ---------- closed-form generators for rendering checks ----------

/// The designated root of selected catalog fields, from closed forms
/// rather than from the library's root finder.
pub fn closed_form_root(id: &str) -> Option<f64> {
    let s5 = 5f64.sqrt();
    let c = |k: f64| 2.0 * (k * std::f64::consts::PI / 7.0).cos();
    Some(match id {
        "eq3_plus" => (-1.0 + s5) / 2.0,
        "eq3_minus" => (-1.0 - s5) / 2.0,
        "eq4_plus" => 2f64.sqrt(),
        "eq4_minus" => -(2f64.sqrt()),
        "eq1_plus" => (1.0 + s5) / 2.0,
        "eq1_minus" => (1.0 - s5) / 2.0,
        // roots of t^3 - t^2 - 2t + 1 are 2cos(k pi / 7), k = 1, 3, 5
        "eq7_root1" => c(5.0),
        "eq7_root2" => c(3.0),
        "eq7_root3" => c(1.0),
        _ => return None,
    })
}

/// Real line coefficients `(a, b, c)` evaluated at `t` by Horner.
pub fn numeric_lines(f: &ArrangementFile, t: f64) -> Vec<[f64; 3]> {
    let ev = |p: &QPoly| {
        p.coeffs()
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + arrlat::exactfield::rational_to_f64(c))
    };
    f.rows.iter().map(|r| [ev(&r[0]), ev(&r[1]), ev(&r[2])]).collect()
}
