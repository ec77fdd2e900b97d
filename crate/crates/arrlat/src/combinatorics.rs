//! Abstract incidence specifications: isomorphism, canonical form,
//! sub-arrangement search and the C<=3 classification.

use crate::exactfield::Scalar;
use crate::geometry::IntersectionLattice;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// `n` lines and the multiple points, each a sorted set of 1-based line
/// indices of size >= 3. Pairs not covered by a multiple point meet in
/// double points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IncidenceSpec {
    n: usize,
    points: Vec<Vec<usize>>,
}

/// A relabeling `i -> perm[i-1]` of `1..=n`.
pub type LatticePermutation = Vec<usize>;

impl IncidenceSpec {
    pub fn new(n: usize, points: Vec<Vec<usize>>) -> Result<Self, SpecError> {
        let mut pts: Vec<Vec<usize>> = Vec::with_capacity(points.len());
        for mut p in points {
            p.sort_unstable();
            p.dedup();
            if p.len() < 3 {
                return Err(SpecError::InvalidSpec(format!("multiple point {p:?} has fewer than 3 lines")));
            }
            if p[0] == 0 || *p.last().unwrap() > n {
                return Err(SpecError::InvalidSpec(format!("multiple point {p:?} has an index outside 1..={n}")));
            }
            pts.push(p);
        }
        pts.sort();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if pts[i] == pts[j] {
                    return Err(SpecError::InvalidSpec(format!("duplicate multiple point {:?}", pts[i])));
                }
                if shared(&pts[i], &pts[j]) > 1 {
                    return Err(SpecError::InvalidSpec(format!(
                        "points {:?} and {:?} share more than one line",
                        pts[i], pts[j]
                    )));
                }
            }
        }
        Ok(IncidenceSpec { n, points: pts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Vec<usize>] {
        &self.points
    }

    pub fn census(&self) -> BTreeMap<usize, usize> {
        let mut c = BTreeMap::new();
        let mut covered = 0;
        for p in &self.points {
            *c.entry(p.len()).or_insert(0) += 1;
            covered += p.len() * (p.len() - 1) / 2;
        }
        let doubles = self.n * self.n.saturating_sub(1) / 2 - covered;
        if doubles > 0 {
            c.insert(2, doubles);
        }
        c
    }

    /// Multiplicities of the multiple points through line `i`, sorted descending.
    pub fn signature(&self, i: usize) -> Vec<usize> {
        let mut s: Vec<usize> = self.points.iter().filter(|p| p.contains(&i)).map(|p| p.len()).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    /// Index of the multiple point shared by lines `a` and `b`, if any.
    pub fn shared_point(&self, a: usize, b: usize) -> Option<usize> {
        self.points.iter().position(|p| p.contains(&a) && p.contains(&b))
    }

    /// Image under `perm` (new label of line i is `perm[i-1]`).
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let pts = self.points.iter().map(|p| p.iter().map(|&i| perm[i - 1]).collect()).collect();
        IncidenceSpec::new(self.n, pts).expect("relabeling preserves validity")
    }

    /// Induced restriction to `lines` (new label k+1 for `lines[k]`).
    pub fn restrict(&self, lines: &[usize]) -> Self {
        let pos: BTreeMap<usize, usize> = lines.iter().enumerate().map(|(k, &l)| (l, k + 1)).collect();
        let pts = self
            .points
            .iter()
            .map(|p| p.iter().filter_map(|i| pos.get(i).copied()).collect::<Vec<_>>())
            .filter(|p| p.len() >= 3)
            .collect();
        IncidenceSpec::new(lines.len(), pts).expect("restriction preserves validity")
    }

    /// Spec text: `n <count>` then `point <mult>: i1 i2 ...` per point.
    pub fn to_text(&self) -> String {
        let mut s = format!("n {}\n", self.n);
        for p in &self.points {
            let idx: Vec<String> = p.iter().map(|i| i.to_string()).collect();
            s.push_str(&format!("point {}: {}\n", p.len(), idx.join(" ")));
        }
        s
    }

    /// Parse spec text. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let mut n: Option<usize> = None;
        let mut pts = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| SpecError::Parse { line: ln + 1, msg };
            if let Some(rest) = line.strip_prefix("n ") {
                if n.is_some() {
                    return Err(err("duplicate `n` header".into()));
                }
                n = Some(rest.trim().parse().map_err(|_| err(format!("bad line count `{}`", rest.trim())))?);
            } else if let Some(rest) = line.strip_prefix("point") {
                if n.is_none() {
                    return Err(err("`point` before `n` header".into()));
                }
                let (m, idx) = rest.split_once(':').ok_or_else(|| err("expected `point <mult>: ...`".into()))?;
                let m: usize = m.trim().parse().map_err(|_| err(format!("bad multiplicity `{}`", m.trim())))?;
                let idx: Vec<usize> = idx
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| err(format!("bad line index `{t}`"))))
                    .collect::<Result<_, _>>()?;
                if idx.len() != m {
                    return Err(err(format!("multiplicity {m} but {} indices", idx.len())));
                }
                pts.push(idx);
            } else {
                let tok = line.split_whitespace().next().unwrap_or("");
                return Err(err(format!("unknown token `{tok}`")));
            }
        }
        let n = n.ok_or(SpecError::Parse { line: 0, msg: "missing `n` header".into() })?;
        IncidenceSpec::new(n, pts)
    }
}

impl fmt::Display for IncidenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn shared(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|x| b.contains(x)).count()
}

/// Forget coordinates: the incident sets of multiplicity >= 3.
pub fn spec_from_lattice<F: Scalar>(lat: &IntersectionLattice<F>) -> IncidenceSpec {
    IncidenceSpec::new(lat.n, lat.multiple_point_sets()).expect("lattice points pairwise share at most one line")
}

// ---------- isomorphism ----------

/// Pair relation used for pruning: multiplicity of the shared multiple
/// point, 0 when the pair meets in a double point.
fn pair_table(s: &IncidenceSpec) -> Vec<Vec<usize>> {
    let n = s.n;
    let mut t = vec![vec![0; n + 1]; n + 1];
    for p in &s.points {
        for &a in p {
            for &b in p {
                if a != b {
                    t[a][b] = p.len();
                }
            }
        }
    }
    t
}

/// Line order for the search: rarest signature first, then lines most
/// connected to those already placed.
fn search_order(s: &IncidenceSpec, sigs: &[Vec<usize>], table: &[Vec<usize>]) -> Vec<usize> {
    let n = s.n;
    let mut freq: BTreeMap<&Vec<usize>, usize> = BTreeMap::new();
    for i in 1..=n {
        *freq.entry(&sigs[i]).or_insert(0) += 1;
    }
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n + 1];
    for _ in 0..n {
        let best = (1..=n)
            .filter(|&i| !placed[i])
            .max_by_key(|&i| {
                let links = order.iter().filter(|&&j| table[i][j] > 0).count();
                (links, std::cmp::Reverse(freq[&sigs[i]]), sigs[i].len(), std::cmp::Reverse(i))
            })
            .unwrap();
        placed[best] = true;
        order.push(best);
    }
    order
}

/// A permutation carrying the multiple points of `s1` onto those of `s2`.
pub fn are_isomorphic(s1: &IncidenceSpec, s2: &IncidenceSpec) -> Option<LatticePermutation> {
    if s1.n != s2.n || s1.census() != s2.census() {
        return None;
    }
    let n = s1.n;
    let sig1: Vec<Vec<usize>> = (0..=n).map(|i| s1.signature(i)).collect();
    let sig2: Vec<Vec<usize>> = (0..=n).map(|i| s2.signature(i)).collect();
    let mut a: Vec<&Vec<usize>> = sig1[1..].iter().collect();
    let mut b: Vec<&Vec<usize>> = sig2[1..].iter().collect();
    a.sort();
    b.sort();
    if a != b {
        return None;
    }
    let t1 = pair_table(s1);
    let t2 = pair_table(s2);
    let order = search_order(s1, &sig1, &t1);
    let mut perm = vec![0usize; n + 1];
    let mut used = vec![false; n + 1];
    let target: std::collections::BTreeSet<Vec<usize>> = s2.points.iter().cloned().collect();
    if iso_search(0, &order, s1, &sig1, &sig2, &t1, &t2, &mut perm, &mut used, &target) {
        Some(perm[1..].to_vec())
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn iso_search(
    depth: usize,
    order: &[usize],
    s1: &IncidenceSpec,
    sig1: &[Vec<usize>],
    sig2: &[Vec<usize>],
    t1: &[Vec<usize>],
    t2: &[Vec<usize>],
    perm: &mut Vec<usize>,
    used: &mut Vec<bool>,
    target: &std::collections::BTreeSet<Vec<usize>>,
) -> bool {
    let n = s1.n;
    if depth == order.len() {
        return s1.points.iter().all(|p| {
            let mut q: Vec<usize> = p.iter().map(|&i| perm[i]).collect();
            q.sort_unstable();
            target.contains(&q)
        });
    }
    let i = order[depth];
    for j in 1..=n {
        if used[j] || sig1[i] != sig2[j] {
            continue;
        }
        if order[..depth].iter().any(|&k| t1[i][k] != t2[j][perm[k]]) {
            continue;
        }
        perm[i] = j;
        used[j] = true;
        // every fully placed point must land on a point
        let ok = s1.points.iter().filter(|p| p.contains(&i)).all(|p| {
            if p.iter().all(|&x| used_src(x, order, depth)) {
                let mut q: Vec<usize> = p.iter().map(|&x| perm[x]).collect();
                q.sort_unstable();
                target.contains(&q)
            } else {
                true
            }
        });
        if ok && iso_search(depth + 1, order, s1, sig1, sig2, t1, t2, perm, used, target) {
            return true;
        }
        used[j] = false;
        perm[i] = 0;
    }
    false
}

fn used_src(x: usize, order: &[usize], depth: usize) -> bool {
    order[..=depth].contains(&x)
}

// ---------- canonical form ----------

/// Canonical text of the isomorphism class. Lines are relabeled so that the
/// row code (for each new label, the shared-point relation with all smaller
/// labels) is lexicographically minimal; only lines of equal signature class
/// compete for a label, and interchangeable lines (whose transposition is
/// an automorphism) are explored once.
pub fn canonical_form(s: &IncidenceSpec) -> String {
    let n = s.n;
    if s.points.is_empty() {
        return format!("n={n};empty");
    }
    let sigs: Vec<Vec<usize>> = (0..=n).map(|i| s.signature(i)).collect();
    // label slots are filled class by class: larger signatures first
    let mut classes: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for i in 1..=n {
        match classes.iter_mut().find(|(sg, _)| *sg == sigs[i]) {
            Some((_, v)) => v.push(i),
            None => classes.push((sigs[i].clone(), vec![i])),
        }
    }
    classes.sort_by(|a, b| b.0.cmp(&a.0));
    let slot_class: Vec<usize> = classes.iter().enumerate().flat_map(|(k, (_, v))| vec![k; v.len()]).collect();
    let members: Vec<Vec<usize>> = classes.into_iter().map(|(_, v)| v).collect();
    let mut st = Canon {
        s,
        slot_class,
        members,
        best: None,
        best_order: Vec::new(),
    };
    let mut order = Vec::with_capacity(n);
    let mut code = Vec::new();
    let mut pids: Vec<Option<usize>> = vec![None; s.points.len()];
    st.search(&mut order, &mut code, &mut pids, 0);
    let order = st.best_order;
    let mut label = vec![0usize; n + 1];
    for (k, &line) in order.iter().enumerate() {
        label[line] = k + 1;
    }
    let c = s.relabel(&label[1..]);
    let body: Vec<String> = c
        .points
        .iter()
        .map(|p| p.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","))
        .collect();
    format!("n={n};{}", body.join(";"))
}

struct Canon<'a> {
    s: &'a IncidenceSpec,
    slot_class: Vec<usize>,
    members: Vec<Vec<usize>>,
    best: Option<Vec<usize>>,
    best_order: Vec<usize>,
}

impl Canon<'_> {
    /// Row of the line placed at position `k`: for every earlier position,
    /// `(first-seen id of the shared point) + 1`, or 0 for a double point.
    fn row(&self, line: usize, order: &[usize], pids: &mut Vec<Option<usize>>, next: &mut usize) -> Vec<usize> {
        let mut r = Vec::with_capacity(order.len());
        for &other in order {
            match self.s.shared_point(line, other) {
                Some(p) => {
                    let id = match pids[p] {
                        Some(id) => id,
                        None => {
                            pids[p] = Some(*next);
                            *next += 1;
                            *next - 1
                        }
                    };
                    r.push(id + 1);
                }
                None => r.push(0),
            }
        }
        r
    }

    fn search(&mut self, order: &mut Vec<usize>, code: &mut Vec<usize>, pids: &mut Vec<Option<usize>>, next: usize) {
        let k = order.len();
        if k == self.s.n {
            if self.best.as_ref().is_none_or(|b| code.as_slice() < b.as_slice()) {
                self.best = Some(code.clone());
                self.best_order = order.clone();
            }
            return;
        }
        let class = self.slot_class[k];
        let cands: Vec<usize> = self.members[class].iter().copied().filter(|l| !order.contains(l)).collect();
        let mut tried: Vec<usize> = Vec::new();
        for &c in &cands {
            if tried.iter().any(|&t| self.twins(t, c)) {
                continue;
            }
            tried.push(c);
            let mut p2 = pids.clone();
            let mut nx = next;
            let row = self.row(c, order, &mut p2, &mut nx);
            let len = code.len();
            code.extend(row.iter().copied());
            // prune: partial code already worse than the best prefix
            let worse = self.best.as_ref().is_some_and(|b| code.as_slice() > &b[..code.len()]);
            if !worse {
                order.push(c);
                self.search(order, code, &mut p2, nx);
                order.pop();
            }
            code.truncate(len);
        }
    }

    /// Lines whose transposition is an automorphism of the incidence spec.
    fn twins(&self, a: usize, b: usize) -> bool {
        let swap = |i: usize| if i == a { b } else if i == b { a } else { i };
        let mut img: Vec<Vec<usize>> = self
            .s
            .points
            .iter()
            .map(|p| {
                let mut q: Vec<usize> = p.iter().map(|&i| swap(i)).collect();
                q.sort_unstable();
                q
            })
            .collect();
        img.sort();
        img == self.s.points
    }
}

// ---------- C<=3 classification ----------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum C3Class {
    NotC3,
    C3Simple,
    C3Nonsimple,
}

impl C3Class {
    pub fn as_str(&self) -> &'static str {
        match self {
            C3Class::NotC3 => "not_C3",
            C3Class::C3Simple => "C3_simple",
            C3Class::C3Nonsimple => "C3_nonsimple",
        }
    }
}

/// All multiple points lie on three lines `a, b, c` of the arrangement; the
/// arrangement is simple when for some such covering triple either the three
/// lines are concurrent (share a multiple point), or one of them carries at
/// most one multiple point besides its meets with the other two.
pub fn classify_c3(s: &IncidenceSpec) -> C3Class {
    if s.points.is_empty() {
        return C3Class::C3Simple;
    }
    let n = s.n;
    let mut covered_any = false;
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                let tri = [a, b, c];
                if !s.points.iter().all(|p| tri.iter().any(|l| p.contains(l))) {
                    continue;
                }
                covered_any = true;
                if s.points.iter().any(|p| tri.iter().all(|l| p.contains(l))) {
                    return C3Class::C3Simple;
                }
                for &l in &tri {
                    let others: Vec<usize> = tri.iter().copied().filter(|&x| x != l).collect();
                    let extra = s
                        .points
                        .iter()
                        .filter(|p| p.contains(&l) && !others.iter().any(|o| p.contains(o)))
                        .count();
                    if extra <= 1 {
                        return C3Class::C3Simple;
                    }
                }
            }
        }
    }
    if covered_any {
        C3Class::C3Nonsimple
    } else {
        C3Class::NotC3
    }
}

// ---------- sub-arrangements ----------

/// An injective map `pattern line k -> haystack line emb[k-1]` under which
/// the haystack restricted to the image lines equals the pattern.
pub fn find_subarrangement(haystack: &IncidenceSpec, pattern: &IncidenceSpec) -> Option<Vec<usize>> {
    if pattern.n > haystack.n {
        return None;
    }
    let pt = pair_table(pattern);
    let order = search_order(pattern, &(0..=pattern.n).map(|i| pattern.signature(i)).collect::<Vec<_>>(), &pt);
    let mut emb = vec![0usize; pattern.n + 1];
    let mut used = vec![false; haystack.n + 1];
    if sub_search(0, &order, haystack, pattern, &mut emb, &mut used) {
        Some(emb[1..].to_vec())
    } else {
        None
    }
}

fn sub_search(
    depth: usize,
    order: &[usize],
    h: &IncidenceSpec,
    p: &IncidenceSpec,
    emb: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if depth == order.len() {
        return h.restrict(&emb[1..]) == *p;
    }
    let i = order[depth];
    for j in 1..=h.n {
        if used[j] {
            continue;
        }
        emb[i] = j;
        used[j] = true;
        if sub_consistent(&order[..=depth], h, p, emb) && sub_search(depth + 1, order, h, p, emb, used) {
            return true;
        }
        used[j] = false;
        emb[i] = 0;
    }
    false
}

/// Necessary conditions on a partial embedding of the pattern lines `placed`.
fn sub_consistent(placed: &[usize], h: &IncidenceSpec, p: &IncidenceSpec, emb: &[usize]) -> bool {
    // a pattern point whose lines are all placed must map into one haystack point
    for pp in &p.points {
        if pp.iter().all(|x| placed.contains(x)) {
            let img: Vec<usize> = pp.iter().map(|&x| emb[x]).collect();
            if !h.points.iter().any(|hp| img.iter().all(|y| hp.contains(y))) {
                return false;
            }
        }
    }
    // three or more placed lines through one haystack point must be a pattern point subset
    for hp in &h.points {
        let pre: Vec<usize> = placed.iter().copied().filter(|&x| hp.contains(&emb[x])).collect();
        if pre.len() >= 3 && !p.points.iter().any(|pp| pre.iter().all(|x| pp.contains(x))) {
            return false;
        }
    }
    true
}
