use arrlat::catalog::{catalog_entries, catalog_get};
use arrlat::exactfield::{int, rat, AlgNum, FieldValue, NumberField, QPoly, Rational};
use arrlat::geometry::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use std::collections::BTreeMap;

mod oracles;

fn q(a: i64, b: i64, c: i64) -> RationalLine {
    ProjLine::from_ints(a, b, c)
}

fn arr(v: &[(i64, i64, i64)]) -> RationalArrangement {
    Arrangement::new(None, v.iter().map(|&(a, b, c)| q(a, b, c)).collect()).unwrap()
}

fn census(v: &[(usize, usize)]) -> BTreeMap<usize, usize> {
    v.iter().copied().collect()
}

/// Ten lines with no three concurrent.
fn generic10() -> RationalArrangement {
    let lines = (1..=10).map(|k: i64| q(k, k * k, k * k * k + 1)).collect();
    Arrangement::new(None, lines).unwrap()
}

#[test]
fn meet_examples() {
    let p = meet(&q(1, 0, 0), &q(0, 1, 0)).unwrap();
    assert_eq!(p, ProjPoint::new(int(0), int(0), int(1)).unwrap());
    let p = meet(&q(0, 1, -1), &q(1, 0, -1)).unwrap();
    assert_eq!(p, ProjPoint::new(int(1), int(1), int(1)).unwrap());
    assert!(meet(&q(1, 2, 3), &q(2, 4, 6)).is_err());

    // y = -x + (t+1) z meets x = y at ((t+1)/2 : (t+1)/2 : 1)
    let k = NumberField::new("t", &QPoly::from_ints(&[-1, -1, 1])).unwrap();
    let t = FieldValue::Alg(AlgNum::generator(&k));
    let one = FieldValue::Rat(int(1));
    let l1 = ProjLine::new(one.clone(), one.clone(), -(t.clone() + one.clone())).unwrap();
    let l2 = ProjLine::new(one.clone(), -one.clone(), FieldValue::Rat(int(0))).unwrap();
    let half = (t + one.clone()) / FieldValue::Rat(int(2));
    let p = meet(&l1, &l2).unwrap();
    assert_eq!(p, ProjPoint::new(half.clone(), half, one).unwrap());
    assert!(l1.incident(&p) && l2.incident(&p));
}

#[test]
fn lattice_examples() {
    let g = compute_lattice(&arr(&[(1, 0, 0), (0, 1, 0), (1, 1, 1)]));
    assert_eq!(g.census, census(&[(2, 3)]));
    let c = compute_lattice(&arr(&[(1, 0, 0), (0, 1, 0), (1, 1, 0)]));
    assert_eq!(c.census, census(&[(3, 1)]));
    assert_eq!(c.multiple_point_sets(), vec![vec![1, 2, 3]]);

    let e = catalog_get("eq1_plus").unwrap();
    let lat = compute_lattice(&e.file.arrangement);
    assert_eq!(lat.n_r(4), 2);
    assert!(lat.census.keys().all(|&r| r <= 4));
    assert_eq!(lat.census, census(&[(2, 9), (3, 8), (4, 2)]));
}

#[test]
fn counting_formula_examples() {
    let g = compute_lattice(&generic10());
    assert_eq!(g.census, census(&[(2, 45)]));
    assert!(check_counting_formula(&g, 10));

    let e = catalog_get("eq1_plus").unwrap();
    let mut lat = compute_lattice(&e.file.arrangement);
    assert_eq!(lat.n_r(2) + 3 * lat.n_r(3) + 12, 45);
    assert!(check_counting_formula(&lat, 10));
    *lat.census.get_mut(&2).unwrap() -= 1;
    assert!(!check_counting_formula(&lat, 10));
}

#[test]
fn hirzebruch_examples() {
    assert_eq!(check_hirzebruch(&compute_lattice(&generic10()), 10), Hirzebruch::Holds);
    let c = compute_lattice(&arr(&[(1, 0, 0), (0, 1, 0), (1, 1, 0)]));
    assert_eq!(check_hirzebruch(&c, 3), Hirzebruch::PreconditionFailed);
    // a pencil of 7 lines plus 3 more: n_7 = 1 is outside the excluded
    // range, and 18 + 3/4 * 2 >= 10 + 5
    let mut lines: Vec<(i64, i64, i64)> = (0..7).map(|k| (1, k, 0)).collect();
    lines.extend([(0, 0, 1), (1, 1, 1), (2, -1, 3)]);
    let lat = compute_lattice(&arr(&lines));
    assert_eq!(lat.census, census(&[(2, 18), (3, 2), (7, 1)]));
    assert_eq!(check_hirzebruch(&lat, 10), Hirzebruch::Holds);
    for e in catalog_entries() {
        let lat = compute_lattice(&e.file.arrangement);
        assert_eq!(check_hirzebruch(&lat, 10), Hirzebruch::Holds, "{}", e.id);
    }
}

#[test]
fn non_reductive_examples() {
    assert!(!is_non_reductive(&compute_lattice(&generic10()), 10));
    let mut survivors = Vec::new();
    for e in catalog_entries() {
        let a = &e.file.arrangement;
        assert!(is_non_reductive(&compute_lattice(a), 10), "{}", e.id);
        if is_non_reductive(&compute_lattice(&a.delete_line(1)), 9) {
            survivors.push(e.id);
        }
    }
    // deleting L1 usually breaks the property; only the conjugate pair whose
    // triple points all sit on three concurrent lines keeps it
    assert_eq!(survivors, vec!["star_plus", "star_minus"]);
}

#[test]
fn per_line_queries() {
    let g = compute_lattice(&arr(&[(1, 0, 0), (0, 1, 0), (1, 1, 1), (1, -1, 2)]));
    assert_eq!(multiplicity_census(&g), census(&[(2, 6)]));

    let star = catalog_get("star_plus").unwrap();
    let lat = compute_lattice(&star.file.arrangement);
    let quads: Vec<_> = lat.points.iter().filter(|p| p.multiplicity() == 4).collect();
    assert_eq!(quads.len(), 1);
    assert_eq!(quads[0].lines, vec![1, 2, 3, 4]);

    let e7 = catalog_get("eq7_root1").unwrap();
    let lat = compute_lattice(&e7.file.arrangement);
    for i in 1..=10 {
        assert!(multiple_points_on_line(&lat, i).unwrap().len() >= 3);
    }
    assert!(multiple_points_on_line(&lat, 0).is_err());
    assert!(multiple_points_on_line(&lat, 11).is_err());
}

#[test]
fn construction_errors() {
    assert!(ProjLine::new(int(0), int(0), int(0)).is_err());
    let dup = Arrangement::new(None, vec![q(1, 2, 3), q(0, 1, 0), q(-2, -4, -6)]);
    assert_eq!(dup.unwrap_err(), GeometryError::CoincidentLines(1, 3));
    let many = (0..17).map(|k| q(1, k, k * k)).collect();
    assert!(matches!(Arrangement::new(None, many), Err(GeometryError::TooManyLines(17))));
    let k = NumberField::new("t", &QPoly::from_ints(&[-2, 0, 1])).unwrap();
    let t = FieldValue::Alg(AlgNum::generator(&k));
    let l = ProjLine::new(t, FieldValue::Rat(int(1)), FieldValue::Rat(int(0))).unwrap();
    assert_eq!(Arrangement::new(None, vec![l]).unwrap_err(), GeometryError::FieldMismatch);
}

#[test]
fn counting_formula_on_random_rational_arrangements() {
    let mut rng = StdRng::seed_from_u64(2024);
    let mut seen_multiple = 0;
    for i in 0..1000 {
        let k = 4 + i % 7;
        let a = oracles::random_rational_arrangement(&mut rng, k);
        let lat = compute_lattice(&a);
        assert!(check_counting_formula(&lat, k));
        if lat.census.keys().any(|&r| r >= 3) {
            seen_multiple += 1;
        }
    }
    // small coefficients: most samples have real coincidences
    assert!(seen_multiple > 500);
}

#[test]
fn exact_grouping_matches_interval_oracle() {
    for e in catalog_entries() {
        let g = oracles::interval_grouping(&e.file);
        assert_eq!(g.ambiguous, 0, "{}", e.id);
        assert_eq!(g.multiple_points, oracles::exact_multiple_points(&e.file), "{}", e.id);
    }
}

fn small_line() -> impl Strategy<Value = (i64, i64, i64)> {
    (-4i64..=4, -4i64..=4, -4i64..=4).prop_filter("nonzero", |&(a, b, c)| (a, b, c) != (0, 0, 0))
}

fn distinct_lines(k: usize) -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    proptest::collection::vec(small_line(), k).prop_filter("distinct", |v| {
        let ls: Vec<_> = v.iter().map(|&(a, b, c)| q(a, b, c)).collect();
        (0..ls.len()).all(|i| (i + 1..ls.len()).all(|j| ls[i] != ls[j]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lattice_is_projectively_invariant(v in distinct_lines(7), s in proptest::collection::vec((1i64..9, 1i64..9, any::<bool>()), 7)) {
        let a = arr(&v);
        let scaled = Arrangement::new(None, a.lines.iter().zip(&s).map(|(l, &(n, d, neg))| {
            let r: Rational = rat(if neg { -n } else { n }, d);
            l.scaled(&r)
        }).collect()).unwrap();
        let x = compute_lattice(&a);
        let y = compute_lattice(&scaled);
        prop_assert_eq!(&x.census, &y.census);
        prop_assert_eq!(x.multiple_point_sets(), y.multiple_point_sets());
        for (p, r) in x.points.iter().zip(&y.points) {
            prop_assert_eq!(&p.lines, &r.lines);
            prop_assert_eq!(&p.point, &r.point);
        }
    }

    #[test]
    fn lattice_is_permutation_equivariant(v in distinct_lines(8), perm in Just((1..=8).collect::<Vec<usize>>()).prop_shuffle()) {
        let a = arr(&v);
        // new line k is old line perm[k-1]; old line j becomes new inv[j]
        let b = a.permuted(&perm);
        let mut inv = vec![0; 9];
        for (k, &p) in perm.iter().enumerate() { inv[p] = k + 1; }
        let mut mapped: Vec<Vec<usize>> = compute_lattice(&a).points.iter().map(|p| {
            let mut s: Vec<usize> = p.lines.iter().map(|&j| inv[j]).collect();
            s.sort_unstable();
            s
        }).collect();
        mapped.sort();
        let got: Vec<Vec<usize>> = compute_lattice(&b).points.iter().map(|p| p.lines.clone()).collect();
        prop_assert_eq!(mapped, got);
    }

    #[test]
    fn meet_and_join_round_trip(v in distinct_lines(4)) {
        let ls: Vec<_> = v.iter().map(|&(a, b, c)| q(a, b, c)).collect();
        let p = meet(&ls[0], &ls[1]).unwrap();
        prop_assert!(ls[0].incident(&p) && ls[1].incident(&p));
        let r = meet(&ls[2], &ls[3]).unwrap();
        if p != r {
            let l = join(&p, &r).unwrap();
            prop_assert!(l.incident(&p) && l.incident(&r));
        }
    }

    #[test]
    fn every_pair_in_exactly_one_point(v in distinct_lines(9)) {
        let lat = compute_lattice(&arr(&v));
        for i in 1..=9 {
            for j in i + 1..=9 {
                let c = lat.points.iter().filter(|p| p.lines.contains(&i) && p.lines.contains(&j)).count();
                prop_assert_eq!(c, 1);
            }
        }
        prop_assert!(lat.points.iter().all(|p| p.multiplicity() >= 2));
    }
}
