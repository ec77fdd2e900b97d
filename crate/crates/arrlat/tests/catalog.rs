use arrlat::catalog::*;
use arrlat::exactfield::QPoly;
use arrlat::geometry::compute_lattice;

#[test]
fn catalog_is_populated() {
    let ids = catalog_list();
    assert!(ids.len() >= 24);
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    sorted.dedup();
    assert_eq!(sorted.len(), ids.len());
    assert!(ids.contains(&"eq1_plus") && ids.contains(&"eq7_root3"));
}

#[test]
fn heptagonal_entry_has_one_quadruple_and_ten_triples() {
    let e = catalog_get("eq7_root1").unwrap();
    let lat = compute_lattice(&e.file.arrangement);
    assert_eq!(lat.n_r(4), 1);
    assert_eq!(lat.n_r(3), 10);
    assert_eq!(e.expected_census, [(2, 9), (3, 10), (4, 1)].into_iter().collect());
}

#[test]
fn golden_entry_field() {
    let e = catalog_get("eq1_plus").unwrap();
    let k = e.file.field.as_ref().unwrap();
    assert_eq!(k.minpoly, QPoly::parse("t^2-t-1", "t").unwrap());
    assert!(e.file.is_real());
}

#[test]
fn wrong_census_is_reported_with_a_diff() {
    let mut e = catalog_get("eq1_plus").unwrap();
    *e.expected_census.get_mut(&3).unwrap() = 9;
    let r = verify_entry(&e);
    assert!(!r.passed());
    let c = r.checks.iter().find(|c| c.name == "census").unwrap();
    assert!(!c.pass);
    assert!(c.detail.contains("3:9") && c.detail.contains("3:8"), "{}", c.detail);
}

#[test]
fn conjugate_pairs_share_their_incidences() {
    let ids = catalog_list();
    let mut pairs = 0;
    for id in &ids {
        if let Some(base) = id.strip_suffix("_plus") {
            let minus = format!("{base}_minus");
            if ids.contains(&minus.as_str()) {
                let a = catalog_get(id).unwrap();
                let b = catalog_get(&minus).unwrap();
                assert_eq!(a.expected_spec, b.expected_spec, "{id}");
                assert_eq!(a.expected_census, b.expected_census, "{id}");
                pairs += 1;
            }
        }
    }
    assert!(pairs >= 5);
}

#[test]
fn every_entry_verifies() {
    let reports = catalog_verify("all").unwrap();
    assert_eq!(reports.len(), catalog_list().len());
    for r in &reports {
        let bad: Vec<_> = r.checks.iter().filter(|c| !c.pass).map(|c| format!("{}: {}", c.name, c.detail)).collect();
        assert!(bad.is_empty(), "{}: {bad:?}", r.id);
    }
    let one = catalog_verify("star_plus").unwrap();
    assert_eq!(one.len(), 1);
    assert!(one[0].passed());
}

#[test]
fn unknown_ids_are_rejected() {
    assert!(matches!(catalog_get("eq99"), Err(CatalogError::NotFound(_))));
    assert!(matches!(catalog_verify("eq99"), Err(CatalogError::NotFound(_))));
}

#[test]
fn cycle_notation() {
    let p = permutation_from_cycles("(1,2,3)(5,6)", 6).unwrap();
    assert_eq!(p, vec![2, 3, 1, 4, 6, 5]);
    assert!(permutation_from_cycles("(1,2)(2,3)", 4).is_none());
    assert!(permutation_from_cycles("(1,7)", 6).is_none());
}
