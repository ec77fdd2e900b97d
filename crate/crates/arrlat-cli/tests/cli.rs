use arrlat::exactfield::QPoly;
use arrlat::realization::mobius_equivalent;
use serde_json::Value;
use std::path::PathBuf;
use std::process::Command;

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_arrlat")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn path(rel: &str) -> String {
    data(rel).to_str().unwrap().to_owned()
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn census_command() {
    let (code, out, _) = run(&["census", &path("catalog/eq6_root1.arr")]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["census"]["4"], 1);
    assert_eq!(v["non_reductive"], true);
    assert_eq!(v["counting_formula"], true);

    let (code, out, _) = run(&["census", &path("generic10.arr")]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["census"], serde_json::json!({"2": 45}));
    assert_eq!(v["hirzebruch"], "holds");
    assert_eq!(v["non_reductive"], false);
}

#[test]
fn census_errors() {
    let (code, _, err) = run(&["census", &path("cli/duplicate_line.arr")]);
    assert_eq!(code, 3, "{err}");
    let (code, _, err) = run(&["census", &path("cli/bad_token.arr")]);
    assert_eq!(code, 2);
    assert!(err.contains("line 4"), "{err}");
    let (code, _, _) = run(&["census", &path("cli/does_not_exist.arr")]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["census"]);
    assert_eq!(code, 2);
}

#[test]
fn isom_command() {
    let (code, out, _) = run(&["isom", &path("isomorphism/noncollinear_a.spec"), &path("isomorphism/noncollinear_b.spec")]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["isomorphic"], true);
    assert!(v["cycles"].is_string());

    // a spec against an arrangement file of the same lattice
    let (code, _, _) = run(&["isom", &path("catalog/eq1_minus.arr"), &path("catalog/eq1_plus.spec")]);
    assert_eq!(code, 0);

    let (code, out, _) = run(&["isom", &path("catalog/eq1_plus.spec"), &path("catalog/eq3_plus.spec")]);
    assert_eq!(code, 1);
    let v = json(&out);
    assert_eq!(v["isomorphic"], false);
    assert!(v["permutation"].is_null());
}

#[test]
fn realize_command() {
    let (code, out, _) = run(&["realize", &path("catalog/eq7_root1.spec")]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["status"], "zero_dimensional");
    assert_eq!(v["m_count"], 3);
    assert_eq!(v["mc_count"], 3);
    let polys = v["defining_polys"].as_array().unwrap();
    assert_eq!(polys.len(), 1);
    let var = polys[0]["variable"].as_str().unwrap();
    let p = QPoly::parse(polys[0]["poly"].as_str().unwrap(), var).unwrap();
    assert!(mobius_equivalent(&p.monic(), &QPoly::parse("t^3-t^2-2*t+1", "t").unwrap(), 3));

    let (code, out, _) = run(&["realize", &path("specs/nonrealizable_nine.spec")]);
    assert_eq!(code, 4);
    assert_eq!(json(&out)["status"], "empty");

    let (code, out, _) = run(&["realize", &path("specs/six_lines_one_triple.spec")]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["status"], "positive_dimensional");
    assert!(v["dimension"].as_u64().unwrap() >= 1);

    assert_eq!(run(&["realize", &path("specs/eight_generic.spec")]).0, 6);
    assert_eq!(run(&["realize", &path("specs/near_pencil.spec")]).0, 5);
    assert_eq!(run(&["realize", &path("catalog/eq1_plus.spec"), "--frame", "1,2"]).0, 2);
}

#[test]
fn realize_with_frame_and_output_file() {
    let dir = std::env::temp_dir().join(format!("arrlat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.json");
    let (code, stdout, _) = run(&["realize", &path("catalog/eq6_root1.spec"), "--frame", "2,1,5,6", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let v = json(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(v["m_count"], 3);
    assert_eq!(v["mc_count"], 2);
    assert!(v.get("generated_at_unix").is_none());
    std::fs::remove_dir_all(&dir).unwrap();

    let (_, stamped, _) = run(&["realize", &path("catalog/eq6_root1.spec"), "--timestamps"]);
    assert!(json(&stamped)["generated_at_unix"].is_string());
}

#[test]
fn commands_are_deterministic() {
    for args in [
        vec!["realize".to_string(), path("catalog/eq5_root1.spec")],
        vec!["census".to_string(), path("catalog/star_plus.arr")],
        vec!["render".to_string(), path("catalog/eq4_plus.arr")],
        vec!["catalog".to_string(), "verify".to_string(), "eq2_real".to_string(), "--json".to_string()],
    ] {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(run(&a), run(&a), "{args:?}");
    }
}

/// `(x1, y1, x2, y2)` of every `<line>` element, keyed by its id.
fn svg_segments(svg: &str) -> Vec<(String, [f64; 4])> {
    let attr = |el: &str, name: &str| -> String {
        let key = format!(" {name}=\"");
        let i = el.find(&key).unwrap() + key.len();
        el[i..i + el[i..].find('"').unwrap()].to_owned()
    };
    svg.lines()
        .filter(|l| l.starts_with("<line "))
        .map(|l| {
            let f = |n: &str| attr(l, n).parse::<f64>().unwrap();
            (attr(l, "id"), [f("x1"), f("y1"), f("x2"), f("y2")])
        })
        .collect()
}

#[test]
fn render_command() {
    let (code, svg, _) = run(&["render", &path("cli/axis_parallel4.arr")]);
    assert_eq!(code, 0);
    assert!(svg.starts_with("<?xml") && svg.contains("version=\"1.1\""));
    assert_eq!(svg_segments(&svg).len(), 4);
    assert_eq!(svg.matches("<circle class=\"m2\"").count(), 4);
    for k in 1..=4 {
        assert!(svg.contains(&format!(">L{k}</text>")));
    }

    let (code, _, err) = run(&["render", &path("catalog/star_plus.arr")]);
    assert_eq!(code, 7, "{err}");

    let (code, svg, _) = run(&["render", &path("cli/axis_parallel4.arr"), "--window", "-2,-2,0.5,0.5"]);
    assert_eq!(code, 0);
    assert_eq!(svg.matches("<circle").count(), 1);
    assert_eq!(run(&["render", &path("cli/axis_parallel4.arr"), "--window", "1,1,0,0"]).0, 2);
}

#[test]
fn rendered_golden_lines_have_golden_slopes() {
    let (code, svg, _) = run(&["render", &path("catalog/eq3_plus.arr")]);
    assert_eq!(code, 0);
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let segs = svg_segments(&svg);
    assert_eq!(segs.len(), 9);
    let slope = |id: &str| {
        let [x1, y1, x2, y2] = segs.iter().find(|(k, _)| k == id).unwrap().1;
        (y2 - y1) / (x2 - x1)
    };
    // L7 and L8 are parallel with slope -(1 + t), t = (sqrt 5 - 1) / 2
    assert!((slope("L7") + phi).abs() < 1e-9);
    assert!((slope("L8") + phi).abs() < 1e-9);
    assert!((slope("L9") - 1.0).abs() < 1e-9);
}

#[test]
fn catalog_commands() {
    let (code, out, _) = run(&["catalog", "list"]);
    assert_eq!(code, 0);
    assert!(out.lines().count() >= 24);
    assert!(out.lines().any(|l| l.starts_with("eq7_root1\t")));

    let (code, out, _) = run(&["catalog", "verify", "all"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().all(|l| !l.starts_with("FAIL")));

    let (code, out, _) = run(&["catalog", "verify", "eq1_plus", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["passed"], true);

    assert_eq!(run(&["catalog", "verify", "nope"]).0, 2);
}
