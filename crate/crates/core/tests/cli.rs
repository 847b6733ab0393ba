use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use twcx::bundle::{explicit_space, Bundle, SpaceDoc};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn twcx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twcx"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn failing_checks(report: &Value) -> Vec<String> {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["name"].as_str().unwrap().to_string())
        .collect()
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn point_bundle_validates() {
    let o = twcx(&["validate", "--bundle", data("point.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("twcx validate"));
    assert!(!stdout(&o).contains("[FAIL]"));
}

#[test]
fn corrupted_face_map_names_the_identity() {
    let dir = tempfile::tempdir().unwrap();
    let generated = twcx(&["generate", "--seed", "5"]);
    let mut doc = Bundle::parse(&stdout(&generated)).unwrap().to_doc();
    let (space, _) = &Bundle::from_doc(&doc).unwrap().spaces["V"];
    let mut explicit = explicit_space(space);
    if let SpaceDoc::Explicit { faces, .. } = &mut explicit {
        // ∂_0 of the first edge now points at a different vertex.
        let v = &mut faces[1][0][0];
        *v = (*v + 1) % space.level_size(0);
    }
    doc.spaces.insert("V".into(), explicit);
    let path = write(&dir, "bad.json", &serde_json::to_string(&doc).unwrap());
    let o = twcx(&["--format", "json", "validate", "--bundle", &path]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    let report = json(&o);
    let bad = failing_checks(&report);
    assert!(bad.contains(&"space V: simplicial identities".to_string()), "{bad:?}");
    let check = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "space V: simplicial identities")
        .unwrap();
    let first = check["locations"][0].as_str().unwrap();
    let identities = [
        "∂_i∂_j = ∂_{j-1}∂_i",
        "∂_i s_j = s_{j-1}∂_i",
        "∂_i s_j = id",
        "∂_i s_j = s_j∂_{i-1}",
    ];
    assert!(identities.iter().any(|i| first.starts_with(i)), "{first}");
    assert!(first.contains(" at level "), "{first}");
}

#[test]
fn non_maurer_cartan_element_is_located() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data("point.json")).unwrap();
    // Doubling a^{1,0} breaks δa + a·a = 0 at level 2.
    let bad = text.replacen(
        r#"{"p": 1, "q": 0, "simplex": "A,A", "degree": 0, "rows": 1, "cols": 1, "entries": ["1"]}"#,
        r#"{"p": 1, "q": 0, "simplex": "A,A", "degree": 0, "rows": 1, "cols": 1, "entries": ["2"]}"#,
        1,
    );
    assert_ne!(bad, text);
    let path = write(&dir, "bad.json", &bad);
    let o = twcx(&["--format", "json", "validate", "--bundle", &path]);
    assert_eq!(o.status.code(), Some(1));
    let report = json(&o);
    let check = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "twisted E: Maurer–Cartan residual")
        .unwrap();
    assert_eq!(check["status"], "fail");
    let at = check["locations"][0].as_str().unwrap();
    assert!(at.starts_with("bidegree (") && at.contains("simplex"), "{at}");
}

#[test]
fn exit_codes_separate_structure_from_mathematics() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = write(
        &dir,
        "g.json",
        "{\n  \"format\": \"twcx-bundle/1\",\n  \"ring\": oops\n}",
    );
    let o = twcx(&["validate", "--bundle", &garbage]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let o = twcx(&[
        "validate",
        "--bundle",
        &dir.path().join("missing.json").to_string_lossy(),
    ]);
    assert_eq!(o.status.code(), Some(2));

    let unresolved = std::fs::read_to_string(data("point.json"))
        .unwrap()
        .replace(r#""g": "id""#, r#""g": "nope""#);
    let o = twcx(&["validate", "--bundle", &write(&dir, "u.json", &unresolved)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nope"));

    let o = twcx(&[
        "ho-invert",
        "--bundle",
        data("point.json").to_str().unwrap(),
        "--morphism",
        "w",
    ]);
    assert_eq!(o.status.code(), Some(1), "w is not closed");

    let o = twcx(&["generate", "--sets", "9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn identity_morphism_has_the_trivial_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.json");
    let o = twcx(&[
        "ho-invert",
        "--bundle",
        data("point.json").to_str().unwrap(),
        "--morphism",
        "idF",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let w: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(w["eta"], Value::Array(vec![]));
    assert_eq!(w["omega"], Value::Array(vec![]));
    let psi = w["psi"].as_array().unwrap();
    assert_eq!(psi.len(), 1);
    assert_eq!((psi[0]["p"].as_u64(), psi[0]["q"].as_i64()), (Some(0), Some(0)));
    assert_eq!(psi[0]["entries"][0], "1");
}

#[test]
fn generated_bundle_passes_every_command() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("b.json");
    let b = bundle.to_str().unwrap();
    let o = twcx(&["--format", "json", "generate", "--seed", "0", "--out", b]);
    assert_eq!(o.status.code(), Some(0));
    let notes = json(&o)["notes"].to_string();
    assert!(notes.contains("weq") && notes.contains("nweq"));
    assert_eq!(twcx(&["validate", "--bundle", b]).status.code(), Some(0));
    let comps = dir.path().join("phi.json");
    let o = twcx(&["phi", "--bundle", b, "--out", comps.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let c: Value = serde_json::from_str(&std::fs::read_to_string(comps).unwrap()).unwrap();
    assert!(c["phi0"]["E1"].as_array().is_some_and(|a| !a.is_empty()));
    assert!(c["phi1"].as_object().is_some_and(|m| !m.is_empty()));
    assert_eq!(
        twcx(&["ho-invert", "--bundle", b, "--morphism", "weq"]).status.code(),
        Some(0)
    );
    let o = twcx(&["--format", "json", "ho-invert", "--bundle", b, "--morphism", "nweq"]);
    assert_eq!(o.status.code(), Some(0), "refusing a non-equivalence is a pass");
    let r = json(&o);
    let inv = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"].as_str().unwrap().contains("invertible"))
        .unwrap();
    assert_eq!(inv["holds"], false);
}

#[test]
fn generate_is_canonical_and_round_trips() {
    let a = stdout(&twcx(&["generate", "--seed", "11", "--ring", "101"]));
    assert_eq!(a, stdout(&twcx(&["generate", "--seed", "11", "--ring", "101"])));
    assert_ne!(a, stdout(&twcx(&["generate", "--seed", "12", "--ring", "101"])));
    let b = Bundle::parse(&a).unwrap();
    assert_eq!(b.to_json(), a);
    let point = Bundle::read(&data("point.json")).unwrap().to_json();
    assert_eq!(Bundle::parse(&point).unwrap().to_json(), point);
}

#[test]
fn timing_only_appears_on_request() {
    let p = data("point.json");
    let plain = json(&twcx(&[
        "--format",
        "json",
        "validate",
        "--bundle",
        p.to_str().unwrap(),
    ]));
    assert!(plain.get("timing_ms").is_none());
    let timed = json(&twcx(&[
        "--format",
        "json",
        "--timing",
        "validate",
        "--bundle",
        p.to_str().unwrap(),
    ]));
    assert!(timed["timing_ms"].is_u64());
}

#[test]
fn selftest_passes() {
    let o = twcx(&["selftest", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("mutation is detected"));
}
