use std::process::Command;

use fanic_cli::commands::{self, Input, Options};
use fanic_cli::{corpus, FanDocument};
use proptest::prelude::*;

fn fanic(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_fanic")).args(args).output().expect("binary runs")
}

fn corpus_path(name: &str) -> String {
    format!("{}/corpus/{name}.fan", env!("CARGO_MANIFEST_DIR"))
}

fn opts() -> Options {
    Options::default()
}

#[test]
fn corpus_files_are_canonical() {
    for (name, text) in corpus::CORPUS {
        let doc = FanDocument::parse(text).unwrap();
        assert_eq!(&doc.to_canonical(), text, "{name}");
        assert_eq!(doc.name, *name);
        doc.load().unwrap();
    }
}

#[test]
fn validate_examples() {
    let r = commands::validate(&Input::corpus("cube").unwrap(), &opts()).unwrap();
    assert_eq!(r.verdicts["valid"], "true");
    assert_eq!(r.verdicts["num_cones"], "27");
    assert!(r.all_pass());
    let r = commands::validate(&Input::corpus("pentagon_sqrt5").unwrap(), &opts()).unwrap();
    assert_eq!(r.verdicts["field"], "Q(sqrt 5)");
}

#[test]
fn overlapping_cones_name_the_pair() {
    let text = r#"name = "overlap"
ambient_dim = 2
field = "Q"
rays = [
    ["1", "0"],
    ["0", "1"],
    ["1", "1"],
]
cones = [
    [0, 1],
    [0, 2],
]
"#;
    let input = Input { label: "overlap".into(), text: text.into() };
    let err = format!("{:#}", commands::validate(&input, &opts()).unwrap_err());
    assert!(err.contains("[0, 1]") && err.contains("[0, 2]"), "{err}");
}

#[test]
fn hvector_examples() {
    let r = commands::hvector(&Input::corpus("cube").unwrap(), false, None, false, &opts()).unwrap();
    assert_eq!(r.polynomials["hvector"], vec![1, 5, 5, 1]);
    let r = commands::hvector(&Input::corpus("half_plane").unwrap(), true, None, false, &opts()).unwrap();
    assert_eq!(r.polynomials["relative_hvector"], vec![0, 1, 1]);
    let square = Input::corpus("square_cone").unwrap();
    for which in ["top", "[3, 2, 1, 0]", "9"] {
        let r = commands::hvector(&square, false, Some(which), false, &opts()).unwrap();
        assert_eq!(r.polynomials["local"], vec![1, 1], "{which}");
    }
    let r =
        commands::hvector(&Input::corpus("sheared_square_sqrt5").unwrap(), false, Some("top"), false, &opts()).unwrap();
    assert_eq!(r.verdicts["provenance"], "assumes V");
}

#[test]
fn non_quasi_convex_input_is_refused() {
    let prism = Input::corpus("prism_sides").unwrap();
    let err = format!("{:#}", commands::hvector(&prism, false, None, false, &opts()).unwrap_err());
    assert!(err.contains("witness o"), "{err}");
    let r = commands::hvector(&prism, false, None, true, &opts()).unwrap();
    assert_eq!(r.verdicts["quasi_convex"], "assumed");
    let r = commands::quasiconvex(&prism, &opts()).unwrap();
    assert_eq!(r.verdicts["quasi_convex"], "false");
    assert!(r.verdicts["witness"].starts_with("o "));
}

#[test]
fn sheaf_examples() {
    let r = commands::sheaf(&Input::corpus("square_cone").unwrap(), &opts()).unwrap();
    assert_eq!(r.verdicts["generators"], "{0:1, 2:1}");
    assert_eq!(r.graded_dims["reduced_sections"], vec![1, 1, 0, 0, 0, 0]);
    let r = commands::sheaf(&Input::corpus("cube_cone").unwrap(), &Options { max_degree: Some(8), ..opts() }).unwrap();
    assert_eq!(r.verdicts["generators"], "{0:1, 2:4}");
    assert_eq!(r.max_degree, Some(8));
    assert!(r.all_pass());
}

#[test]
fn verify_single_files() {
    for name in ["cube", "square_star", "sheared_square_sqrt5", "prism_sides"] {
        let r = commands::verify(&Input::corpus(name).unwrap(), &opts()).unwrap();
        assert!(r.all_pass(), "{name}: {:?}", r.failures());
    }
}

#[test]
fn wrong_expectations_fail_verification() {
    let text = corpus::text("p1xp1").unwrap().replace("\nhvector = [1, 2, 1]", "\nhvector = [1, 3, 1]");
    let r = commands::verify(&Input { label: "bad".into(), text }, &opts()).unwrap();
    let failed: Vec<&str> = r.failures().iter().map(|c| c.name.as_str()).collect();
    assert_eq!(failed, vec!["hvector"]);
}

#[test]
fn binary_reports_are_deterministic() {
    let path = corpus_path("square_cone");
    for args in [
        vec!["sheaf", path.as_str(), "--seed", "7"],
        vec!["verify", path.as_str(), "--format", "structured"],
        vec!["hvector", path.as_str(), "--relative"],
    ] {
        let a = fanic(&args);
        let b = fanic(&args);
        assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let json = fanic(&["sheaf", &path, "--format", "structured"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["command"], "sheaf");
    assert_eq!(v["verdicts"]["generators"], "{0:1, 2:1}");
    assert_eq!(v["input_sha256"].as_str().unwrap().len(), 64);
    assert!(v.get("timing_ms").is_none());
}

#[test]
fn binary_exit_codes() {
    assert_eq!(fanic(&["validate", &corpus_path("cube")]).status.code(), Some(0));
    assert_eq!(fanic(&["hvector", &corpus_path("prism_sides")]).status.code(), Some(2));
    assert_eq!(fanic(&["validate", "/nonexistent/fan.fan"]).status.code(), Some(2));
    // Corpus names resolve to the embedded copy.
    let out = fanic(&["hvector", "octahedron", "--timing"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("hvector: [1, 3, 3, 1]") && text.contains("time total"), "{text}");
    let dir = std::env::temp_dir().join(format!("fanic-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.fan");
    std::fs::write(&bad, corpus::text("p1").unwrap().replace("num_cones = 3", "num_cones = 4")).unwrap();
    assert_eq!(fanic(&["verify", bad.to_str().unwrap()]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

fn scalar() -> impl Strategy<Value = String> {
    prop_oneof![
        (-9i64..10).prop_map(|x| x.to_string()),
        (-9i64..10, 2i64..7).prop_map(|(a, b)| format!("{a}/{b}")),
        (-3i64..4, 1i64..4).prop_map(|(a, b)| format!("{a}+{b}*sqrt(5)")),
    ]
}

proptest! {
    #[test]
    fn canonical_text_round_trips(
        name in "[a-z][a-z0-9_ ]{0,8}",
        rays in proptest::collection::vec(proptest::collection::vec(scalar(), 3), 1..5),
        cones in proptest::collection::vec(proptest::collection::vec(0usize..5, 1..4), 0..4),
        hv in proptest::option::of(proptest::collection::vec(-5i64..6, 0..4)),
        fname in "[a-z]{1,5}( x)?",
    ) {
        let functions = [(fname, rays.clone())].into_iter().collect();
        let doc = FanDocument {
            name,
            ambient_dim: 3,
            field: "Q(sqrt 5)".into(),
            rays,
            cones,
            functions,
            expected: fanic_cli::Expected { hvector: hv, twin: Some("a \"quoted\" name".into()), ..Default::default() },
        };
        let text = doc.to_canonical();
        let back = FanDocument::parse(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.to_canonical(), text);
    }
}
