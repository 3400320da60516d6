use serde_json::Value;

use super::run;

fn spec(name: &str) -> String {
    format!("{}/specs/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn freeprod(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("freeprod").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut args = args.to_vec();
    args.push("--json");
    let (code, out, err) = freeprod(&args);
    let v: Value = serde_json::from_str(&out).unwrap_or_else(|e| panic!("bad json ({e}): {out} {err}"));
    for key in ["verdict", "violations", "witnesses", "timings"] {
        assert!(v.get(key).is_some(), "missing {key} in {v}");
    }
    assert!(v["violations"].is_array() && v["witnesses"].is_array() && v["timings"].is_object());
    (code, v)
}

#[test]
fn example1_check() {
    let (code, out, _) = freeprod(&["check", "--group", &spec("example1.grp"), "--subgroup", &spec("example1.sub")]);
    assert_eq!(code, 1);
    assert!(out.contains("f=a g=b a k1=1 k2=1"), "{out}");
    let (code, v) = json(&["check", "--group", &spec("example1.grp"), "--subgroup", &spec("example1.sub")]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "fails necessary conditions");
    assert_eq!(v["witnesses"][0]["f"], "a");
    assert_eq!(v["witnesses"][0]["g"], "b a");
}

#[test]
fn example2_check() {
    let (code, v) = json(&["check", "--group", &spec("example2.grp"), "--subgroup", &spec("example2.sub")]);
    assert_eq!(code, 1);
    let w = &v["witnesses"][0];
    assert_eq!((w["f"].as_str(), w["g"].as_str()), (Some("a b"), Some("1")));
    assert_eq!((w["k1"].as_u64(), w["k2"].as_u64()), (Some(3), Some(2)));
}

#[test]
fn klein_check_passes() {
    let (code, v) = json(&["check", "--group", &spec("theorem2.grp"), "--subgroup", &spec("theorem2.sub")]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "passes necessary conditions (inconclusive)");
}

#[test]
fn solve_commutator() {
    let (code, out, _) =
        freeprod(&["solve", "--group", &spec("p23.grp"), "--eq", "[x1,x2] = 1", "--ball", "a;b", "--depth", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "x1=1, x2=1");
    let (code, v) = json(&["solve", "--group", &spec("p23.grp"), "--eq", "x1^2 = a", "--ball", "a;b", "--depth", "3"]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "no solution in set");
}

#[test]
fn solve_with_subgroup_file() {
    let (code, out, _) = freeprod(&[
        "solve",
        "--group",
        &spec("example1.grp"),
        "--eq",
        "x1 x2 = a c b c",
        "--subgroup",
        &spec("example1.sub"),
        "--depth",
        "2",
    ]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.trim(), "x1=1, x2=a c b c");
}

#[test]
fn element_commands() {
    let g = spec("p23.grp");
    let (code, out, _) = freeprod(&["eval", "--group", &g, "--word", "[x1, x2^x3]", "--set", "x1=a; x2=b; x3=1"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("a b a b^2"));
    let (_, out, _) = freeprod(&["order", "--group", &g, "--word", "a b"]);
    assert_eq!(out.trim(), "order infinite");
    let (_, out, _) = freeprod(&["reduce", "--group", &g, "--word", "b a b^2"]);
    assert_eq!(out, "conjugator b\ncore a\n");
    let (code, _, err) = freeprod(&["eval", "--group", &g, "--word", "x1 x2", "--set", "x1=a"]);
    assert_eq!(code, 2);
    assert!(err.contains("x2"), "{err}");
}

#[test]
fn axis_command() {
    let g = spec("p23.grp");
    let (code, out, _) = freeprod(&["axis", "--group", &g, "--word", "a b", "--other", "b a", "--window", "2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("hyperbolic, translation length 4 edges"), "{out}");
    assert!(out.contains("E:1 C0:1 E:a C1:a E:a b"));
    assert!(out.trim_end().ends_with("axes overlap: 4 edges"));
    let (_, out, _) = freeprod(&["axis", "--group", &g, "--word", "b a b^2"]);
    assert_eq!(out.trim(), "elliptic, fixes C0:b");
}

#[test]
fn theorem2_reports_the_sign_discrepancy() {
    let (code, out, _) = freeprod(&["verify-theorem2", "--range", "2"]);
    assert!(out.starts_with("0 matches / "), "{out}");
    assert!(out.contains("lifted solution gives a c d c a c d c (target a c d c a c d c, norm 8): equal"));
    // the exit code follows the report verdict
    let (jcode, v) = json(&["verify-theorem2", "--range", "2"]);
    assert_eq!(code, jcode);
    assert_eq!(code == 0, v["verdict"] == "pass");
}

#[test]
fn verification_commands() {
    let (code, out, _) = freeprod(&["verify-lemma4", "--trials", "20", "--seed", "3"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = freeprod(&["verify-lemma4", "--word", "a b", "--group", &spec("p23.grp")]);
    assert_eq!(code, 0);
    assert!(out.contains("p = 5, k = [1, 2]"), "{out}");
    let (code, out, _) = freeprod(&["verify-lemma5", "--depth", "3"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("N = 13") && out.contains("rhs = a c b^2 c (norm 4)"), "{out}");
    let (code, out, _) = freeprod(&["verify-lemma7", "--trials", "50", "--axis-trials", "10"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(freeprod(&["frobnicate"]).0, 2);
    assert_eq!(freeprod(&["check", "--group", "/nonexistent", "--subgroup", "/nonexistent"]).0, 2);
    assert_eq!(freeprod(&["order", "--group", &spec("p23.grp"), "--word", "a q"]).0, 2);
    assert_eq!(freeprod(&["order", "--group", &spec("p23.grp"), "--word", "a ("]).0, 2);
    assert_eq!(freeprod(&["verify-theorem2", "--range", "0"]).0, 2);
    let (code, out, _) = freeprod(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify-theorem2"));
}
