use serde_json::Value;
use tql_cli::{run, EXIT_CHECK_FAILED, EXIT_INDETERMINATE, EXIT_OK, EXIT_USAGE};

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn tql(args: &[&str], stdin: &str) -> Out {
    let argv: Vec<String> = std::iter::once("tql")
        .chain(args.iter().copied())
        .map(String::from)
        .collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Out {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn json(o: &Out) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", o.stdout))
}

#[test]
fn from_moduli_pipes_into_check() {
    let fam = tql(&["from-moduli", "1", "2", "2"], "");
    assert_eq!(fam.code, EXIT_OK);
    let out = tql(&["check"], &fam.stdout);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["family_source"], "stdin");
    assert_eq!(v["result"]["holds"], true);
    assert!((v["result"]["lambda0"].as_f64().unwrap() - 2.0).abs() <= 1e-8);
}

#[test]
fn bare_family_json_on_stdin() {
    let out = tql(&["check"], r#"{"a":1,"b":0,"c":0,"d":0}"#);
    assert_eq!(out.code, EXIT_CHECK_FAILED);
    assert_eq!(json(&out)["status"], "check-failed");
}

#[test]
fn resolve_by_moduli_flags_gives_two() {
    let out = tql(&["resolve", "--a", "1", "--lambda0", "2", "--b", "2"], "");
    assert_eq!(out.code, EXIT_OK);
    let v = json(&out);
    let mut names: Vec<&str> = v["result"]["resolutions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["x0-ax1,x0,x0+x1", "x1,x0+x1,x0"]);
}

#[test]
fn random_smooth_section_has_28() {
    let out = tql(
        &["bitangents", "--plane", "random-smooth", "--seed", "7"],
        "",
    );
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let v = json(&out);
    assert_eq!(v["result"]["count"], 28);
    assert_eq!(v["result"]["real"], 4);
    assert_eq!(v["seed"], 7);
}

#[test]
fn reports_are_byte_identical() {
    let args = ["bitangents", "--plane", "random-nodal", "--seed", "3"];
    let (a, b) = (tql(&args, ""), tql(&args, ""));
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["result"]["through_node"], 6);
}

#[test]
fn hplot_csv_rows() {
    let out = tql(
        &[
            "hplot",
            "--h",
            "1",
            "--res",
            "x1,x0+x1,x0",
            "--samples",
            "1000",
        ],
        "",
    );
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let mut lines = out.stdout.lines();
    assert_eq!(lines.next(), Some("lambda,value,interval"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap())
        })
        .collect();
    assert!(rows.len() <= 1000 && rows.len() >= 990);
    assert!(rows.iter().all(|r| r.1.is_finite()));
    // h₁ with ℓ₁ = x₁ vanishes at −1
    assert!(rows
        .iter()
        .any(|&(l, v)| (l + 1.0).abs() < 1e-2 && v < 1e-6));
}

#[test]
fn hplot_h0_dips_once_on_the_middle_interval() {
    let dir = std::env::temp_dir().join(format!("tql-hplot-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("h0.csv");
    let report = dir.join("h0.json");
    let out = tql(
        &[
            "hplot",
            "--samples",
            "1000",
            "--csv",
            csv.to_str().unwrap(),
            "--out",
            report.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.is_empty());
    let rep: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let text = std::fs::read_to_string(&csv).unwrap();
    let vals: Vec<f64> = text
        .lines()
        .skip(1)
        .filter(|l| l.ends_with(",I2"))
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(
        rep["result"]["rows"].as_u64().unwrap() as usize,
        text.lines().count() - 1
    );
    // decrease then increase: the differences change sign once
    let signs: Vec<bool> = vals
        .windows(2)
        .filter(|w| w[0] != w[1])
        .map(|w| w[1] > w[0])
        .collect();
    assert_eq!(signs.windows(2).filter(|s| s[0] != s[1]).count(), 1);
    assert!(!signs[0] && *signs.last().unwrap());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["frobnicate"][..],
        &["resolve", "--res", "x0,x0,x1"],
        &["hplot", "--h", "2"],
        &["touching"],
        &["check", "--a", "1"],
        &["check", "--tol", "-1"],
        &["bitangents", "--plane", "sideways"],
        &["from-moduli", "1", "0.5", "2"],
    ] {
        let out = tql(args, "");
        assert_eq!(out.code, EXIT_USAGE, "{args:?}: {}", out.stderr);
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(tql(&["check"], "{not json").code, EXIT_USAGE);
}

#[test]
fn the_threshold_boundary_exits_three_with_a_report() {
    let out = tql(&["check", "--moduli", "1", "2", "0.6123724356420899"], "");
    assert_eq!(out.code, EXIT_INDETERMINATE);
    assert_eq!(json(&out)["status"], "indeterminate");
}

#[test]
fn touching_and_split() {
    let t = tql(&["touching", "--lambda", "2.5", "--theta", "0.3"], "");
    assert_eq!(t.code, EXIT_OK);
    assert_eq!(json(&t)["result"]["report"]["touching"], true);
    let s = tql(
        &[
            "split", "--kind", "orbit", "--lambda", "2.5", "--alpha", "-3",
        ],
        "",
    );
    assert_eq!(s.code, EXIT_OK, "{}", s.stderr);
    assert!(json(&s)["result"]["square_residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn moduli_reports_the_involution() {
    let out = tql(&["moduli"], r#"{"a":1,"lambda0":2,"b":2}"#);
    assert_eq!(out.code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["result"]["valid"], true);
    assert!((v["result"]["image"]["lambda0"].as_f64().unwrap() - 3.0).abs() <= 1e-12);
}

#[test]
fn verify_all_passes_on_the_reference_family() {
    let out = tql(&["verify-all"], "");
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    let v = json(&out);
    assert_eq!(v["result"]["passed"], v["result"]["total"]);
}

#[test]
fn verify_all_fails_when_condition_a_fails() {
    let out = tql(
        &["verify-all", "--a", "1", "--b", "1", "--c", "0", "--d", "1"],
        "",
    );
    assert_ne!(out.code, EXIT_OK);
}

#[test]
fn help_goes_to_stdout() {
    let out = tql(&["--help"], "");
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("verify-all"));
}
