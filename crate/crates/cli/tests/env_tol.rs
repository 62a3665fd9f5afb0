// Own test binary: it sets a process-wide environment variable.

use serde_json::Value;

fn general_tol(args: &[&str]) -> f64 {
    let argv: Vec<String> = std::iter::once("tql")
        .chain(args.iter().copied())
        .map(String::from)
        .collect();
    let mut out = Vec::new();
    assert_eq!(
        tql_cli::run(&argv, &mut "".as_bytes(), &mut out, &mut Vec::new()),
        0
    );
    let v: Value = serde_json::from_slice(&out).unwrap();
    v["tolerances"]["general"].as_f64().unwrap()
}

#[test]
fn env_then_flag_precedence() {
    std::env::remove_var(tql_core::config::TOL_ENV);
    assert_eq!(general_tol(&["singularities"]), 1e-8);
    std::env::set_var(tql_core::config::TOL_ENV, "1e-7");
    assert_eq!(general_tol(&["singularities"]), 1e-7);
    assert_eq!(general_tol(&["singularities", "--tol", "1e-9"]), 1e-9);
    std::env::set_var(tql_core::config::TOL_ENV, "garbage");
    assert_eq!(general_tol(&["singularities"]), 1e-8);
    std::env::remove_var(tql_core::config::TOL_ENV);
}
