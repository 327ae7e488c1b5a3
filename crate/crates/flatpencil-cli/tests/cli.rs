use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, Output};

use flatpencil::expr::{RationalExpr, Symbols};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flatpencil")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn temp(name: &str, contents: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("flatpencil-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn modified_saito_reports_curvature() {
    let o = bin(&["run", "modified-saito-I2-3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("sectional curvature = 4*c*d"));
    assert!(stdout(&o).contains("verdict: pass"));
}

#[test]
fn sl2_example_prints_transformed_prepotential() {
    let o = bin(&["run", "sl2-example-n3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    let line = out.lines().find_map(|l| l.trim().strip_prefix("F~ = ")).expect("F~ printed");
    let mut s = Symbols::with_vars(&["t1", "t2", "t3", "a", "b", "c", "d"]);
    s.declare_function("f", &["t2", "t3"]);
    let printed = s.parse(line).unwrap();
    let display = s.parse("t1^2*t3/2 + t1*t2^2/2 + c*t2^4/(8*(c*t3 + d)) + (c*t3 + d)^2*f(t2/(c*t3 + d), (a*t3 + b)/(c*t3 + d))").unwrap();
    let d: BTreeMap<String, RationalExpr> = [("d".to_string(), s.parse("(1 + b*c)/a").unwrap())].into_iter().collect();
    assert_eq!(printed.substitute(&d).unwrap(), display.substitute(&d).unwrap());
}

#[test]
fn perturbed_pencil_exits_one_with_witness() {
    let o = bin(&["run", "perturbed-pencil-I2-3"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("[fail] flat.pencil-flat"));
    assert!(out.contains("R^1_112 = "));
}

#[test]
fn scenario_files_run_from_disk() {
    let path = env!("CARGO_MANIFEST_DIR").to_string() + "/scenarios/wdvv-A3-perturbed.scn";
    let o = bin(&["run", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("(i,j,m,n) = (2,2,3,3)"));
}

#[test]
fn unknown_group_lists_the_catalog() {
    let p = temp("unknown.scn", "kind = saito\n\n[params]\ngroup = H3\n");
    let o = bin(&["run", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown group `H3`; available: A2, A3, B2, I2(m)"), "{}", stderr(&o));
}

#[test]
fn scenario_errors_exit_two() {
    let cases = [
        ("nokind.scn", "name = x\n", "missing `kind`"),
        ("badkind.scn", "kind = lattice\n", "unknown scenario kind `lattice`"),
        ("nochart.scn", "kind = wdvv\n[fields]\nF = t1^3\neta = 1\n", "needs `coords` in [chart]"),
        ("extra.scn", "kind = saito\n[params]\ngroup = A2\nm = 3\n", "does not use `m` in [params]"),
        ("undeclared.scn", "kind = wdvv\n[chart]\ncoords = t1\n[fields]\nF = c*t1^3\neta = 1\n", "unknown symbol `c`"),
        ("shape.scn", "kind = pencil-check\n[chart]\ncoords = x y\n[fields]\ng = 1, 0; 0\ngt = 1, 0; 0, 1\n", "expected a 2 x 2 matrix"),
        ("toggle.scn", "kind = saito\n[params]\ngroup = A2\n[checks]\nprepotential = maybe\n", "is not on or off"),
        ("section.scn", "kind = saito\n[extras]\n", "unknown section [extras]"),
    ];
    for (name, text, message) in cases {
        let p = temp(name, text);
        let o = bin(&["run", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{name}");
        assert!(stderr(&o).contains(message), "{name}: {}", stderr(&o));
    }
    assert_eq!(bin(&["run", "/nonexistent/file.scn"]).status.code(), Some(2));
}

#[test]
fn list_catalog_shows_entries() {
    let o = bin(&["list-catalog"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for name in ["I2(m)", "A2", "A3", "B2"] {
        assert!(out.contains(name), "{name}");
    }
    let o = bin(&["list-catalog", "I2(5)"]);
    assert!(stdout(&o).contains("t1 = x^5 - 10*x^3*y^2 + 5*x*y^4"), "{}", stdout(&o));
    assert_eq!(bin(&["list-catalog", "E8"]).status.code(), Some(2));
}

#[test]
fn custom_catalog_file() {
    let p = temp("cat.catalog", "[group.G]\nrank = 2\ncoords = u v\ndegrees = 3 2\ninvariants = u^3 - 3*u*v^2; u^2 + v^2\n");
    let o = bin(&["--catalog", p.to_str().unwrap(), "list-catalog"]);
    assert!(stdout(&o).contains("G (rank 2, degrees 3 2)"));
    let s = temp("custom.scn", "kind = saito\n[params]\ngroup = G\n");
    let o = bin(&["--catalog", p.to_str().unwrap(), "run", s.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
}

#[test]
fn json_reports_are_deterministic() {
    let a = temp("a.json", "");
    let b = temp("b.json", "");
    for p in [&a, &b] {
        let o = bin(&["run", "conformal-I2-3", "--seed", "9", "--json", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let ja = std::fs::read(&a).unwrap();
    assert_eq!(ja, std::fs::read(&b).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&ja).unwrap();
    assert_eq!(v["scenario"], "conformal-I2-3");
    assert_eq!(v["seed"], 9);
    assert_eq!(v["verdict"], "pass");
    let records = v["records"].as_array().unwrap();
    assert!(records.iter().any(|r| r["name"] == "oracle.h.agreement" && r["status"] == "pass"));
    assert!(records.iter().all(|r| r.get("elapsed_ms").is_none() && r["witness"].is_string()));
    let o = bin(&["run", "conformal-I2-3", "--timings", "--json", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert!(v["records"].as_array().unwrap().iter().all(|r| r["elapsed_ms"].is_u64()));
}

#[test]
fn human_and_json_list_the_same_records() {
    let p = temp("same.json", "");
    let o = bin(&["run", "saito-I2-3", "--json", p.to_str().unwrap()]);
    let out = stdout(&o);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&p).unwrap()).unwrap();
    for r in v["records"].as_array().unwrap() {
        assert!(out.contains(&format!("[{}] {} ({})", r["status"].as_str().unwrap(), r["name"].as_str().unwrap(), r["anchor"].as_str().unwrap())));
    }
    for f in v["facts"].as_array().unwrap() {
        assert!(out.contains(&format!("{} = {}", f["name"].as_str().unwrap(), f["value"].as_str().unwrap())));
    }
}

#[test]
fn only_filters_identities() {
    let o = bin(&["run", "modified-saito-I2-3", "--only", "sectional-curvature"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.matches("] ").count(), 1, "{out}");
    assert!(out.contains("[pass] sectional-curvature"));
    let o = bin(&["run", "perturbed-pencil-I2-3", "--only", "compatible"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!stdout(&o).contains("pencil-flat"));
    assert_eq!(bin(&["run", "saito-I2-3", "--only", "no-such-check"]).status.code(), Some(2));
}

#[test]
fn suite_meets_every_expectation() {
    let p = temp("suite.json", "");
    let o = bin(&["suite", "--json", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("suite: 13 scenarios, 0 unexpected, 0 errors: pass"));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&p).unwrap()).unwrap();
    let scenarios = v["scenarios"].as_array().unwrap();
    assert_eq!(scenarios.len(), 13);
    assert_eq!(scenarios.iter().filter(|s| s["expect"] == "fail" && s["verdict"] == "fail").count(), 2);
}
