use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", ".."].iter().collect()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_affine-va")).current_dir(root()).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("affine-va-cli-{}", std::process::id()));
    fs::create_dir_all(&d).unwrap();
    d.join(name)
}

#[test]
fn verify_singular_vector_and_vacuum() {
    let o = run(&["verify-singular", "--algebra", "sl6", "--level", "-7/2", "--input", "fixtures/singular_sl6.vac"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("PASS\n"));
    let o = run(&["verify-singular", "--input", "fixtures/vacuum.vac", "--extended"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_reports_failure_and_parse_errors() {
    let bad = tmp("single.vac");
    fs::write(&bad, "e[1,5](-3) e[2,6](-1) |0>\n").unwrap();
    let o = run(&["verify-singular", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("NONZERO"));

    let malformed = tmp("malformed.vac");
    fs::write(&malformed, "+ e[1,5](-3) e[2,6](-1) |0>\n+ 2 e[1,5](0 |0>\n").unwrap();
    let o = run(&["verify-singular", "--input", malformed.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("malformed.vac:2:14:"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify-singular", "--algebra", "so5", "--input", "fixtures/vacuum.vac"]).status.code(), Some(2));
    assert_eq!(run(&["verify-singular", "--level", "-6", "--input", "fixtures/vacuum.vac"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["search-singular", "--weight", "1,2", "--degree", "2"]).status.code(), Some(2));
    assert_eq!(run(&["verify-singular", "--input", "fixtures/missing.vac"]).status.code(), Some(2));
}

#[test]
fn search_small_cases() {
    let o = run(&["search-singular", "--algebra", "sl2", "--level", "1", "--weight", "4", "--degree", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("kernel dimension 1"));
    assert!(s.contains("\ne[1,2](-1)^2 |0>\n"));
    let o = run(&["search-singular", "--degree", "0", "--weight", "0,0,0,0,0"]);
    let s = stdout(&o);
    assert!(s.contains("kernel dimension 1") && s.contains("\n|0>\n"), "{s}");
    let o = run(&["search-singular", "--weight", "0,1,0,1,0", "--degree", "1"]);
    assert!(stdout(&o).contains("kernel dimension 0"));
}

#[test]
fn search_output_verifies() {
    let dir = tmp("kernel");
    let o = run(&["search-singular", "--weight", "0,1,0,1,0", "--degree", "4", "--output", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("kernel dimension 1"));
    let file = dir.join("kernel_1.vac");
    let o = run(&["verify-singular", "--input", file.to_str().unwrap(), "--extended"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn zhu_image_of_singular_vector() {
    let out = tmp("image.uea");
    let o = run(&[
        "zhu-image",
        "--input",
        "fixtures/singular_sl6.vac",
        "--expect",
        "fixtures/v_prime.uea",
        "--cross-check",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("agrees") && s.contains("matches"));
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 146);

    let single = tmp("single_current.vac");
    fs::write(&single, "e[1,2](-1) |0>").unwrap();
    let o = run(&["zhu-image", "--algebra", "sl2", "--level", "1", "--input", single.to_str().unwrap()]);
    assert_eq!(stdout(&o), "e[1,2]\n");
}

#[test]
fn classify_grid_and_perturbation() {
    let o = run(&["classify"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("9 polynomials x 96 families: 864 zero, 0 nonzero"));
    let o = run(&["classify", "--perturb", "17"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("family 17"));
    let o = run(&["classify", "--perturb", "3:2"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(run(&["classify", "--perturb", "97"]).status.code(), Some(2));
    let empty = tmp("empty_families.txt");
    fs::write(&empty, "# nothing\n").unwrap();
    let o = run(&["classify", "--input", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn classify_regenerate_reports_p9() {
    let o = run(&["classify", "--regenerate"]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    assert!(s.contains("p8 from chains: matches"));
    assert!(s.contains("p9 from chains: DIFFERS"));
    assert!(s.contains("span dimension 9"));
}

#[test]
fn records_are_json_and_deterministic() {
    let a = run(&["--format", "records", "classify"]);
    let b = run(&["--format", "records", "classify"]);
    assert_eq!(a.stdout, b.stdout);
    let lines: Vec<serde_json::Value> = stdout(&a).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.iter().filter(|v| v["record"] == "pair").count(), 864);
    assert_eq!(lines.last().unwrap()["pass"], true);
}

#[test]
fn w_numerics_table() {
    let o = run(&["--format", "records", "w-numerics", "--bound", "4"]);
    let rows: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let got: Vec<(u64, u64, u64, String, String)> = rows
        .iter()
        .map(|r| {
            (
                r["q"].as_u64().unwrap(),
                r["n"].as_u64().unwrap(),
                r["t"].as_u64().unwrap(),
                r["h"].as_str().unwrap().to_string(),
                r["J"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    assert_eq!(got, vec![(1, 2, 3, "3".into(), "2".into()), (1, 3, 4, "4".into(), "3".into())]);
    let o = run(&["--format", "records", "w-numerics", "--bound", "2"]);
    assert!(stdout(&o).is_empty());
    let o = run(&["w-numerics", "--bound", "2", "--weight", "0,0,0"]);
    assert!(stdout(&o).contains("J = 0, h = 0"));
}
