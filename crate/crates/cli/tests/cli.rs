//! End-to-end tests of the `resonances` binary: exit-code contract, output
//! files, and agreement with an independent imaginary-axis bisection oracle.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use num_complex::Complex64;
use resonances::{evaluate, OperatorCase, PiecewisePotential};

const BIN: &str = env!("CARGO_BIN_EXE_resonances");

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("resonances-cli-{}-{}", name, std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_spec(dir: &PathBuf, name: &str, json: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, json).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env("RESONANCE_SEED", "0")
        .output()
        .expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stderr_text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn free_line_spectrum_is_a_single_origin_zero() {
    let dir = workdir("free");
    let spec = write_spec(&dir, "q.json", r#"{"case":"line","breakpoints":[0.0,1.0],"values":[0.0]}"#);
    let out_dir = dir.join("out");
    let out = run(&[
        "spectrum",
        "--potential", spec.to_str().unwrap(),
        "--window", "-5,5,-5,5",
        "--out", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_text(&out));

    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("spectrum.json")).unwrap()).unwrap();
    assert_eq!(doc["complete"], serde_json::json!(true));
    assert_eq!(doc["total_count"], serde_json::json!(1));
    let points = doc["points"].as_array().unwrap();
    assert_eq!(points.len(), 1);
    assert_eq!(points[0]["k_re"].as_f64().unwrap(), 0.0);
    assert_eq!(points[0]["k_im"].as_f64().unwrap(), 0.0);
    assert_eq!(points[0]["multiplicity"], serde_json::json!(1));
    assert_eq!(points[0]["kind"], serde_json::json!("RealResonance"));

    let grid = fs::read_to_string(out_dir.join("wgrid.csv")).unwrap();
    assert!(grid.starts_with("k_re,k_im,abs_f\n"));
    assert_eq!(grid.lines().count(), 1 + 81 * 41);
}

/// Bound states of a half-line Dirichlet potential by sign changes of the
/// real-valued psi(0, i*tau) on a fine tau grid, sharpened by bisection.
fn dirichlet_bound_states_by_bisection(p: &PiecewisePotential) -> Vec<f64> {
    let q_max = p.values().iter().fold(0.0f64, |acc, q| acc.max(q.abs()));
    let tau_max = q_max.sqrt() + 1.0;
    let g = |tau: f64| evaluate(p, Complex64::new(0.0, tau)).unwrap().psi0.re;
    let n = 20_000;
    let mut roots = Vec::new();
    let mut prev_tau = tau_max;
    let mut prev = g(prev_tau);
    for i in (0..n).rev() {
        let tau = tau_max * (i as f64 + 0.5) / n as f64;
        let cur = g(tau);
        if prev.signum() != cur.signum() {
            let (mut a, mut b) = (tau, prev_tau);
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                if g(m).signum() == g(a).signum() {
                    a = m;
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
        prev_tau = tau;
        prev = cur;
    }
    roots
}

#[test]
fn square_well_bound_states_match_bisection_oracle() {
    let dir = workdir("well");
    let spec = write_spec(
        &dir,
        "q.json",
        r#"{"case":"dirichlet","breakpoints":[0.0,1.0],"values":[-10.0]}"#,
    );
    let out_dir = dir.join("out");
    let out = run(&[
        "spectrum",
        "--potential", spec.to_str().unwrap(),
        "--window", "-20,20,-12,4",
        "--out", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_text(&out));

    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("spectrum.json")).unwrap()).unwrap();
    let mut eigen: Vec<f64> = doc["points"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|p| p["kind"] == serde_json::json!("Eigenvalue"))
        .map(|p| p["k_im"].as_f64().unwrap())
        .collect();
    eigen.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let p = PiecewisePotential::new(
        OperatorCase::DirichletHalfLine,
        vec![0.0, 1.0],
        vec![-10.0],
    )
    .unwrap();
    let oracle = dirichlet_bound_states_by_bisection(&p);
    assert_eq!(eigen.len(), oracle.len(), "bound-state count mismatch");
    for (got, want) in eigen.iter().zip(&oracle) {
        assert!((got - want).abs() < 1e-6, "eigenvalue {got} vs oracle {want}");
    }
}

#[test]
fn malformed_spec_exits_2_naming_the_field() {
    let dir = workdir("malformed");
    let spec = write_spec(&dir, "q.json", r#"{"case":"line","breakpoints":[0.0,1.0]}"#);
    let out = run(&["spectrum", "--potential", spec.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_text(&out).contains("values"), "diagnostic should name the field");

    let garbage = write_spec(&dir, "g.json", "not json at all");
    let out = run(&["spectrum", "--potential", garbage.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn subunit_p_exits_2() {
    let dir = workdir("badp");
    let spec = write_spec(&dir, "q.json", r#"{"case":"dirichlet","breakpoints":[0.0,1.0],"values":[5.0]}"#);
    let out = run(&[
        "certify",
        "--potential", spec.to_str().unwrap(),
        "--p", "0.9",
        "--out", dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_text(&out).contains("p must exceed 1"));
}

#[test]
fn unknown_certificate_and_zero_jobs_exit_2() {
    let dir = workdir("badargs");
    let spec = write_spec(&dir, "q.json", r#"{"case":"dirichlet","breakpoints":[0.0,1.0],"values":[5.0]}"#);
    let out = run(&[
        "certify",
        "--potential", spec.to_str().unwrap(),
        "--certify", "counting,telepathy",
        "--out", dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_text(&out).contains("telepathy"));

    let out = run(&[
        "spectrum",
        "--potential", spec.to_str().unwrap(),
        "--jobs", "0",
        "--out", dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn certify_defaults_all_pass() {
    let dir = workdir("certify-all");
    let spec = write_spec(&dir, "q.json", r#"{"case":"dirichlet","breakpoints":[0.0,1.0],"values":[5.0]}"#);
    let out_dir = dir.join("out");
    let out = run(&[
        "certify",
        "--potential", spec.to_str().unwrap(),
        "--out", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_text(&out));

    let certs: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("certificates.json")).unwrap())
            .unwrap();
    let certs = certs.as_array().unwrap();
    assert!(!certs.is_empty());
    for c in certs {
        assert_eq!(c["pass"], serde_json::json!(true), "failed: {}", c["id"]);
    }
    let table = fs::read_to_string(out_dir.join("certificates.txt")).unwrap();
    assert!(table.contains("counting-bound-mean"));
    assert!(table.contains("factorization"));
}

#[test]
fn small_exponent_tiny_window_passes_with_margin() {
    let dir = workdir("smallp");
    let spec = write_spec(&dir, "q.json", r#"{"case":"line","breakpoints":[0.0,1.0],"values":[5.0]}"#);
    let out_dir = dir.join("out");
    let out = run(&[
        "certify",
        "--potential", spec.to_str().unwrap(),
        "--certify", "resonance-sum",
        "--p", "1.01",
        "--window", "-3,3,-3,1",
        "--out", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_text(&out));
    let certs: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("certificates.json")).unwrap())
            .unwrap();
    let c = &certs.as_array().unwrap()[0];
    assert_eq!(c["pass"], serde_json::json!(true));
    // the partial sum over a tiny window sits far below the global bound
    assert!(c["margin"].as_f64().unwrap() > 10.0 * c["lhs"].as_f64().unwrap());
}

#[test]
fn rouche_localization_passes_and_uncovered_disk_exits_3() {
    let dir = workdir("rouche");
    // |q| = 0.02 satisfies the smallness criterion at r = 1, so the
    // localization certificate is emitted and must find exactly one simple
    // zero in the unit disk.
    let spec = write_spec(&dir, "q.json", r#"{"case":"line","breakpoints":[0.0,1.0],"values":[0.02]}"#);
    let out_dir = dir.join("out");
    let out = run(&[
        "certify",
        "--potential", spec.to_str().unwrap(),
        "--certify", "rouche",
        "--radii", "1",
        "--window", "-4,4,-4,1",
        "--out", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_text(&out));
    let table = fs::read_to_string(out_dir.join("certificates.txt")).unwrap();
    assert!(table.contains("rouche-localization"));

    // a window that misses the unit disk cannot certify the count; the
    // coverage guard refuses rather than reporting a spurious failure
    let out = run(&[
        "certify",
        "--potential", spec.to_str().unwrap(),
        "--certify", "rouche",
        "--radii", "1",
        "--window", "2,6,-4,1",
        "--out", dir.join("off").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 3, "{}", stderr_text(&out));
}

#[test]
fn explicit_window_overflow_exits_4() {
    let dir = workdir("overflow");
    let spec = write_spec(&dir, "q.json", r#"{"case":"line","breakpoints":[0.0,1.0],"values":[5.0]}"#);
    let out = run(&[
        "spectrum",
        "--potential", spec.to_str().unwrap(),
        "--window", "-2,2,-400,1",
        "--out", dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 4);
    assert!(stderr_text(&out).contains("overflow"));
}

#[test]
fn spectrum_output_is_deterministic() {
    let dir = workdir("determinism");
    let spec = write_spec(&dir, "q.json", r#"{"case":"line","breakpoints":[0.0,1.0],"values":[5.0]}"#);
    let (a, b) = (dir.join("a"), dir.join("b"));
    for out_dir in [&a, &b] {
        let out = run(&[
            "spectrum",
            "--potential", spec.to_str().unwrap(),
            "--window", "-10,10,-8,2",
            "--out", out_dir.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 0, "{}", stderr_text(&out));
    }
    let left = fs::read(a.join("spectrum.json")).unwrap();
    let right = fs::read(b.join("spectrum.json")).unwrap();
    assert_eq!(left, right, "spectrum.json must be byte-identical across runs");
}

#[test]
fn plotdata_free_case_staircase_is_constant_one() {
    let dir = workdir("plotdata");
    let spec = write_spec(&dir, "q.json", r#"{"case":"line","breakpoints":[0.0,1.0],"values":[0.0]}"#);
    let out_dir = dir.join("out");
    let out = run(&[
        "plotdata",
        "--potential", spec.to_str().unwrap(),
        "--window", "-5,5,-5,5",
        "--out", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_text(&out));

    let scatter = fs::read_to_string(out_dir.join("scatter.csv")).unwrap();
    assert!(scatter.starts_with("k_re,k_im,kind\n"));
    assert!(scatter.contains("0,0,real_resonance"));

    let staircase = fs::read_to_string(out_dir.join("staircase.csv")).unwrap();
    let mut rows = staircase.lines();
    assert_eq!(rows.next(), Some("r,count,bound_rhs"));
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[1], "1", "free case keeps the count at 1: {row}");
        assert!(fields[2].parse::<f64>().unwrap() >= 1.0);
    }

    let forbidden = fs::read_to_string(out_dir.join("forbidden.csv")).unwrap();
    assert_eq!(forbidden, "abs_k,abs_im_k,lhs,rhs\n", "no rows for the line case");
}

#[test]
fn plotdata_dirichlet_points_stay_below_the_forbidden_curve() {
    let dir = workdir("forbidden");
    let spec = write_spec(&dir, "q.json", r#"{"case":"dirichlet","breakpoints":[0.0,1.0],"values":[5.0]}"#);
    let out_dir = dir.join("out");
    let out = run(&[
        "plotdata",
        "--potential", spec.to_str().unwrap(),
        "--window", "-15,15,-10,3",
        "--out", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_text(&out));
    let forbidden = fs::read_to_string(out_dir.join("forbidden.csv")).unwrap();
    let mut rows = forbidden.lines();
    assert_eq!(rows.next(), Some("abs_k,abs_im_k,lhs,rhs"));
    let mut n = 0;
    for row in rows {
        let fields: Vec<f64> = row.split(',').map(|t| t.parse().unwrap()).collect();
        assert!(fields[2] <= fields[3], "point escapes the forbidden domain: {row}");
        n += 1;
    }
    assert!(n > 0, "expected at least one resonance row");
}

#[test]
fn bad_seed_env_exits_2() {
    let dir = workdir("badseed");
    let spec = write_spec(&dir, "q.json", r#"{"case":"line","breakpoints":[0.0,1.0],"values":[0.0]}"#);
    let out = Command::new(BIN)
        .args([
            "spectrum",
            "--potential", spec.to_str().unwrap(),
            "--window", "-5,5,-5,5",
            "--out", dir.to_str().unwrap(),
        ])
        .env("RESONANCE_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_text(&out).contains("RESONANCE_SEED"));
}
