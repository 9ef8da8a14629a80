use std::process::{Command, Output};

fn eagm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eagm"))
        .args(args)
        .output()
        .expect("spawn eagm")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn fill_k_defaults() {
    let o = eagm(&["fill-k", "--b", "0.25"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 65);
    assert_eq!(
        lines[0],
        "series,sigma_mask,delta_mask,gamma_mask,signb,generation,re,im,ill_conditioned,duplicate_of"
    );
    assert!(lines[1].starts_with("K,31,0,0,1,5,"));
    assert!(lines[2].starts_with("K_minus_b,31,0,0,-1,5,"));
    let k: f64 = lines[63].split(',').nth(6).unwrap().parse().unwrap();
    assert!((k - 2.801206084665204).abs() < 1e-12);
}

#[test]
fn k_flag_matches_b_flag() {
    let by_b = eagm(&["fill-e", "--b", "0.25"]);
    let by_k = eagm(&["fill-e", "--k", "0.9682458365518543"]);
    assert!(by_b.status.success() && by_k.status.success());
    let parse = |o: &Output| -> Vec<f64> {
        stdout(o)
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(6).unwrap().parse().unwrap())
            .collect()
    };
    for (x, y) in parse(&by_b).iter().zip(parse(&by_k)) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn b_takes_precedence_with_warning() {
    let both = eagm(&["fill-n", "--b", "0.25", "--k", "0.3"]);
    assert!(both.status.success());
    assert!(stderr(&both).contains("using --b"));
    assert_eq!(stdout(&both), stdout(&eagm(&["fill-n", "--b", "0.25"])));
}

#[test]
fn json_output_mirrors_csv() {
    let o = eagm(&["fill-z-restricted", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 16);
    assert_eq!(rows[0]["series"], "Z_restricted");
    assert_eq!(rows[0]["delta_mask"], 15);
    assert_eq!(rows[0]["gamma_mask"], 30);
    assert!(rows[15]["duplicate_of"].is_null());
}

#[test]
fn writes_out_and_svg_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("f.csv");
    let svg = dir.path().join("f.svg");
    let o = eagm(&[
        "fill-f",
        "--out",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 129);
    let plot = std::fs::read_to_string(&svg).unwrap();
    assert!(plot.starts_with("<svg"));
    assert_eq!(plot.matches("<circle").count(), 128);
}

#[test]
fn verify_passes_on_defaults() {
    for kind in ["K", "F", "E", "N", "z-restricted"] {
        let o = eagm(&["verify", "--kind", kind]);
        assert!(o.status.success(), "{kind}: {}", stderr(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["report"]["pass"], true);
        assert!(v["report"]["max_residual"].as_f64().unwrap() < 1e-6);
    }
}

#[test]
fn verify_restricted_zeta_generator() {
    let o = eagm(&["verify", "--kind", "z-restricted", "--b", "0.25", "--sinphi", "0.8"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let gen_im = v["locus"]["gen1"][1].as_f64().unwrap();
    assert!((gen_im - 2.2430).abs() < 5e-4);
}

#[test]
fn verify_fails_when_tolerance_is_unreachable() {
    // the F cloud carries residuals well above 1e-15
    let o = eagm(&["verify", "--kind", "F", "--tol", "1e-15"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("FAIL"));
}

#[test]
fn ref_reports_small_legendre_residual() {
    let o = eagm(&["ref", "--b", "0.25"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["legendre_residual"].as_f64().unwrap() < 1e-12);
    assert!((v["refs"]["kk"][0].as_f64().unwrap() - 2.801206084665204).abs() < 1e-14);
}

#[test]
fn magm_check_passes() {
    let o = eagm(&["magm-check", "--b", "0.9"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["negative"].as_array().unwrap().len(), 16);
    assert!(v["equivalence"]["max_row_deviation"].as_f64().unwrap() < 1e-12);
}

#[test]
fn flag_errors_exit_2() {
    for args in [
        &["fill-k", "--signb", "0"][..],
        &["fill-k", "--sigma-bits", "21"][..],
        &["fill-f", "--sinphi", "0"][..],
        &["fill-k", "--max-iter", "0"][..],
        &["fill-k", "--k", "1"][..],
        &["verify", "--kind", "Z"][..],
        &["verify", "--kind", "Q"][..],
        &["magm-check", "--b", "1.5"][..],
        &["fill-k", "--format", "xml"][..],
        &["nonsense"][..],
    ] {
        let o = eagm(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}
