use std::path::PathBuf;
use std::process::Command;

use liehopf::cli::run;
use liehopf::{eval_str, load_presentation, parse_expression};
use liehopf_core::envelope::Envelope;
use liehopf_core::{fixtures, Field, FreeProduct, LiePresentation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

/// Runs the installed binary; returns (exit code, stdout, stderr).
fn liehopf(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_liehopf"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exited normally"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

/// Runs in-process; returns (exit code, stdout).
fn run_args(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["liehopf"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn derivations_on_sl2_report_dimension_three() {
    let (code, out, _) = liehopf(&["derivations", &data("sl2.alg"), "--degree", "3", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["kernel_dimension"], 3);
    assert_eq!(v["pass"], true);
    assert_eq!(v["theorem"], "universal-derivatives");
}

#[test]
fn e_squared_is_not_primitive() {
    let (code, out, _) = liehopf(&["primitive", &data("sl2.alg"), "e*e", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["primitive"], false);
    assert_eq!(v["witness"]["left"], "[e^1]");
    assert_eq!(v["witness"]["right"], "[e^1]");
    assert_eq!(v["witness"]["coeff"], "2");
}

#[test]
fn validate_lists_the_jacobi_triple() {
    let (code, out, _) = liehopf(&["validate", &data("bad.alg"), "--format", "json"]);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["jacobi_failures"], serde_json::json!([["a", "b", "c"]]));
    let (_, text, _) = liehopf(&["validate", &data("bad.alg")]);
    assert!(text.contains("Jacobi identity fails at (a, b, c)"), "{text}");
}

#[test]
fn validate_reports_each_pmap_category() {
    for (file, category) in [
        ("bad_pmap_ad.alg", "ad"),
        ("bad_pmap_additivity.alg", "additivity"),
        ("bad_pmap_scaling.alg", "scaling"),
    ] {
        let (code, out) = run_args(&["validate", &data(file), "--format", "json"]);
        assert_eq!(code, 2, "{file}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let cats: Vec<&str> = v["pmap"]["violations"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x["category"].as_str().unwrap())
            .collect();
        assert_eq!(cats, [category], "{file}");
    }
    for file in [
        "sl2_f5.alg",
        "solvable2_f2.alg",
        "toral_f3.alg",
        "sl2.alg",
        "heisenberg.alg",
    ] {
        assert_eq!(run_args(&["validate", &data(file)]).0, 0, "{file}");
    }
}

#[test]
fn every_exit_code_is_reachable() {
    let sl2 = data("sl2.alg");
    assert_eq!(liehopf(&["endos", &sl2, "--degree", "2"]).0, 0);
    let (code, out, _) = liehopf(&["derivations", &sl2, "--degree", "3", "--expect", "e^2"]);
    assert_eq!(code, 1);
    assert!(out.contains("witness (nonzero-defect)"), "{out}");
    assert_eq!(liehopf(&["nf", &sl2, "e + q"]).0, 2);
    let (code, _, err) = liehopf(&["derivations", &data("sl2_f5.alg"), "--degree", "2", "--mode", "full"]);
    assert_eq!(code, 3);
    assert!(err.contains("unsupported mode"), "{err}");
    assert_eq!(liehopf(&["nf", &sl2, "e", "--mode", "restricted"]).0, 3);
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.to_string_lossy().into_owned()
    };
    let cases = [
        write("trunc.alg", r#"{"field": "Q", "basis": ["#),
        write("field.alg", r#"{"field": "R", "basis": ["a"]}"#),
        write("reserved.alg", r#"{"field": "Q", "basis": ["x"]}"#),
        write("prime.alg", r#"{"field": {"Fp": 9}, "basis": ["a"]}"#),
    ];
    for c in &cases {
        assert_eq!(liehopf(&["nf", c, "1"]).0, 2, "{c}");
    }
    let missing = dir.path().join("missing.alg");
    assert_eq!(liehopf(&["validate", &missing.to_string_lossy()]).0, 2);
    let sl2 = data("sl2.alg");
    assert_eq!(liehopf(&["nf", &sl2, "[e, f"]).0, 2);
    assert_eq!(liehopf(&["nf", &sl2, "e^-2"]).0, 2);
    assert_eq!(liehopf(&["coprod", &sl2, "e^3", "--degree", "2"]).0, 2);
    assert_eq!(liehopf(&["derivations", &sl2, "--degree", "0"]).0, 2);
    assert_eq!(liehopf(&["derivations", &sl2, "--degree", "2", "--expect", "x"]).0, 2);
    assert_eq!(liehopf(&["frobnicate"]).0, 2);
    // Commands other than validate refuse invalid presentations.
    assert_eq!(liehopf(&["nf", &data("bad.alg"), "a"]).0, 2);
    assert_eq!(
        liehopf(&["derivations", &data("bad_pmap_ad.alg"), "--degree", "2"]).0,
        2
    );
}

#[test]
fn data_files_match_the_core_fixtures() {
    let bad = LiePresentation::builder(Field::Rational, ["a", "b", "c"])
        .bracket_int(0, 1, &[(1, 1)])
        .bracket_int(0, 2, &[(0, 1)])
        .bracket_int(1, 2, &[(0, 1)])
        .build()
        .unwrap();
    let expected = [
        ("sl2.alg", fixtures::sl2_q()),
        ("sl2_f5.alg", fixtures::sl2_f5()),
        ("heisenberg.alg", fixtures::heisenberg_q()),
        ("abelian1.alg", fixtures::abelian_q(1)),
        ("abelian2.alg", fixtures::abelian_q(2)),
        ("solvable2.alg", fixtures::solvable2(Field::Rational)),
        ("solvable2_f2.alg", fixtures::solvable2_f2()),
        ("toral_f3.alg", fixtures::toral_f3()),
        ("bad.alg", bad),
        ("bad_pmap_ad.alg", fixtures::sl2_f5_bad_ad()),
        ("bad_pmap_additivity.alg", fixtures::solvable2_f2_bad_additivity()),
        ("bad_pmap_scaling.alg", fixtures::toral_f3_bad_scaling()),
    ];
    for (file, pres) in expected {
        assert_eq!(load_presentation(data(file).as_ref()).unwrap(), pres, "{file}");
    }
}

fn random_expr(names: &[&str], depth: u32, rng: &mut ChaCha8Rng) -> String {
    let leaf = |rng: &mut ChaCha8Rng| -> String {
        match rng.gen_range(0..4) {
            0 => format!("{}", rng.gen_range(0..5)),
            1 => format!("{}/{}", rng.gen_range(1..5), rng.gen_range(1..4)),
            2 => "x".into(),
            _ => names[rng.gen_range(0..names.len())].into(),
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    let (a, b) = (random_expr(names, depth - 1, rng), random_expr(names, depth - 1, rng));
    match rng.gen_range(0..7) {
        0 => format!("{a} + {b}"),
        1 => format!("{a} - ({b})"),
        2 => format!("({a})*({b})"),
        3 => format!("({a})^{}", rng.gen_range(0..3)),
        4 => format!("-({a})"),
        5 => format!("[{a}, {b}]"),
        _ => leaf(rng),
    }
}

#[test]
fn expressions_round_trip_through_the_printer() {
    let algebras = [
        (FreeProduct::new(Envelope::full(fixtures::sl2_q())), vec!["e", "h", "f"]),
        (
            FreeProduct::new(Envelope::full(fixtures::heisenberg_q())),
            vec!["e", "f", "z"],
        ),
        (
            FreeProduct::from_presentation(fixtures::sl2_f5(), liehopf_core::EnvMode::Restricted).unwrap(),
            vec!["e", "h", "f"],
        ),
    ];
    let corpus = [
        "0",
        "1",
        "x",
        "-x",
        "x^0",
        "2*x^3",
        "1/2*x - 3/4",
        "[x, x]",
        "(x + 1)^2",
        "x*x*x",
    ];
    let fixed = [
        "[h,[e,f]]",
        "e*f - f*e",
        "x^2 * e",
        "e*x*f",
        "[e, x]*[f, x]",
        "-e^2",
        "h^3 - 2*h",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57);
    let mut count = 0;
    for (fp, names) in &algebras {
        for (n, name) in names.iter().enumerate() {
            assert_eq!(fp.presentation().names()[n], *name);
        }
        let mut exprs: Vec<String> = corpus.iter().map(|s| s.to_string()).collect();
        if names[1] == "h" {
            exprs.extend(fixed.iter().map(|s| s.to_string()));
        }
        exprs.extend((0..25).map(|_| random_expr(names, 3, &mut rng)));
        for src in &exprs {
            let a = eval_str(src, fp).unwrap_or_else(|e| panic!("{src}: {e}"));
            let printed = fp.format(&a);
            let b = eval_str(&printed, fp).unwrap_or_else(|e| panic!("{printed}: {e}"));
            assert_eq!(a, b, "{src} printed as {printed}");
            assert_eq!(fp.format(&b), printed);
            count += 1;
        }
    }
    assert!(count >= 50, "{count}");
    assert!(parse_expression("[a, b]").is_ok());
}

#[test]
fn output_is_independent_of_worker_count() {
    let runs: &[&[&str]] = &[
        &["derivations", "sl2.alg", "--degree", "3"],
        &[
            "derivations",
            "sl2.alg",
            "--degree",
            "3",
            "--expect",
            "e*f + f*e + 1/2*h^2",
        ],
        &["endos", "sl2_f5.alg", "--degree", "2"],
        &["endos", "solvable2_f2.alg", "--degree", "2"],
        &["closure", "heisenberg.alg", "--degree", "3"],
        &["props", "toral_f3.alg", "--cases", "40", "--seed", "11"],
        &["coprod", "sl2.alg", "e*x*f - h", "--degree", "3"],
    ];
    for args in runs {
        let mut args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        args[1] = data(&args[1]);
        let mut outputs = Vec::new();
        for workers in ["1", "4"] {
            for format in ["json", "text"] {
                let mut a: Vec<&str> = args.iter().map(String::as_str).collect();
                a.extend(["--parallel", workers, "--format", format]);
                outputs.push(run_args(&a));
            }
        }
        assert_eq!(outputs[0], outputs[2], "{args:?} json");
        assert_eq!(outputs[1], outputs[3], "{args:?} text");
    }
}

#[test]
fn props_is_deterministic_and_passes() {
    let sl2 = data("solvable2.alg");
    let a = run_args(&["props", &sl2, "--cases", "100", "--seed", "3", "--format", "json"]);
    let b = run_args(&["props", &sl2, "--cases", "100", "--seed", "3", "--format", "json"]);
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
    let v: serde_json::Value = serde_json::from_str(&a.1).unwrap();
    assert_eq!(v["laws"].as_array().unwrap().len(), 6);
    assert!(v["laws"].as_array().unwrap().iter().all(|l| l["cases"] == 100));
}

#[test]
fn closure_matches_free_lie_dimensions_for_one_generator() {
    let (code, out) = run_args(&["closure", &data("abelian1.alg"), "--degree", "4", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dims_by_degree"], serde_json::json!([2, 1, 2, 3]));
}

#[test]
fn nf_reports_pbw_exponents_inside_the_envelope() {
    let (_, out) = run_args(&["nf", &data("sl2.alg"), "f*e", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    // f*e = e*f - h in PBW order e < h < f.
    assert_eq!(v["normal_form"], "-1*h + e*f");
    assert_eq!(v["pbw"], serde_json::json!([[[0, 1, 0], "-1"], [[1, 0, 1], "1"]]));
    let (_, out) = run_args(&["nf", &data("sl2.alg"), "e*x", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v.get("pbw").is_none());
}
