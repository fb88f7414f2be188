use std::path::PathBuf;

use lwe_cli::run_main;
use lwe_core::lwe::read_batch;

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("lwe-xform-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut full = vec!["lwe-xform"];
    full.extend_from_slice(args);
    let code = run_main(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn sample_writes_header_and_rows() {
    let (code, out, err) = run(&["sample", "n=2", "m=10", "q=8", "alpha=0.05", "seed=1"]);
    assert_eq!(code, 0, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 11);
    assert!(lines[0].starts_with("lwe-batch v1 n=2 m=10 q=8"));
    let b = read_batch(&out).unwrap();
    assert_eq!(b.len(), 10);
    assert!(b.transparent.is_none());
    let (_, again, _) = run(&["sample", "n=2", "m=10", "q=8", "alpha=0.05", "seed=1"]);
    assert_eq!(out, again);
    let (_, other, _) = run(&["sample", "n=2", "m=10", "q=8", "alpha=0.05", "seed=2"]);
    assert_ne!(out, other);
}

#[test]
fn transparent_flag_keeps_secret() {
    let (code, out, _) = run(&[
        "sample",
        "--transparent",
        "n=3",
        "m=5",
        "q=16",
        "alpha=0.01",
        "seed=4",
        "secret=binary",
    ]);
    assert_eq!(code, 0);
    let b = read_batch(&out).unwrap();
    let t = b.transparent.unwrap();
    assert!(t.secret.iter().all(|x| *x == 0.into() || *x == 1.into()));
}

#[test]
fn zero_modulus_is_a_config_error() {
    let (code, _, err) = run(&["sample", "n=2", "m=10", "q=0", "alpha=0.05", "seed=1"]);
    assert_eq!(code, 2);
    assert!(err.contains("`q`"), "{err}");
}

#[test]
fn config_errors_name_field_and_line() {
    let dir = scratch("cfg");
    let path = dir.join("bad.toml");
    std::fs::write(&path, "seed = 1\nn = 2\nm = 4\nq = 8\nalpah = 0.1\n").unwrap();
    let (code, _, err) = run(&["sample", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 5") && err.contains("alpah"), "{err}");
    let (code, _, err) = run(&["sample", "n=2", "m=4", "q=8", "alpha=0.1"]);
    assert_eq!(code, 2);
    assert!(err.contains("seed"), "{err}");
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn modulus_switch_report_cites_budget() {
    let dir = scratch("switch");
    let cfg = dir.join("switch.toml");
    std::fs::write(
        &cfg,
        "seed = 3\nn = 2\nm = 100\nq = 16\nalpha = 0.05\n\n[[stage]]\nkind = \"mod-switch\"\nq_to = 4\nB = 1.0\ndelta = 0.01\n",
    )
    .unwrap();
    let out = dir.join("out.batch");
    let (code, _, err) = run(&[
        "reduce",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let batch = read_batch(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!((batch.params.n, batch.len()), (2, 100));
    assert_eq!(batch.params.q, 4u32.into());
    let report = std::fs::read_to_string(dir.join("out.batch.report")).unwrap();
    // delta + 14 eps m with eps = 2^-20 and m = 100.
    let loss = 0.01 + 14.0 * 100.0 / (1u64 << 20) as f64;
    assert!(report.contains(&lwe_core::stats::fmt12(loss)), "{report}");
    assert!(report.contains("q_to = 4"));
    assert!(report.contains("status: done"));
}

#[test]
fn reduce_needs_one_stage_and_chains_are_checked() {
    let (code, _, err) = run(&["reduce", "n=2", "m=4", "q=8", "alpha=0.1", "seed=1"]);
    assert_eq!(code, 2);
    assert!(err.contains("exactly one"), "{err}");
    let dir = scratch("chain");
    let cfg = dir.join("chain.toml");
    std::fs::write(
        &cfg,
        "seed = 1\nn = 2\nm = 8\nq = 16\nalpha = 0.1\n\n[[stage]]\nkind = \"mod-switch\"\nq_to = 4\nB = 1.0\n\n\
         [[stage]]\nkind = \"mod-switch\"\nq_from = 16\nq_to = 2\nB = 1.0\n",
    )
    .unwrap();
    let (code, _, err) = run(&["pipeline", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("stage 1"), "{err}");
}

#[test]
fn empty_pipeline_copies_its_input() {
    let dir = scratch("empty");
    let input = dir.join("in.batch");
    let (code, _, _) = run(&[
        "sample",
        "n=2",
        "m=6",
        "q=8",
        "alpha=0.05",
        "seed=9",
        "--out",
        input.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let out = dir.join("out.batch");
    let inp = format!("input=\"{}\"", input.display());
    let (code, _, err) = run(&["pipeline", "seed=1", &inp, "alpha=0.05", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(std::fs::read(&input).unwrap(), std::fs::read(&out).unwrap());
}

#[test]
fn abort_exits_with_three() {
    let dir = scratch("abort");
    let cfg = dir.join("fe.toml");
    std::fs::write(
        &cfg,
        "n = 1\nm = 4\nq = 8\nalpha = 0.3\n\n[[stage]]\nkind = \"first-errorless\"\n",
    )
    .unwrap();
    let mut codes = Vec::new();
    for seed in 0..20 {
        let s = seed.to_string();
        let (code, _, err) = run(&["pipeline", "--config", cfg.to_str().unwrap(), "--seed", &s]);
        if code == 3 {
            assert!(err.starts_with("abort"), "{err}");
        }
        codes.push(code);
    }
    assert!(codes.contains(&3) && codes.contains(&0), "{codes:?}");
    assert!(codes.iter().all(|c| *c == 0 || *c == 3));
}

#[test]
fn verify_suites() {
    let (code, out, err) = run(&["verify", "gauss", "--seed", "7", "quick=true"]);
    assert_eq!(code, 0, "{err}\n{out}");
    assert!(out.contains("theta direct vs poisson"));
    assert!(out.contains("# criterion 3: lattice sampler [pass]"));
    let (code, out, _) = run(&["verify", "gauss", "--seed", "7", "quick=true", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("name,")));

    let (code, out, err) = run(&["verify", "endtoend", "--seed", "7", "quick=true"]);
    assert_eq!(code, 0, "{err}\n{out}");
    assert!(out.contains("zeta: A on binary-secret LWE vs uniform"));
    assert!(out.contains("A after the reduction pipeline"));

    let (code, _, err) = run(&["verify", "nonsense", "--seed", "7"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown suite"));
}

#[test]
fn binary_runs() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_lwe-xform"))
        .args(["sample", "n=1", "m=2", "q=5", "alpha=0.1", "--seed", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("lwe-batch"));
}
