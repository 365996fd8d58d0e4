//! End-to-end checks of the `kiae` binary: every subcommand is driven over
//! a small synthetic dataset, and the emitted files feed back into each
//! other the way a user would chain them.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kiae"))
}

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kiae_cli_pipeline_{tag}"));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_ok(cmd: &mut Command) -> String {
    let out = cmd.env("KIAE_LOG", "quiet").output().expect("spawn kiae");
    assert!(
        out.status.success(),
        "command failed: {:?}\nstdout: {}\nstderr: {}",
        cmd,
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn generate_knowledge_train_encode_evaluate_plot_chain() {
    let dir = workdir("chain");
    let data = dir.join("data.csv");
    run_ok(bin().args([
        "generate",
        "--synthetic",
        "economics_like",
        "--n",
        "60",
        "--d",
        "5",
        "--clusters",
        "3",
        "--separation",
        "6",
        "--seed",
        "11",
        "--out",
        data.to_str().unwrap(),
    ]));
    assert!(data.exists());

    let mt = dir.join("mt.csv");
    run_ok(bin().args([
        "knowledge",
        "build",
        "--data",
        data.to_str().unwrap(),
        "--label-column",
        "label",
        "--gamma",
        "1,2,1.0",
        "--gamma",
        "1,3,2.0",
        "--gamma",
        "2,3,3.0",
        "--seed",
        "12",
        "--out",
        mt.to_str().unwrap(),
    ]));
    assert!(mt.exists());

    let ckpt = dir.join("model.ckpt");
    run_ok(bin().args([
        "train",
        "--data",
        data.to_str().unwrap(),
        "--label-column",
        "label",
        "--knowledge",
        mt.to_str().unwrap(),
        "--seed",
        "13",
        "--epochs",
        "5",
        "--out",
        ckpt.to_str().unwrap(),
    ]));
    assert!(ckpt.exists());

    let emb = dir.join("embedding.csv");
    run_ok(bin().args([
        "encode",
        "--model",
        ckpt.to_str().unwrap(),
        "--data",
        data.to_str().unwrap(),
        "--label-column",
        "label",
        "--out",
        emb.to_str().unwrap(),
    ]));
    assert!(emb.exists());

    let stdout = run_ok(bin().args([
        "evaluate",
        "--embedding",
        emb.to_str().unwrap(),
        "--data",
        data.to_str().unwrap(),
        "--label-column",
        "label",
    ]));
    assert!(
        stdout.contains("misclassification = "),
        "evaluate output: {stdout}"
    );

    let svg = dir.join("scatter.svg");
    run_ok(bin().args([
        "plot",
        "--embedding",
        emb.to_str().unwrap(),
        "--data",
        data.to_str().unwrap(),
        "--label-column",
        "label",
        "--subsample",
        "40",
        "--out",
        svg.to_str().unwrap(),
    ]));
    let svg_text = fs::read_to_string(&svg).unwrap();
    assert_eq!(svg_text.matches("class=\"point\"").count(), 40);
    assert_eq!(svg_text.matches("class=\"centroid\"").count(), 3);
    assert_eq!(svg_text.matches("class=\"centroid-link\"").count(), 3);
}

#[test]
fn knowledge_fill_and_corrupt_modes() {
    let dir = workdir("knowledge");
    let data = dir.join("data.csv");
    run_ok(bin().args([
        "generate",
        "--synthetic",
        "physics_like",
        "--n",
        "30",
        "--d",
        "4",
        "--clusters",
        "2",
        "--seed",
        "21",
        "--out",
        data.to_str().unwrap(),
    ]));

    // A partially known matrix: diagonal plus a few pairs.
    let partial = dir.join("partial.csv");
    let mut rows = vec![vec![String::new(); 30]; 30];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = "0".to_string();
    }
    for (i, j) in (0..15).map(|k| (k, k + 15)) {
        rows[i][j] = format!("{}", 1.0 + (i % 3) as f64);
        rows[j][i] = rows[i][j].clone();
    }
    let text: String = rows
        .iter()
        .map(|r| r.join(","))
        .collect::<Vec<_>>()
        .join("\n");
    fs::write(&partial, text + "\n").unwrap();

    let filled = dir.join("filled.csv");
    run_ok(bin().args([
        "knowledge",
        "fill",
        "--data",
        data.to_str().unwrap(),
        "--label-column",
        "label",
        "--in",
        partial.to_str().unwrap(),
        "--k-neighbors",
        "3",
        "--out",
        filled.to_str().unwrap(),
    ]));
    let filled_text = fs::read_to_string(&filled).unwrap();
    assert!(
        !filled_text.contains(",,"),
        "filled matrix still has missing cells"
    );

    let noisy = dir.join("noisy.csv");
    run_ok(bin().args([
        "knowledge",
        "corrupt",
        "--n",
        "12",
        "--seed",
        "22",
        "--out",
        noisy.to_str().unwrap(),
    ]));
    assert_eq!(fs::read_to_string(&noisy).unwrap().lines().count(), 12);
}

#[test]
fn experiment_subcommand_runs_and_exits_zero() {
    let dir = workdir("experiment");
    let cfg = dir.join("exp.ini");
    fs::write(
        &cfg,
        format!(
            "[experiment]\nvariants = ae, kiae\nsplits = test\nseed = 31\nout = {}\n\
             [data]\nsource = synthetic\nprofile = economics_like\nn = 80\nd = 5\nclusters = 2\nseparation = 5\n\
             [model]\nrepr_dim = 3\nepochs = 3\n",
            dir.join("out").display()
        ),
    )
    .unwrap();
    let stdout = run_ok(bin().args(["experiment", "--config", cfg.to_str().unwrap()]));
    assert!(stdout.contains("economics_like,ae,test,"));
    assert!(stdout.contains("economics_like,kiae,test,"));
    for file in [
        "results.csv",
        "run.log",
        "embedding_ae.csv",
        "embedding_kiae.csv",
        "centroids_ae.csv",
        "scatter_kiae.svg",
    ] {
        assert!(dir.join("out").join(file).exists(), "missing {file}");
    }
    // No noisy_kiae artifacts when the variant was not requested.
    assert!(!dir.join("out").join("embedding_noisy_kiae.csv").exists());
}

#[test]
fn failing_variant_is_skipped_and_exit_code_is_nonzero() {
    let dir = workdir("variant_failure");
    let cfg = dir.join("exp.ini");
    // gamma_2_3 names category 3, but the dataset has only 2 classes: the
    // kiae variant must abort while ae still completes.
    fs::write(
        &cfg,
        format!(
            "[experiment]\nvariants = ae, kiae\nsplits = test\nseed = 51\nout = {}\n\
             [data]\nsource = synthetic\nprofile = economics_like\nn = 60\nd = 4\nclusters = 2\nseparation = 5\n\
             [model]\nrepr_dim = 3\nepochs = 2\n\
             [knowledge]\ngamma_2_3 = 2\n",
            dir.join("out").display()
        ),
    )
    .unwrap();
    let out = bin()
        .args(["experiment", "--config", cfg.to_str().unwrap()])
        .env("KIAE_LOG", "quiet")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "expected failure exit code");
    let results = fs::read_to_string(dir.join("out").join("results.csv")).unwrap();
    assert!(results.contains("economics_like,ae,test,"));
    assert!(!results.contains(",kiae,"), "results: {results}");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("kiae failed"), "stderr: {stderr}");
}

#[test]
fn scatter_cohort_caps_at_ninety_points() {
    let dir = workdir("cohort");
    let cfg = dir.join("exp.ini");
    fs::write(
        &cfg,
        format!(
            "[experiment]\nvariants = ae\nsplits = fit\nseed = 61\nout = {}\n\
             [data]\nsource = synthetic\nprofile = economics_like\nn = 150\nd = 4\nclusters = 2\nseparation = 5\n\
             [model]\nrepr_dim = 3\nepochs = 2\n",
            dir.join("out").display()
        ),
    )
    .unwrap();
    run_ok(bin().args(["experiment", "--config", cfg.to_str().unwrap()]));
    let svg = fs::read_to_string(dir.join("out").join("scatter_ae.svg")).unwrap();
    assert_eq!(svg.matches("class=\"point\"").count(), 90);
}

#[test]
fn train_only_split_still_emits_artifacts() {
    let dir = workdir("train_only");
    let cfg = dir.join("exp.ini");
    fs::write(
        &cfg,
        format!(
            "[experiment]\nvariants = ae\nsplits = train\nseed = 71\nout = {}\n\
             [data]\nsource = synthetic\nprofile = economics_like\nn = 60\nd = 4\nclusters = 2\nseparation = 5\n\
             [model]\nrepr_dim = 3\nepochs = 2\n",
            dir.join("out").display()
        ),
    )
    .unwrap();
    let stdout = run_ok(bin().args(["experiment", "--config", cfg.to_str().unwrap()]));
    assert!(stdout.contains("economics_like,ae,train,"));
    // The fallback emission trains on the train split and embeds it.
    let emb = fs::read_to_string(dir.join("out").join("embedding_ae.csv")).unwrap();
    assert_eq!(emb.lines().count(), 49, "48 train rows plus header");
    assert!(dir.join("out").join("scatter_ae.svg").exists());
}

#[test]
fn config_errors_exit_with_usage_code() {
    let dir = workdir("badconfig");
    let cfg = dir.join("bad.ini");
    fs::write(
        &cfg,
        "[model]\nomega1 = 1.5\n[data]\nsource = synthetic\nprofile = physics_like\n",
    )
    .unwrap();
    let out = bin()
        .args(["experiment", "--config", cfg.to_str().unwrap()])
        .env("KIAE_LOG", "quiet")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "expected usage exit code");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("[0,1]"), "stderr: {stderr}");
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn embedding_csv_reparses_via_load_csv() {
    let dir = workdir("reparse");
    let cfg = dir.join("exp.ini");
    fs::write(
        &cfg,
        format!(
            "[experiment]\nvariants = ae\nsplits = fit\nseed = 41\nout = {}\n\
             [data]\nsource = synthetic\nprofile = economics_like\nn = 40\nd = 4\nclusters = 2\nseparation = 5\n\
             [model]\nrepr_dim = 3\nepochs = 2\n",
            dir.join("out").display()
        ),
    )
    .unwrap();
    run_ok(bin().args(["experiment", "--config", cfg.to_str().unwrap()]));
    let emb_path = dir.join("out").join("embedding_ae.csv");
    let with_label = kiae::data::load_csv(Path::new(&emb_path), Some("label")).unwrap();
    assert_eq!(with_label.len(), 40);
    assert_eq!(with_label.dim(), 3);
    assert_eq!(with_label.class_count(), 2);
    // The label column is numeric, so the file also parses fully unlabeled.
    let unlabeled = kiae::data::load_csv(Path::new(&emb_path), None).unwrap();
    assert_eq!(unlabeled.dim(), 4);
}
