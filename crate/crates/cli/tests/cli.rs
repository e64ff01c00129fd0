mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use coughrank::io::{format_float, parse_decision_matrix, read_csv};
use coughrank_cli::{
    cmd_evaluate, cmd_extract, cmd_pipeline, cmd_rank, Common, EvaluateArgs, ExitStatus,
    ExtractArgs, PipelineArgs, RankArgs,
};
use tempfile::TempDir;

use common::*;

fn common_at(out: &Path) -> Common {
    Common {
        out: out.to_path_buf(),
        ..Common::default()
    }
}

fn block_files(category: &str) -> Vec<PathBuf> {
    (1..=3)
        .map(|s| fixtures().join(format!("{category}_s{s}.csv")))
        .collect()
}

fn rank_args(matrices: Vec<PathBuf>, out: &Path) -> RankArgs {
    RankArgs {
        matrices,
        criteria: Some(fixtures().join("criteria.csv")),
        common: common_at(out),
        ..RankArgs::default()
    }
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap()
}

const TWO_MODELS: &str = "model,strategy,sample_id,true_label,score
m1,1,a,1,0.9
m1,1,b,0,0.2
m1,1,c,1,0.7
m1,1,d,0,0.6
m2,1,a,1,0.4
m2,1,b,0,0.3
m2,1,c,1,0.8
m2,1,d,0,0.1
";

#[test]
fn extract_three_clips_with_labels() {
    let dir = TempDir::new().unwrap();
    for (i, name) in ["c.wav", "a.wav", "b.WAV"].iter().enumerate() {
        write_wav(&dir.path().join(name), &burst(i as u64, 6000), 22050);
    }
    fs::write(
        dir.path().join("labels.csv"),
        "sample_id,label\na,covid\nb,0\nc,1\n",
    )
    .unwrap();
    let out = TempDir::new().unwrap();
    let args = ExtractArgs {
        input_dir: dir.path().to_path_buf(),
        labels: None,
        common: common_at(out.path()),
    };
    let outcome = cmd_extract(&args).unwrap();
    assert_eq!(outcome.artifacts, vec!["features.csv", "manifest.json"]);
    let text = read(&out.path().join("features.csv"));
    let table = read_csv(&text, "features.csv").unwrap();
    assert_eq!(table.header.len(), 195);
    let ids: Vec<&str> = table.rows.iter().map(|r| r.1[0].as_str()).collect();
    assert_eq!(ids, ["a", "b", "c"]);
    let labels: Vec<&str> = table.rows.iter().map(|r| r.1[1].as_str()).collect();
    assert_eq!(labels, ["1", "0", "1"]);

    let again = TempDir::new().unwrap();
    cmd_extract(&ExtractArgs {
        common: common_at(again.path()),
        ..args
    })
    .unwrap();
    assert_eq!(snapshot(out.path()), snapshot(again.path()));
}

#[test]
fn extract_resamples_other_rates() {
    let dir = TempDir::new().unwrap();
    write_wav(&dir.path().join("x.wav"), &burst(3, 8000), 16000);
    let out = TempDir::new().unwrap();
    cmd_extract(&ExtractArgs {
        input_dir: dir.path().to_path_buf(),
        labels: None,
        common: common_at(out.path()),
    })
    .unwrap();
    let table = read_csv(&read(&out.path().join("features.csv")), "f").unwrap();
    assert_eq!(table.header.len(), 194);
    assert_eq!(table.rows.len(), 1);
}

#[test]
fn extract_empty_directory_is_an_error() {
    let dir = TempDir::new().unwrap();
    let out = TempDir::new().unwrap();
    let err = cmd_extract(&ExtractArgs {
        input_dir: dir.path().to_path_buf(),
        labels: None,
        common: common_at(out.path()),
    })
    .unwrap_err();
    assert_eq!(err.status, ExitStatus::Input);
    assert!(err.message.contains("no .wav files"), "{err}");
}

#[test]
fn extract_skips_undecodable_files() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("bad.wav"), b"RIFF....not audio").unwrap();
    write_wav(&dir.path().join("good.wav"), &burst(1, 4000), 22050);
    let out = TempDir::new().unwrap();
    let args = ExtractArgs {
        input_dir: dir.path().to_path_buf(),
        labels: None,
        common: common_at(out.path()),
    };
    let outcome = cmd_extract(&args).unwrap();
    assert_eq!(outcome.notes.len(), 1);
    assert!(outcome.notes[0].contains("bad"));
    let table = read_csv(&read(&out.path().join("features.csv")), "f").unwrap();
    assert_eq!(table.rows.len(), 1);

    fs::remove_file(dir.path().join("good.wav")).unwrap();
    let err = cmd_extract(&args).unwrap_err();
    assert!(err.message.contains("could be decoded"), "{err}");
}

#[test]
fn evaluate_two_models_one_strategy() {
    let dir = TempDir::new().unwrap();
    let preds = dir.path().join("preds.csv");
    fs::write(&preds, TWO_MODELS).unwrap();
    let out = dir.path().join("out");
    let outcome = cmd_evaluate(&EvaluateArgs {
        predictions: Some(preds),
        common: common_at(&out),
        ..EvaluateArgs::default()
    })
    .unwrap();
    assert_eq!(
        outcome.artifacts,
        vec!["decision_matrix_1.csv", "evaluation_1.csv", "manifest.json"]
    );
    let dm = parse_decision_matrix(&read(&out.join("decision_matrix_1.csv")), None, "dm").unwrap();
    assert_eq!((dm.n_alternatives(), dm.n_criteria()), (2, 8));
    assert_eq!(dm.alternatives(), ["m1", "m2"]);
    // m1 at 0.5: tp 2, fp 1, tn 1, fn 0
    assert_eq!(dm.row(0)[0], 0.75);
    assert_eq!(dm.row(0)[3], 1.0);
}

#[test]
fn evaluate_applies_threshold_sidecar() {
    let dir = TempDir::new().unwrap();
    let preds = dir.path().join("preds.csv");
    fs::write(&preds, TWO_MODELS).unwrap();
    let thr = dir.path().join("thr.csv");
    fs::write(&thr, "model,strategy,threshold\nm1,1,0.65\n").unwrap();
    let out = dir.path().join("out");
    cmd_evaluate(&EvaluateArgs {
        predictions: Some(preds),
        thresholds: Some(thr),
        common: common_at(&out),
        ..EvaluateArgs::default()
    })
    .unwrap();
    let dm = parse_decision_matrix(&read(&out.join("decision_matrix_1.csv")), None, "dm").unwrap();
    assert_eq!(dm.row(0)[0], 1.0);
}

#[test]
fn evaluate_orders_mixed_strategies() {
    let mut text = String::from("model,strategy,sample_id,true_label,score\n");
    for s in ["3", "1", "2"] {
        for m in ["b", "a"] {
            text.push_str(&format!(
                "{m},{s},x,1,0.8\n{m},{s},y,0,0.3\n{m},{s},z,1,0.45\n"
            ));
        }
    }
    let dir = TempDir::new().unwrap();
    let preds = dir.path().join("p.csv");
    fs::write(&preds, text).unwrap();
    let out = dir.path().join("out");
    let outcome = cmd_evaluate(&EvaluateArgs {
        predictions: Some(preds),
        common: common_at(&out),
        ..EvaluateArgs::default()
    })
    .unwrap();
    assert_eq!(
        outcome.summary,
        "strategy 1: 2 models\nstrategy 2: 2 models\nstrategy 3: 2 models\n"
    );
    assert!(out.join("decision_matrix_3.csv").exists());
}

#[test]
fn evaluate_rejects_singleton_groups_and_bad_rows() {
    let dir = TempDir::new().unwrap();
    let preds = dir.path().join("p.csv");
    fs::write(
        &preds,
        "model,strategy,sample_id,true_label,score\nm,1,a,1,0.9\nm,1,b,0,0.1\n",
    )
    .unwrap();
    let args = EvaluateArgs {
        predictions: Some(preds.clone()),
        common: common_at(&dir.path().join("out")),
        ..EvaluateArgs::default()
    };
    let err = cmd_evaluate(&args).unwrap_err();
    assert!(err.message.contains("at least 2"), "{err}");

    fs::write(
        &preds,
        "model,strategy,sample_id,true_label,score\nm,1,a,1,0.9\nm,1,b,0,high\n",
    )
    .unwrap();
    let err = cmd_evaluate(&args).unwrap_err();
    assert_eq!(err.status, ExitStatus::Input);
    assert!(err.to_string().contains(":3:"), "{err}");
}

#[test]
fn evaluate_passes_fixture_matrices_through() {
    let out = TempDir::new().unwrap();
    let src = fixtures().join("symptomatic_s2.csv");
    cmd_evaluate(&EvaluateArgs {
        matrices: vec![src.clone()],
        criteria: Some(fixtures().join("criteria.csv")),
        common: common_at(out.path()),
        ..EvaluateArgs::default()
    })
    .unwrap();
    let a = parse_decision_matrix(&read(&src), None, "a").unwrap();
    let b = parse_decision_matrix(
        &read(&out.path().join("decision_matrix_symptomatic_s2.csv")),
        None,
        "b",
    )
    .unwrap();
    assert_eq!(a, b);
}

#[test]
fn rank_fixture_blocks_select_expected_models() {
    for (category, soft, hard) in [
        ("asymptomatic", "Extra-Trees", "HGBoost"),
        ("symptomatic", "Extra-Trees", "Extra-Trees"),
    ] {
        let out = TempDir::new().unwrap();
        let outcome = cmd_rank(&rank_args(block_files(category), out.path())).unwrap();
        assert_eq!(outcome.status(), ExitStatus::Success);
        let summary = read(&out.path().join("summary.txt"));
        assert!(
            summary.contains(&format!("soft_best: {soft}\n")),
            "{summary}"
        );
        assert!(
            summary.contains(&format!("hard_best: {hard}\n")),
            "{summary}"
        );
        let json: serde_json::Value =
            serde_json::from_str(&read(&out.path().join("report.json"))).unwrap();
        for key in ["weights", "topsis", "ensemble", "manifest"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert_eq!(json["ensemble"]["soft_best"], soft);
        assert_eq!(json["weights"].as_array().unwrap().len(), 3);
    }
}

#[test]
fn rank_single_matrix_reduces_to_topsis() {
    let out = TempDir::new().unwrap();
    cmd_rank(&rank_args(
        vec![fixtures().join("asymptomatic_s3.csv")],
        out.path(),
    ))
    .unwrap();
    let topsis = read_csv(
        &read(&out.path().join("topsis_report_asymptomatic_s3.csv")),
        "t",
    )
    .unwrap();
    let ens = read_csv(&read(&out.path().join("ensemble_report.csv")), "e").unwrap();
    for ((_, t), (_, e)) in topsis.rows.iter().zip(&ens.rows) {
        assert_eq!(t[0], e[0]);
        assert_eq!(t[1], e[1], "soft score equals closeness");
        assert_eq!(t[2], e[2], "soft rank equals topsis rank");
    }
}

#[test]
fn rank_ignores_row_order() {
    let dir = TempDir::new().unwrap();
    let shuffled: Vec<PathBuf> = block_files("symptomatic")
        .iter()
        .map(|p| {
            let text = read(p);
            let mut lines: Vec<&str> = text.lines().collect();
            lines[1..].reverse();
            lines[1..].rotate_left(3);
            let dst = dir.path().join(p.file_name().unwrap());
            fs::write(&dst, lines.join("\n") + "\n").unwrap();
            dst
        })
        .collect();
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    cmd_rank(&rank_args(block_files("symptomatic"), a.path())).unwrap();
    cmd_rank(&rank_args(shuffled, b.path())).unwrap();
    let strip = |v: Vec<(String, Vec<u8>)>| -> Vec<(String, Vec<u8>)> {
        v.into_iter()
            .filter(|(n, _)| n != "manifest.json" && n != "report.json")
            .collect()
    };
    assert_eq!(strip(snapshot(a.path())), strip(snapshot(b.path())));
    let ja: serde_json::Value = serde_json::from_str(&read(&a.path().join("report.json"))).unwrap();
    let jb: serde_json::Value = serde_json::from_str(&read(&b.path().join("report.json"))).unwrap();
    for key in ["weights", "topsis", "ensemble"] {
        assert_eq!(ja[key], jb[key]);
    }
}

#[test]
fn rank_rejects_inconsistent_model_sets() {
    let dir = TempDir::new().unwrap();
    let text = read(&fixtures().join("asymptomatic_s2.csv"));
    let trimmed: String = text.lines().take(10).map(|l| format!("{l}\n")).collect();
    let p = dir.path().join("fewer.csv");
    fs::write(&p, trimmed).unwrap();
    let err = cmd_rank(&rank_args(
        vec![fixtures().join("asymptomatic_s1.csv"), p],
        &dir.path().join("out"),
    ))
    .unwrap_err();
    assert_eq!(err.status, ExitStatus::Input);
    assert!(err.message.contains("covers models"), "{err}");
}

#[test]
fn rank_rejects_criteria_mismatch() {
    let dir = TempDir::new().unwrap();
    let crit = dir.path().join("c.csv");
    fs::write(&crit, "name,direction\nacc,benefit\nmcc,benefit\n").unwrap();
    let err = cmd_rank(&RankArgs {
        criteria: Some(crit),
        ..rank_args(block_files("asymptomatic"), &dir.path().join("out"))
    })
    .unwrap_err();
    assert!(err.message.contains("missing"), "{err}");
}

#[test]
fn report_numbers_survive_reformatting() {
    let out = TempDir::new().unwrap();
    cmd_rank(&rank_args(block_files("asymptomatic"), out.path())).unwrap();
    let mut checked = 0;
    for (name, bytes) in snapshot(out.path()) {
        if !name.ends_with(".csv") {
            continue;
        }
        let table = read_csv(std::str::from_utf8(&bytes).unwrap(), &name).unwrap();
        for (_, cells) in &table.rows {
            for cell in cells {
                if let Ok(v) = cell.parse::<f64>() {
                    assert_eq!(&format_float(v), cell, "{name}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 300);
}

fn synthetic_inputs(dir: &Path, with_external: bool) -> (PathBuf, Vec<PathBuf>) {
    let (ids, labels, rows) = two_clusters(11, 30, 60, 5);
    let features = dir.join("features.csv");
    fs::write(&features, features_csv(&ids, &labels, &rows)).unwrap();
    let mut external = Vec::new();
    if with_external {
        let p = dir.join("external.csv");
        fs::write(
            &p,
            external_predictions(&ids, &labels, &EXTERNAL_MODELS, &["1", "2", "3"], 5),
        )
        .unwrap();
        external.push(p);
    }
    (features, external)
}

#[test]
fn pipeline_ranks_in_repo_models() {
    let dir = TempDir::new().unwrap();
    let (features, _) = synthetic_inputs(dir.path(), false);
    let out = dir.path().join("out");
    let outcome = cmd_pipeline(&PipelineArgs {
        features,
        common: common_at(&out),
        ..PipelineArgs::default()
    });
    // Two perfect classifiers can tie on every criterion; that is a
    // degeneracy, not a crash.
    match outcome {
        Ok(o) => {
            assert!(o.artifacts.contains(&"predictions.csv".to_string()));
            let ens = read_csv(&read(&out.join("ensemble_report.csv")), "e").unwrap();
            assert_eq!(ens.rows.len(), 2);
        }
        Err(e) => assert_eq!(e.status, ExitStatus::Degenerate, "{e}"),
    }
}

#[test]
fn pipeline_with_one_model_needs_external_predictions() {
    let dir = TempDir::new().unwrap();
    let (features, _) = synthetic_inputs(dir.path(), false);
    let cfg = dir.path().join("cfg.toml");
    fs::write(&cfg, "[learn]\nmodels = [\"lr\"]\n").unwrap();
    let err = cmd_pipeline(&PipelineArgs {
        features,
        common: Common {
            config: Some(cfg),
            seed: None,
            out: dir.path().join("out"),
        },
        ..PipelineArgs::default()
    })
    .unwrap_err();
    assert!(err.message.contains("--external"), "{err}");
}

#[test]
fn pipeline_merges_external_models() {
    let dir = TempDir::new().unwrap();
    let (features, external) = synthetic_inputs(dir.path(), true);
    let out = dir.path().join("out");
    cmd_pipeline(&PipelineArgs {
        features,
        external,
        common: Common {
            config: None,
            seed: Some(3),
            out: out.clone(),
        },
        ..PipelineArgs::default()
    })
    .unwrap();
    let closeness = read_csv(&read(&out.join("closeness.csv")), "c").unwrap();
    assert_eq!(closeness.rows.len(), 30);
    let manifest: serde_json::Value =
        serde_json::from_str(&read(&out.join("manifest.json"))).unwrap();
    assert_eq!(manifest["seed"], 3);
    assert_eq!(manifest["inputs"].as_array().unwrap().len(), 2);
}

#[test]
fn pipeline_rejects_clashing_external_names() {
    let dir = TempDir::new().unwrap();
    let (features, _) = synthetic_inputs(dir.path(), false);
    let (ids, labels, _) = two_clusters(11, 30, 60, 5);
    let p = dir.path().join("ext.csv");
    fs::write(&p, external_predictions(&ids, &labels, &["LR"], &["1"], 1)).unwrap();
    let err = cmd_pipeline(&PipelineArgs {
        features,
        external: vec![p],
        common: common_at(&dir.path().join("out")),
        ..PipelineArgs::default()
    })
    .unwrap_err();
    assert_eq!(err.stage.as_deref(), Some("external"));
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_coughrank"))
}

#[test]
fn binary_exit_codes() {
    let dir = TempDir::new().unwrap();
    let mut ok = bin();
    ok.arg("rank");
    for p in block_files("asymptomatic") {
        ok.arg(p);
    }
    let st = ok.arg("--out").arg(dir.path().join("a")).output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&st.stdout).contains("hard_best: HGBoost"));

    let st = bin()
        .args(["rank", "missing.csv", "--out"])
        .arg(dir.path().join("b"))
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(2));

    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "sede = 1\n").unwrap();
    let st = bin()
        .arg("rank")
        .arg(fixtures().join("asymptomatic_s1.csv"))
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(2));

    // m2 never predicts positive, so its precision is 0/0
    let preds = dir.path().join("p.csv");
    fs::write(
        &preds,
        "model,strategy,sample_id,true_label,score\nm1,1,a,1,0.9\nm1,1,b,0,0.2\nm2,1,a,1,0.1\nm2,1,b,0,0.2\n",
    )
    .unwrap();
    let st = bin()
        .arg("evaluate")
        .arg(&preds)
        .arg("--out")
        .arg(dir.path().join("c"))
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(3));
    assert!(dir.path().join("c/decision_matrix_1.csv").exists());
}

#[test]
fn binary_reads_config_path_from_environment() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, "seed = 99\n").unwrap();
    let out = dir.path().join("o");
    let st = bin()
        .arg("rank")
        .arg(fixtures().join("asymptomatic_s1.csv"))
        .arg(fixtures().join("asymptomatic_s2.csv"))
        .arg("--out")
        .arg(&out)
        .env("COUGHRANK_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(
        st.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&st.stderr)
    );
    let m: serde_json::Value = serde_json::from_str(&read(&out.join("manifest.json"))).unwrap();
    assert_eq!(m["seed"], 99);
}
