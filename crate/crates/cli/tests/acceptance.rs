//! Acceptance suite: one test per release criterion, each printing a
//! `criterion N ... PASS` line (run with `--nocapture` to see them).
//!
//! Criteria that exercise the command-line surface spawn the built binary;
//! the rest drive the library directly.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use classbench::dataset::{
    one_hot, stratified_split, stratified_split_indices, Input, LabeledDataset, Sample, SplitRatios,
};
use classbench::losses::{
    cb_loss, ce_loss, focal_loss, inverse_proportion_weights, loss_grad_logits, softmax, wce_loss,
    CbParams, ClassWeights, FocalParams, LossSpec,
};
use classbench::metrics::{confusion_matrix, micro_f1, per_class_recall, ConfusionMatrix};
use classbench::model::{init_model, ModelArch};
use classbench::similarity::{similarity_matrix, SimilarityConfig};
use classbench::synth::{gaussian_blobs, imbalance_benchmark_blobs};
use classbench::trainer::{evaluate, lr_at, replication_seeds, run_benchmark, train, TrainConfig};
use classbench::ClassCounts;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_classbench"))
}

fn run_ok(cmd: &mut Command) -> String {
    let output = cmd.output().expect("spawning classbench");
    assert!(
        output.status.success(),
        "command failed: {:?}\nstdout: {}\nstderr: {}",
        cmd,
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr),
    );
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn finish(criterion: u32, label: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed <= budget,
        "criterion {criterion} exceeded its {budget:?} budget: {elapsed:?}"
    );
    println!("criterion {criterion} ({label}): PASS in {elapsed:.2?}");
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

#[test]
fn criterion_1_weight_table_reproduction() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let counts = [
        1115u64, 763, 689, 451, 450, 273, 254, 234, 240, 216, 129, 129, 111, 72, 61,
    ];
    let expected = [
        1.0, 1.463, 1.62, 2.47, 2.48, 4.09, 4.39, 4.77, 4.65, 5.16, 8.64, 8.64, 10.05, 15.49, 18.28,
    ];
    let mut csv = String::from("class_name,count\n");
    for (i, n) in counts.iter().enumerate() {
        csv.push_str(&format!("c{i:02},{n}\n"));
    }
    let counts_path = dir.path().join("counts.csv");
    std::fs::write(&counts_path, csv).unwrap();

    run_ok(
        binary()
            .arg("weights")
            .arg("--counts-csv")
            .arg(&counts_path)
            .arg("--out-dir")
            .arg(dir.path()),
    );

    let written = std::fs::read_to_string(dir.path().join("weights.csv")).unwrap();
    let mut lines = written.lines();
    assert_eq!(lines.next(), Some("class_name,weight"));
    let values: Vec<f64> = lines
        .map(|line| line.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), expected.len());
    for (i, (&got, &want)) in values.iter().zip(&expected).enumerate() {
        assert!(
            (got - want).abs() <= 0.02,
            "weight {i}: got {got}, reference {want}"
        );
    }
    finish(
        1,
        "weight table reproduction",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_2_loss_reductions_are_bitwise_exact() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
    for _ in 0..1000 {
        let c = rng.random_range(2..8);
        let logits: Vec<f64> = (0..c).map(|_| rng.random_range(-6.0..6.0)).collect();
        let p = softmax(&logits).unwrap();
        let t = one_hot(rng.random_range(0..c), c).unwrap();
        let ce = ce_loss(&p, t);

        let w1 = ClassWeights::uniform(c);
        assert_eq!(wce_loss(&p, t, &w1).to_bits(), ce.to_bits());

        let counts: Vec<usize> = (0..c).map(|_| rng.random_range(1..2000)).collect();
        let cb = CbParams::new(0.0, &ClassCounts::new(counts).unwrap()).unwrap();
        assert_eq!(cb_loss(&p, t, &cb).to_bits(), ce.to_bits());

        let fl = FocalParams::new(0.0).unwrap();
        assert_eq!(focal_loss(&p, t, &fl).to_bits(), ce.to_bits());
    }
    finish(2, "loss reductions exact", started, Duration::from_secs(1));
}

fn numeric_grad(spec: &LossSpec, logits: &[f64], class: usize) -> Vec<f64> {
    const H: f64 = 1e-5;
    let t = one_hot(class, logits.len()).unwrap();
    (0..logits.len())
        .map(|j| {
            let mut plus = logits.to_vec();
            plus[j] += H;
            let mut minus = logits.to_vec();
            minus[j] -= H;
            (spec.loss(&softmax(&plus).unwrap(), t) - spec.loss(&softmax(&minus).unwrap(), t))
                / (2.0 * H)
        })
        .collect()
}

fn assert_grad_close(analytic: &[f64], numeric: &[f64], what: &str) {
    for (j, (&a, &n)) in analytic.iter().zip(numeric).enumerate() {
        let diff = (a - n).abs();
        if diff <= 1e-8 {
            continue;
        }
        let rel = diff / a.abs().max(n.abs());
        assert!(rel <= 1e-5, "{what}[{j}]: analytic {a} vs numeric {n}");
    }
}

#[test]
fn criterion_3_gradient_oracle() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x9AD);
    let c = 5;
    type SpecMaker = Box<dyn Fn(&mut ChaCha8Rng) -> LossSpec>;
    let specs: Vec<(&str, SpecMaker)> = vec![
        ("ce", Box::new(|_: &mut ChaCha8Rng| LossSpec::ce())),
        (
            "wce",
            Box::new(|rng: &mut ChaCha8Rng| {
                let w: Vec<f64> = (0..5).map(|_| rng.random_range(0.25..20.0)).collect();
                LossSpec::wce(classbench::explicit_weights(w).unwrap())
            }),
        ),
        (
            "cb",
            Box::new(|rng: &mut ChaCha8Rng| {
                let counts: Vec<usize> = (0..5).map(|_| rng.random_range(1..1200)).collect();
                let beta = [0.0, 0.25, 0.5, 0.9, 0.99, 0.999][rng.random_range(0..6)];
                LossSpec::class_balanced(
                    CbParams::new(beta, &ClassCounts::new(counts).unwrap()).unwrap(),
                )
            }),
        ),
        (
            "focal",
            Box::new(|rng: &mut ChaCha8Rng| {
                let gamma = [0.0, 0.5, 1.0, 2.0, 3.0, 5.0][rng.random_range(0..6)];
                LossSpec::focal(FocalParams::new(gamma).unwrap())
            }),
        ),
    ];
    for (name, make) in &specs {
        for case in 0..100 {
            let spec = make(&mut rng);
            let logits: Vec<f64> = (0..c).map(|_| rng.random_range(-2.0..2.0)).collect();
            let class = rng.random_range(0..c);
            let analytic = loss_grad_logits(&spec, &logits, one_hot(class, c).unwrap()).unwrap();
            let numeric = numeric_grad(&spec, &logits, class);
            assert_grad_close(&analytic, &numeric, &format!("{name} case {case}"));
        }
    }

    // Full-model backward against finite differences on every parameter.
    const H: f64 = 1e-5;
    for seed in 0..12u64 {
        let arch = ModelArch {
            input_dim: 4,
            hidden_dim: if seed % 2 == 0 { 5 } else { 0 },
            output_dim: 3,
            freeze_body: false,
        };
        let model = init_model(&arch, seed).unwrap();
        let input: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
        let class = rng.random_range(0..3);
        let t = one_hot(class, 3).unwrap();
        let spec = LossSpec::ce();
        let (logits, _) = model.forward(&input).unwrap();
        let analytic = model
            .backward(&input, &loss_grad_logits(&spec, &logits, t).unwrap())
            .unwrap();
        let analytic_flat: Vec<f64> = analytic.iter().copied().collect();
        for (k, &a) in analytic_flat.iter().enumerate() {
            let eval = |delta: f64| {
                let mut params = model.params().clone();
                *params.iter_mut().nth(k).unwrap() += delta;
                let m = classbench::model::Model::from_params(arch, params).unwrap();
                let (z, _) = m.forward(&input).unwrap();
                spec.loss(&softmax(&z).unwrap(), t)
            };
            let numeric = (eval(H) - eval(-H)) / (2.0 * H);
            assert_grad_close(&[a], &[numeric], &format!("model seed {seed} param {k}"));
        }
    }
    finish(3, "gradient oracle", started, Duration::from_secs(10));
}

#[test]
fn criterion_4_micro_f1_identity() {
    let started = Instant::now();
    // Exhaustive sweep over all CxC matrices with entries <= 4.
    let sweep = |c: usize| {
        let cells = c * c;
        let mut counts = vec![0u64; cells];
        let mut cm = ConfusionMatrix::zeros(c);
        loop {
            if counts.iter().any(|&v| v > 0) {
                let f1 = micro_f1(&cm).unwrap();
                let acc = cm.trace() as f64 / cm.total() as f64;
                assert_eq!(f1.to_bits(), acc.to_bits(), "counts {counts:?}");
            }
            // base-5 odometer
            let mut i = 0;
            loop {
                if i == cells {
                    return;
                }
                counts[i] += 1;
                if counts[i] <= 4 {
                    cm.set_count(i / c, i % c, counts[i]);
                    break;
                }
                counts[i] = 0;
                cm.set_count(i / c, i % c, 0);
                i += 1;
            }
        }
    };
    sweep(2);
    sweep(3);

    // 1000 random prediction sets.
    let mut rng = ChaCha8Rng::seed_from_u64(0xF1);
    for _ in 0..1000 {
        let c = rng.random_range(2..7);
        let n = rng.random_range(1..120);
        let preds: Vec<usize> = (0..n).map(|_| rng.random_range(0..c)).collect();
        let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..c)).collect();
        let cm = confusion_matrix(&preds, &labels, c).unwrap();
        let acc = cm.trace() as f64 / cm.total() as f64;
        assert_eq!(micro_f1(&cm).unwrap().to_bits(), acc.to_bits());
    }
    finish(4, "micro-F1 identity", started, Duration::from_secs(5));
}

#[test]
fn criterion_5_weighted_loss_recovers_minority_recall() {
    let started = Instant::now();
    let ds = gaussian_blobs(&imbalance_benchmark_blobs()).unwrap();
    assert_eq!(ds.counts().counts(), &[500, 400, 300, 50, 20]);
    let minority = 4;
    let arch = ModelArch {
        input_dim: ds.input_dim(),
        hidden_dim: 0,
        output_dim: ds.num_classes(),
        freeze_body: false,
    };
    let weights = inverse_proportion_weights(ds.counts());

    let mut recall_gains = Vec::new();
    let mut f1_drops = Vec::new();
    for seed_r in replication_seeds(2024, 5) {
        let (train_set, val_set, test_set) =
            stratified_split(&ds, &SplitRatios::default(), seed_r).unwrap();
        let base = TrainConfig {
            epochs: 21,
            batch_size: 32,
            base_lr: 0.05,
            seed: seed_r,
            ..TrainConfig::default()
        };
        let mut ce_cfg = base.clone();
        ce_cfg.loss = LossSpec::ce();
        let mut wce_cfg = base;
        wce_cfg.loss = LossSpec::wce(weights.clone());

        let (model_ce, _) = train(&train_set, &val_set, &arch, &ce_cfg).unwrap();
        let (model_wce, _) = train(&train_set, &val_set, &arch, &wce_cfg).unwrap();
        let cm_ce = evaluate(&model_ce, &test_set).unwrap();
        let cm_wce = evaluate(&model_wce, &test_set).unwrap();

        recall_gains.push(per_class_recall(&cm_wce)[minority] - per_class_recall(&cm_ce)[minority]);
        f1_drops.push(micro_f1(&cm_ce).unwrap() - micro_f1(&cm_wce).unwrap());
    }
    let gain = median(recall_gains.clone());
    let drop = median(f1_drops.clone());
    assert!(
        gain >= 0.10,
        "median minority recall gain {gain} < 0.10 (gains {recall_gains:?})"
    );
    assert!(
        drop <= 0.05,
        "median micro-F1 drop {drop} > 0.05 (drops {f1_drops:?})"
    );
    finish(
        5,
        "minority recall under re-weighting",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_6_training_protocol_conformance() {
    let started = Instant::now();
    // 50-epoch learning-rate trace, exact.
    let mut spec = imbalance_benchmark_blobs();
    spec.counts = vec![30, 30, 30];
    spec.centers = None;
    spec.separation = 3.0;
    let ds = gaussian_blobs(&spec).unwrap();
    let arch = ModelArch {
        input_dim: ds.input_dim(),
        hidden_dim: 0,
        output_dim: ds.num_classes(),
        freeze_body: false,
    };
    let cfg = TrainConfig::default(); // 50 epochs, lr 0.001, step 7, factor 0.1
    assert_eq!(cfg.epochs, 50);
    let (train_set, val_set, _) = stratified_split(&ds, &SplitRatios::default(), 0).unwrap();
    let (_, history) = train(&train_set, &val_set, &arch, &cfg).unwrap();
    assert_eq!(history.epochs.len(), 50);
    for record in &history.epochs {
        let expected = match record.epoch / 7 {
            0 => 0.001,
            1 => 0.0001,
            2 => 0.00001,
            _ => lr_at(record.epoch, &cfg),
        };
        assert_eq!(
            record.lr.to_bits(),
            expected.to_bits(),
            "epoch {} lr {} != {expected}",
            record.epoch,
            record.lr
        );
        assert_eq!(record.lr.to_bits(), lr_at(record.epoch, &cfg).to_bits());
    }
    // Each decade is exactly one lr_factor multiple of the previous one.
    for k in 1..8 {
        assert_eq!(
            lr_at(7 * k, &cfg).to_bits(),
            (lr_at(7 * (k - 1), &cfg) * 0.1).to_bits()
        );
    }

    // Benchmark report: exactly 5 replication F1 values with mean ± sample std.
    let bench_cfg = TrainConfig {
        epochs: 5,
        base_lr: 0.05,
        ..TrainConfig::default()
    };
    assert_eq!(bench_cfg.replications, 5);
    let report = run_benchmark(&ds, &arch, &bench_cfg).unwrap();
    assert_eq!(report.replications, 5);
    assert_eq!(report.test_f1.len(), 5);
    assert_eq!(report.replication_seeds.len(), 5);
    let mean = report.test_f1.iter().sum::<f64>() / 5.0;
    let var = report
        .test_f1
        .iter()
        .map(|x| (x - mean).powi(2))
        .sum::<f64>()
        / 4.0;
    assert!((report.test_f1_mean - mean).abs() < 1e-15);
    assert!((report.test_f1_std - var.sqrt()).abs() < 1e-15);
    finish(
        6,
        "training protocol conformance",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_7_similarity_properties() {
    let started = Instant::now();
    // Orthogonal feature rays per class -> identity matrix within 1e-9.
    let c = 4;
    let mut samples = Vec::new();
    for label in 0..c {
        for k in 1..=6 {
            let mut v = vec![0.0; c];
            v[label] = k as f64;
            samples.push(Sample {
                input: Input::Features(v),
                label,
            });
        }
    }
    let names = (0..c).map(|i| format!("ray_{i}")).collect();
    let ds = LabeledDataset::new(samples, names).unwrap();
    let model = init_model(
        &ModelArch {
            input_dim: c,
            hidden_dim: 0,
            output_dim: c,
            freeze_body: false,
        },
        0,
    )
    .unwrap();
    let cfg = SimilarityConfig {
        pairs_per_cell: 30,
        seed: 5,
        ..SimilarityConfig::default()
    };
    let sm = similarity_matrix(&model, &ds, &cfg).unwrap();
    for a in 0..c {
        for b in 0..c {
            let expected = if a == b { 1.0 } else { 0.0 };
            assert!(
                (sm.get(a, b) - expected).abs() <= 1e-9,
                "cell ({a},{b}) = {}",
                sm.get(a, b)
            );
            assert!((-1.0..=1.0).contains(&sm.get(a, b)));
            assert_eq!(sm.get(a, b).to_bits(), sm.get(b, a).to_bits(), "symmetry");
        }
    }

    // Scale invariance under positive feature scaling.
    let scaled = LabeledDataset::new(
        ds.samples()
            .iter()
            .map(|s| Sample {
                input: Input::Features(s.input.as_slice().iter().map(|v| v * 37.5).collect()),
                label: s.label,
            })
            .collect(),
        ds.class_names().to_vec(),
    )
    .unwrap();
    let sm_scaled = similarity_matrix(&model, &scaled, &cfg).unwrap();
    for a in 0..c {
        for b in 0..c {
            assert!((sm.get(a, b) - sm_scaled.get(a, b)).abs() <= 1e-12);
        }
    }

    // Determinism per seed.
    let again = similarity_matrix(&model, &ds, &cfg).unwrap();
    assert_eq!(sm, again);
    finish(7, "similarity properties", started, Duration::from_secs(5));
}

/// Byte-compares every artifact except the run manifest; for benchmark
/// reports, the hardware-dependent timing fields are masked first.
fn assert_dirs_identical(a: &Path, b: &Path) {
    let list = |dir: &Path| -> Vec<PathBuf> {
        let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.file_name().unwrap() != "run_manifest.json")
            .collect();
        files.sort();
        files
    };
    let (files_a, files_b) = (list(a), list(b));
    assert_eq!(
        files_a
            .iter()
            .map(|p| p.file_name().unwrap())
            .collect::<Vec<_>>(),
        files_b
            .iter()
            .map(|p| p.file_name().unwrap())
            .collect::<Vec<_>>(),
        "artifact sets differ"
    );
    for (fa, fb) in files_a.iter().zip(&files_b) {
        let name = fa.file_name().unwrap().to_string_lossy();
        let read = |p: &Path| std::fs::read(p).unwrap();
        if name == "report.json" {
            let mask = |p: &Path| {
                let mut v: serde_json::Value =
                    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
                v["train_time_secs"] = 0.0.into();
                v["inference_ms"] = 0.0.into();
                v
            };
            assert_eq!(mask(fa), mask(fb), "report.json differs beyond timings");
        } else if name == "report.csv" {
            let mask = |p: &Path| {
                let text = std::fs::read_to_string(p).unwrap();
                let mut lines = text.lines();
                let header: Vec<&str> = lines.next().unwrap().split(',').collect();
                let row: Vec<String> = lines
                    .next()
                    .unwrap()
                    .split(',')
                    .zip(&header)
                    .map(|(v, h)| {
                        if h.contains("time") || h.contains("inference") {
                            "masked".to_string()
                        } else {
                            v.to_string()
                        }
                    })
                    .collect();
                row
            };
            assert_eq!(mask(fa), mask(fb), "report.csv differs beyond timings");
        } else {
            assert_eq!(read(fa), read(fb), "{name} differs between runs");
        }
    }
}

#[test]
fn criterion_8_cli_determinism() {
    let started = Instant::now();
    let root = tempfile::tempdir().unwrap();
    let data = root.path().join("data.csv");

    // Seed dataset once (itself checked for determinism below).
    run_ok(
        binary()
            .args(["synth", "--counts", "40,30,20", "--dim", "3", "--seed", "9"])
            .arg("--file")
            .arg("data.csv")
            .arg("--out-dir")
            .arg(root.path()),
    );

    let run_twice = |name: &str, build: &dyn Fn(&Path) -> Command| {
        let dir_a = root.path().join(format!("{name}_a"));
        let dir_b = root.path().join(format!("{name}_b"));
        run_ok(&mut build(&dir_a));
        run_ok(&mut build(&dir_b));
        assert_dirs_identical(&dir_a, &dir_b);
    };

    run_twice("synth", &|dir| {
        let mut c = binary();
        c.args(["synth", "--counts", "12,18", "--dim", "2", "--seed", "3"])
            .arg("--out-dir")
            .arg(dir);
        c
    });
    run_twice("split", &|dir| {
        let mut c = binary();
        c.arg("split")
            .arg("--data")
            .arg(&data)
            .args(["--seed", "11"])
            .arg("--out-dir")
            .arg(dir);
        c
    });
    run_twice("weights", &|dir| {
        let mut c = binary();
        c.arg("weights")
            .arg("--data")
            .arg(&data)
            .arg("--out-dir")
            .arg(dir);
        c
    });
    run_twice("train", &|dir| {
        let mut c = binary();
        c.arg("train")
            .arg("--data")
            .arg(&data)
            .args([
                "--epochs", "6", "--lr", "0.05", "--seed", "5", "--loss", "wce",
            ])
            .arg("--out-dir")
            .arg(dir);
        c
    });
    // A trained checkpoint for eval/similarity.
    let model_dir = root.path().join("train_a");
    run_twice("eval", &|dir| {
        let mut c = binary();
        c.arg("eval")
            .arg("--model")
            .arg(model_dir.join("model.json"))
            .arg("--data")
            .arg(&data)
            .args(["--subset", "test", "--split-seed", "5"])
            .arg("--out-dir")
            .arg(dir);
        c
    });
    run_twice("benchmark", &|dir| {
        let mut c = binary();
        c.arg("benchmark")
            .arg("--data")
            .arg(&data)
            .args([
                "--epochs",
                "4",
                "--lr",
                "0.05",
                "--seed",
                "2",
                "--replications",
                "3",
            ])
            .arg("--out-dir")
            .arg(dir);
        c
    });
    run_twice("similarity", &|dir| {
        let mut c = binary();
        c.arg("similarity")
            .arg("--model")
            .arg(model_dir.join("model.json"))
            .arg("--data")
            .arg(&data)
            .args(["--pairs", "7", "--seed", "13", "--subset", "all"])
            .arg("--out-dir")
            .arg(dir);
        c
    });
    finish(8, "CLI determinism", started, Duration::from_secs(60));
}

#[test]
fn criterion_9_split_conformance() {
    let started = Instant::now();
    // 100 per class -> exactly 65/20/15.
    let mut samples = Vec::new();
    for label in 0..4 {
        for k in 0..100 {
            samples.push(Sample {
                input: Input::Features(vec![label as f64, k as f64]),
                label,
            });
        }
    }
    let names = (0..4).map(|i| format!("c{i}")).collect();
    let ds = LabeledDataset::new(samples, names).unwrap();
    let (train_set, val_set, test_set) =
        stratified_split(&ds, &SplitRatios::default(), 42).unwrap();
    assert_eq!(train_set.counts().counts(), &[65; 4]);
    assert_eq!(val_set.counts().counts(), &[20; 4]);
    assert_eq!(test_set.counts().counts(), &[15; 4]);

    // Floor rule for every class size 3..=200, against integer arithmetic.
    // Sizes whose floor rule would empty a subset must error instead.
    for n in 3usize..=200 {
        let mut samples = Vec::new();
        for k in 0..n {
            samples.push(Sample {
                input: Input::Features(vec![k as f64]),
                label: 0,
            });
        }
        for k in 0..200 {
            samples.push(Sample {
                input: Input::Features(vec![k as f64]),
                label: 1,
            });
        }
        let ds = LabeledDataset::new(samples, vec!["small".into(), "big".into()]).unwrap();
        let expected_train = n * 65 / 100;
        let expected_val = n * 20 / 100;
        let expected_test = n - expected_train - expected_val;
        let result = stratified_split_indices(&ds, &SplitRatios::default(), n as u64);
        if expected_train == 0 || expected_val == 0 || expected_test == 0 {
            assert!(result.is_err(), "size {n} should fail to populate a subset");
            continue;
        }
        let idx = result.unwrap();
        let count = |ids: &[usize]| ids.iter().filter(|&&i| ds.samples()[i].label == 0).count();
        assert_eq!(count(&idx.train), expected_train, "train size for n={n}");
        assert_eq!(count(&idx.val), expected_val, "val size for n={n}");
        assert_eq!(count(&idx.test), expected_test, "test size for n={n}");
    }
    finish(9, "split conformance", started, Duration::from_secs(5));
}
