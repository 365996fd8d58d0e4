use crate::config::{DataSource, ExperimentSpec, GammaSpec, Variant};
use crate::logging::{Level, RunLog};
use crate::plot::emit_scatter;
use crate::CliError;
use kiae::data::{generate_synthetic, load_csv, split, Dataset, SplitSpec};
use kiae::eval::{
    centroid_report, evaluate, pca_project, setcover_subsample, ward_cluster, ClusterAssignment,
    EvalReport, SplitTag,
};
use kiae::knowledge::{build_from_labels, corrupt_noisy, GammaTable, KnowledgeMatrix};
use kiae::model::{train, KiaeConfig, KiaeModel, LatentEmbedding};
use kiae::numerics::{Matrix, RngState};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

/// Seed stream tags for the independently derived randomness of each stage.
const TAG_DATA: u64 = 0x4441_5441;
const TAG_SPLIT: u64 = 0x5350_4c54;
const TAG_KNOWLEDGE: u64 = 0x4b4e_4f57;
const TAG_NOISE: u64 = 0x4e4f_4953;

/// One line of `results.csv`.
#[derive(Debug, Clone)]
pub struct ResultRow {
    pub dataset: String,
    pub variant: Variant,
    pub split: SplitTag,
    pub misclassification: f64,
}

#[derive(Debug)]
pub struct ExperimentOutcome {
    pub results: Vec<ResultRow>,
    /// Variants that aborted, with the logged reason.
    pub failures: Vec<(Variant, String)>,
    pub out_dir: PathBuf,
}

impl ExperimentOutcome {
    /// True when every requested variant completed.
    pub fn all_completed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Resolve the dataset a spec points at (seeded generation or CSV load).
pub fn load_dataset(spec: &ExperimentSpec) -> Result<Dataset, CliError> {
    match &spec.source {
        DataSource::Synthetic {
            profile,
            n,
            d,
            k,
            separation,
        } => {
            let mut rng = RngState::new(spec.seed).derive(TAG_DATA);
            Ok(generate_synthetic(
                *profile,
                *n,
                *d,
                *k,
                *separation,
                &mut rng,
            )?)
        }
        DataSource::Csv { path, label_column } => Ok(load_csv(path, Some(label_column.as_str()))?),
    }
}

fn gamma_table(gamma: &GammaSpec, k: usize) -> Result<GammaTable, CliError> {
    // Config pairs are 1-based.
    let pairs: Vec<(usize, usize, f64)> = gamma
        .pairs
        .iter()
        .map(|&(x, y, g)| (x - 1, y - 1, g))
        .collect();
    Ok(GammaTable::with_pairs(
        k,
        gamma.alpha1,
        gamma.alpha2,
        gamma.default_gamma,
        &pairs,
    )?)
}

fn variant_config(base: &KiaeConfig, variant: Variant) -> KiaeConfig {
    let mut cfg = base.clone();
    if variant == Variant::Ae {
        cfg.omega1 = 1.0;
        cfg.omega2 = 0.0;
    }
    cfg
}

/// Run the requested variant x split grid, emit the artifact files, and
/// return the score table. A failing variant is logged and skipped; the
/// others continue. Fully deterministic under `spec.seed`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutcome, CliError> {
    fs::create_dir_all(&spec.out_dir).map_err(|source| CliError::Io {
        path: spec.out_dir.clone(),
        source,
    })?;
    // Every referenced path must resolve before any training starts.
    if let DataSource::Csv { path, .. } = &spec.source {
        if !path.exists() {
            return Err(CliError::Usage(format!(
                "dataset file {} does not exist",
                path.display()
            )));
        }
    }
    let mut log =
        RunLog::to_file(&spec.out_dir.join("run.log"), Level::from_env()).map_err(|source| {
            CliError::Io {
                path: spec.out_dir.join("run.log"),
                source,
            }
        })?;

    let ds = load_dataset(spec)?;
    let k = ds.class_count();
    if k < 2 {
        return Err(CliError::Usage(
            "experiments need a labeled dataset with at least 2 classes".into(),
        ));
    }
    let mut base_cfg = spec.model.clone();
    base_cfg.input_dim = ds.dim();
    base_cfg.seed = spec.seed;
    base_cfg.validate()?;
    log.info(&format!(
        "dataset {}: n={} d={} K={k}",
        spec.name,
        ds.len(),
        ds.dim()
    ));

    let needs_split = spec
        .splits
        .iter()
        .any(|s| matches!(s, SplitTag::Train | SplitTag::Test));
    let split_res = if needs_split {
        let seed = RngState::new(spec.seed).derive(TAG_SPLIT).seed();
        let sr = split(&ds, &SplitSpec::train_test(seed))?;
        log.info(&format!(
            "split: {} train / {} test, {} folds",
            sr.train.len(),
            sr.test.len(),
            sr.folds.len()
        ));
        Some(sr)
    } else {
        None
    };

    let mut results = Vec::new();
    let mut failures = Vec::new();
    for &variant in &spec.variants {
        match run_variant(spec, &ds, &base_cfg, split_res.as_ref(), variant, &mut log) {
            Ok(mut rows) => results.append(&mut rows),
            Err(e) => {
                let reason = e.to_string();
                log.line(
                    Level::Quiet,
                    &format!("variant {} aborted: {reason}", variant.name()),
                );
                failures.push((variant, reason));
            }
        }
    }

    write_results_csv(&spec.out_dir.join("results.csv"), &results)?;
    log.info(&format!(
        "wrote {}",
        spec.out_dir.join("results.csv").display()
    ));
    log.flush();

    Ok(ExperimentOutcome {
        results,
        failures,
        out_dir: spec.out_dir.clone(),
    })
}

struct Emission {
    priority: u8,
    embedding: LatentEmbedding,
    assignment: ClusterAssignment,
    report: EvalReport,
    labels: Vec<usize>,
}

fn run_variant(
    spec: &ExperimentSpec,
    ds: &Dataset,
    base_cfg: &KiaeConfig,
    split_res: Option<&kiae::data::SplitResult>,
    variant: Variant,
    log: &mut RunLog,
) -> Result<Vec<ResultRow>, CliError> {
    let n = ds.len();
    let k = ds.class_count();
    let mt = match variant {
        // The ae variant never reads the matrix (omega2 = 0); a trivial
        // fully-known matrix keeps the training call uniform.
        Variant::Ae => KnowledgeMatrix::zeros(n),
        Variant::Kiae => {
            let table = gamma_table(&spec.gamma, k)?;
            let mut rng = RngState::new(spec.seed).derive(TAG_KNOWLEDGE);
            build_from_labels(ds, &table, &mut rng)?
        }
        Variant::NoisyKiae => {
            let mut rng = RngState::new(spec.seed).derive(TAG_NOISE);
            corrupt_noisy(n, &mut rng)?
        }
    };
    log.info(&format!(
        "variant {}: knowledge matrix ready",
        variant.name()
    ));
    let cfg = variant_config(base_cfg, variant);

    let mut rows = Vec::new();
    let mut emission: Option<Emission> = None;
    let consider = |candidate: Emission, slot: &mut Option<Emission>| {
        let better = slot
            .as_ref()
            .is_none_or(|held| candidate.priority < held.priority);
        if better {
            *slot = Some(candidate);
        }
    };

    for &split_tag in &spec.splits {
        match split_tag {
            SplitTag::Fit => {
                let (model, history) = train(&cfg, ds, &mt)?;
                log_history(log, variant, split_tag, &history);
                let emb = model.encode(ds)?;
                let labels = ds.labels().unwrap().to_vec();
                let (report, assignment) = evaluate(&emb, &labels, split_tag)?;
                log.info(&format!(
                    "variant {} split fit: misclassification={}",
                    variant.name(),
                    report.misclassification
                ));
                rows.push(ResultRow {
                    dataset: spec.name.clone(),
                    variant,
                    split: split_tag,
                    misclassification: report.misclassification,
                });
                consider(
                    Emission {
                        priority: 0,
                        embedding: emb,
                        assignment,
                        report,
                        labels,
                    },
                    &mut emission,
                );
            }
            SplitTag::Test => {
                let sr = split_res.expect("split computed for test");
                let mt_train = mt.subset(&sr.train_indices)?;
                let (model, history) = train(&cfg, &sr.train, &mt_train)?;
                log_history(log, variant, split_tag, &history);
                let emb = model.encode(&sr.test)?;
                let labels = sr.test.labels().unwrap().to_vec();
                let (report, assignment) = evaluate(&emb, &labels, split_tag)?;
                log.info(&format!(
                    "variant {} split test: misclassification={}",
                    variant.name(),
                    report.misclassification
                ));
                rows.push(ResultRow {
                    dataset: spec.name.clone(),
                    variant,
                    split: split_tag,
                    misclassification: report.misclassification,
                });
                consider(
                    Emission {
                        priority: 1,
                        embedding: emb,
                        assignment,
                        report,
                        labels,
                    },
                    &mut emission,
                );
            }
            SplitTag::Train => {
                let sr = split_res.expect("split computed for train");
                let mt_train = mt.subset(&sr.train_indices)?;
                let mut rates = Vec::new();
                for (f, (fold_train_idx, fold_val_idx)) in sr.folds.iter().enumerate() {
                    let fold_train = sr.train.subset(fold_train_idx)?;
                    let fold_val = sr.train.subset(fold_val_idx)?;
                    let fold_mt = mt_train.subset(fold_train_idx)?;
                    let (model, _) = train(&cfg, &fold_train, &fold_mt)?;
                    let emb = model.encode(&fold_val)?;
                    let labels = fold_val.labels().unwrap().to_vec();
                    let (report, _) = evaluate(&emb, &labels, split_tag)?;
                    log.debug(&format!(
                        "variant {} fold {f}: misclassification={}",
                        variant.name(),
                        report.misclassification
                    ));
                    rates.push(report.misclassification);
                }
                let mean = rates.iter().sum::<f64>() / rates.len() as f64;
                log.info(&format!(
                    "variant {} split train: mean misclassification={mean} over {} folds",
                    variant.name(),
                    rates.len()
                ));
                rows.push(ResultRow {
                    dataset: spec.name.clone(),
                    variant,
                    split: split_tag,
                    misclassification: mean,
                });
            }
        }
    }

    // Artifact emission: prefer the fit model over the test model; with only
    // the train split requested, train once on the train set and emit that.
    let emission = match emission {
        Some(e) => e,
        None => {
            let sr = split_res.expect("train split requested");
            let mt_train = mt.subset(&sr.train_indices)?;
            let (model, _) = train(&cfg, &sr.train, &mt_train)?;
            let emb = model.encode(&sr.train)?;
            let labels = sr.train.labels().unwrap().to_vec();
            let (report, assignment) = evaluate(&emb, &labels, SplitTag::Train)?;
            Emission {
                priority: 2,
                embedding: emb,
                assignment,
                report,
                labels,
            }
        }
    };
    emit_artifacts(spec, variant, &emission, log)?;
    Ok(rows)
}

fn log_history(log: &mut RunLog, variant: Variant, split: SplitTag, history: &[f64]) {
    for (epoch, loss) in history.iter().enumerate() {
        log.debug(&format!(
            "variant {} split {} epoch {}/{} mean_loss={loss}",
            variant.name(),
            split.name(),
            epoch + 1,
            history.len()
        ));
    }
}

fn emit_artifacts(
    spec: &ExperimentSpec,
    variant: Variant,
    emission: &Emission,
    log: &mut RunLog,
) -> Result<(), CliError> {
    let dir = &spec.out_dir;
    let emb = &emission.embedding;

    write_embedding_csv(
        &dir.join(format!("embedding_{}.csv", variant.name())),
        emb,
        &emission.labels,
    )?;
    write_centroids_csv(
        &dir.join(format!("centroids_{}.csv", variant.name())),
        &emission.report,
    )?;

    // Scatter: PCA on the full embedding, farthest-first cohort of <= 90.
    let projected = project_2d(emb.vectors())?;
    let cohort: Vec<usize> = if emb.len() > 90 {
        setcover_subsample(emb.vectors(), 90)?
    } else {
        (0..emb.len()).collect()
    };
    let mut rows = Vec::with_capacity(cohort.len());
    let mut pred = Vec::with_capacity(cohort.len());
    let mut labels = Vec::with_capacity(cohort.len());
    for &i in &cohort {
        rows.push(projected.row(i).to_vec());
        pred.push(emission.assignment.cluster_of()[i]);
        labels.push(emission.labels[i]);
    }
    let points2d = Matrix::from_rows(&rows).map_err(kiae::eval::EvalError::from)?;
    // Projection is linear after centering, so projected cluster means are
    // exactly the projected centroids.
    let k = emission.report.centroids.rows();
    let mut centroids2d = Matrix::zeros(k, 2);
    let mut counts = vec![0usize; k];
    for (i, &c) in emission.assignment.cluster_of().iter().enumerate() {
        counts[c] += 1;
        for j in 0..2 {
            centroids2d.set(c, j, centroids2d.get(c, j) + projected.get(i, j));
        }
    }
    for c in 0..k {
        for j in 0..2 {
            centroids2d.set(c, j, centroids2d.get(c, j) / counts[c].max(1) as f64);
        }
    }
    emit_scatter(
        &points2d,
        &pred,
        &labels,
        &centroids2d,
        &emission.report.centroid_distances,
        &dir.join(format!("scatter_{}.svg", variant.name())),
    )?;
    log.info(&format!(
        "variant {}: wrote embedding, centroids, scatter ({} cohort points)",
        variant.name(),
        cohort.len()
    ));
    Ok(())
}

/// Two-dimensional PCA view; rank-one latents get a zero second column.
fn project_2d(vectors: &Matrix) -> Result<Matrix, CliError> {
    if vectors.cols() >= 2 {
        let (projected, _) = pca_project(vectors, 2)?;
        Ok(projected)
    } else {
        let mut out = Matrix::zeros(vectors.rows(), 2);
        for i in 0..vectors.rows() {
            out.set(i, 0, vectors.get(i, 0));
        }
        Ok(out)
    }
}

fn write_results_csv(path: &Path, rows: &[ResultRow]) -> Result<(), CliError> {
    let mut out = String::from("dataset,variant,split,misclassification\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            row.dataset,
            row.variant.name(),
            row.split.name(),
            row.misclassification
        );
    }
    fs::write(path, out).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Embedding CSV: `z0..z{r-1},label` with dense numeric label indices, so
/// the file re-parses both with and without a label column.
pub fn write_embedding_csv(
    path: &Path,
    emb: &LatentEmbedding,
    labels: &[usize],
) -> Result<(), CliError> {
    let r = emb.dim();
    let mut header: Vec<String> = (0..r).map(|j| format!("z{j}")).collect();
    let labeled = labels.len() == emb.len();
    if labeled {
        header.push("label".to_string());
    }
    let mut out = header.join(",");
    out.push('\n');
    for i in 0..emb.len() {
        let mut cells: Vec<String> = emb.vector(i).iter().map(|v| v.to_string()).collect();
        if labeled {
            cells.push(labels[i].to_string());
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    fs::write(path, out).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_centroids_csv(path: &Path, report: &EvalReport) -> Result<(), CliError> {
    let k = report.centroids.rows();
    let r = report.centroids.cols();
    let mut header: Vec<String> = vec!["cluster".to_string()];
    header.extend((0..r).map(|j| format!("z{j}")));
    header.extend((0..k).map(|c| format!("d{c}")));
    let mut out = header.join(",");
    out.push('\n');
    for c in 0..k {
        let mut cells = vec![c.to_string()];
        cells.extend(report.centroids.row(c).iter().map(|v| v.to_string()));
        cells.extend(
            report
                .centroid_distances
                .row(c)
                .iter()
                .map(|v| v.to_string()),
        );
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    fs::write(path, out).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Evaluate a standalone embedding file against labels (the `evaluate`
/// subcommand): Ward clustering, misclassification, centroid table.
pub fn evaluate_embedding(
    emb: &LatentEmbedding,
    labels: &[usize],
) -> Result<(EvalReport, ClusterAssignment), CliError> {
    let k = labels.iter().copied().max().map_or(0, |m| m + 1);
    if k < 2 {
        return Err(CliError::Usage(
            "evaluation needs at least 2 classes".into(),
        ));
    }
    let assignment = ward_cluster(emb.vectors(), k)?.with_ids(emb.sample_ids().to_vec())?;
    let (rate, map) = kiae::eval::misclassification(&assignment, emb.sample_ids(), labels)?;
    let rep = centroid_report(emb, &assignment)?;
    Ok((
        EvalReport {
            misclassification: rate,
            best_label_map: map,
            centroids: rep.centroids,
            centroid_distances: rep.distances,
            split: SplitTag::Fit,
        },
        assignment,
    ))
}

/// The initial model parameters a spec implies; identical for every variant
/// under the same seed, which isolates the loss as the only difference
/// between the ae and kiae runs.
pub fn initial_model(spec: &ExperimentSpec, input_dim: usize) -> Result<KiaeModel, CliError> {
    let mut cfg = spec.model.clone();
    cfg.input_dim = input_dim;
    cfg.seed = spec.seed;
    Ok(KiaeModel::new(cfg)?)
}
