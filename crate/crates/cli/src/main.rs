use kiae::data::{generate_synthetic, load_csv, Dataset, SyntheticProfile};
use kiae::eval::pca_project;
use kiae::knowledge::{
    build_from_labels, corrupt_noisy, fill_missing_dr, load_knowledge_csv, save_knowledge_csv,
    GammaTable, KnowledgeMatrix, PairMetricSet,
};
use kiae::model::{train, KiaeModel, LatentEmbedding};
use kiae::numerics::{Matrix, RngState};
use kiae_cli::config::{parse_config, DataSource, ExperimentSpec, Variant};
use kiae_cli::experiment::{evaluate_embedding, run_experiment, write_embedding_csv};
use kiae_cli::{emit_scatter, CliError};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const USAGE: &str = "\
kiae - knowledge-integrated autoencoder experiments

USAGE:
    kiae <subcommand> [flags]

SUBCOMMANDS:
    generate    Write a synthetic labeled dataset as CSV
                --synthetic <economics_like|physics_like|biology_like>
                [--n N] [--d D] [--clusters K] [--separation S]
                [--seed U64] --out <data.csv>
    knowledge   Build, complete, or corrupt a knowledge-matrix CSV
                build:   --data <csv> [--label-column NAME] [--alpha1 A]
                         [--alpha2 B] [--gamma-default G]
                         [--gamma X,Y,G]... [--seed U64] --out <mt.csv>
                fill:    --data <csv> [--label-column NAME] --in <mt.csv>
                         [--k-neighbors K] --out <mt.csv>
                corrupt: --n N [--seed U64] --out <mt.csv>
    train       Train one model and write a checkpoint
                --data <csv> [--label-column NAME] [--knowledge <mt.csv>]
                [--config <cfg>] [--seed U64] [--epochs N]
                [--omega1 W] [--omega2 W] --out <model.ckpt>
    encode      Encode a dataset with a trained model
                --model <model.ckpt> --data <csv> [--label-column NAME]
                --out <embedding.csv>
    evaluate    Ward-cluster an embedding and score it against labels
                --embedding <csv> --data <csv> --label-column NAME
                [--out <report.csv>]
    experiment  Run the variant comparison described by a config file
                --config <cfg> [--seed U64] [--out DIR]
                [--variant NAME]... [--data <csv> | --synthetic <profile>]
    plot        PCA scatter of an embedding (predicted color, true shape)
                --embedding <csv> --data <csv> --label-column NAME
                [--subsample M] --out <scatter.svg>

Defaults for every model hyperparameter are documented in the README; the
environment variable KIAE_LOG (quiet|info|debug) controls verbosity.
";

#[derive(Default)]
struct Args {
    positional: Vec<String>,
    flags: BTreeMap<String, Vec<String>>,
}

impl Args {
    fn parse(argv: &[String]) -> Result<Args, CliError> {
        let mut positional = Vec::new();
        let mut flags: BTreeMap<String, Vec<String>> = BTreeMap::new();
        let mut it = argv.iter().peekable();
        while let Some(arg) = it.next() {
            if let Some(name) = arg.strip_prefix("--") {
                if let Some((key, value)) = name.split_once('=') {
                    flags
                        .entry(key.to_string())
                        .or_default()
                        .push(value.to_string());
                } else {
                    let value = it
                        .next()
                        .ok_or_else(|| CliError::Usage(format!("flag --{name} needs a value")))?;
                    flags
                        .entry(name.to_string())
                        .or_default()
                        .push(value.clone());
                }
            } else {
                positional.push(arg.clone());
            }
        }
        Ok(Args { positional, flags })
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.flags.remove(key).and_then(|mut v| v.pop())
    }

    fn take_all(&mut self, key: &str) -> Vec<String> {
        self.flags.remove(key).unwrap_or_default()
    }

    fn require(&mut self, key: &str) -> Result<String, CliError> {
        self.take(key)
            .ok_or_else(|| CliError::Usage(format!("missing required flag --{key}")))
    }

    fn parsed<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("cannot parse --{key} value \"{v}\""))),
        }
    }

    fn finish(self) -> Result<(), CliError> {
        if let Some(key) = self.flags.keys().next() {
            return Err(CliError::Usage(format!("unknown flag --{key}")));
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    if argv.is_empty() || argv[0] == "--help" || argv[0] == "help" {
        print!("{USAGE}");
        return ExitCode::SUCCESS;
    }
    match dispatch(&argv) {
        Ok(code) => code,
        Err(e @ (CliError::Usage(_) | CliError::Config(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(argv: &[String]) -> Result<ExitCode, CliError> {
    let mut args = Args::parse(&argv[1..])?;
    match argv[0].as_str() {
        "generate" => cmd_generate(&mut args)?,
        "knowledge" => cmd_knowledge(&mut args)?,
        "train" => cmd_train(&mut args)?,
        "encode" => cmd_encode(&mut args)?,
        "evaluate" => cmd_evaluate(&mut args)?,
        "experiment" => return cmd_experiment(&mut args),
        "plot" => cmd_plot(&mut args)?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown subcommand \"{other}\" (run kiae --help)"
            )))
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn load_labeled(args: &mut Args) -> Result<(Dataset, PathBuf), CliError> {
    let data = args.require("data")?;
    let label_column = args.take("label-column");
    let path = PathBuf::from(&data);
    let ds = load_csv(&path, label_column.as_deref())?;
    Ok((ds, path))
}

fn cmd_generate(args: &mut Args) -> Result<(), CliError> {
    let profile_name = args.require("synthetic")?;
    let profile = SyntheticProfile::parse(&profile_name)
        .ok_or_else(|| CliError::Usage(format!("unknown synthetic profile \"{profile_name}\"")))?;
    let (dn, dd, dk) = profile.default_shape();
    let n = args.parsed::<usize>("n")?.unwrap_or(dn);
    let d = args.parsed::<usize>("d")?.unwrap_or(dd);
    let k = args.parsed::<usize>("clusters")?.unwrap_or(dk);
    let separation = args.parsed::<f64>("separation")?.unwrap_or(4.0);
    let seed = args.parsed::<u64>("seed")?;
    let out = PathBuf::from(args.require("out")?);
    std::mem::take(args).finish()?;
    let mut rng = match seed {
        Some(s) => RngState::new(s),
        None => RngState::from_entropy(),
    };
    let ds = generate_synthetic(profile, n, d, k, separation, &mut rng)?;
    kiae::data::save_csv(&ds, &out)?;
    println!(
        "wrote {} ({n} samples, {d} features, {k} classes)",
        out.display()
    );
    Ok(())
}

fn cmd_knowledge(args: &mut Args) -> Result<(), CliError> {
    let mode =
        args.positional.first().cloned().ok_or_else(|| {
            CliError::Usage("knowledge needs a mode: build, fill, or corrupt".into())
        })?;
    let out = PathBuf::from(args.require("out")?);
    let mt = match mode.as_str() {
        "build" => {
            let (ds, _) = load_labeled(args)?;
            let alpha1 = args.parsed::<f64>("alpha1")?.unwrap_or(0.0);
            let alpha2 = args.parsed::<f64>("alpha2")?.unwrap_or(1.0);
            let default_gamma = args.parsed::<f64>("gamma-default")?.unwrap_or(1.0);
            let mut pairs = Vec::new();
            for spec in args.take_all("gamma") {
                let parts: Vec<&str> = spec.split(',').collect();
                if parts.len() != 3 {
                    return Err(CliError::Usage(format!(
                        "--gamma expects X,Y,VALUE with 1-based categories, got \"{spec}\""
                    )));
                }
                let x: usize = parts[0]
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad category in --gamma \"{spec}\"")))?;
                let y: usize = parts[1]
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad category in --gamma \"{spec}\"")))?;
                let g: f64 = parts[2]
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad value in --gamma \"{spec}\"")))?;
                if x == 0 || y == 0 {
                    return Err(CliError::Usage("--gamma categories are 1-based".into()));
                }
                pairs.push((x - 1, y - 1, g));
            }
            let seed = args.parsed::<u64>("seed")?;
            let table =
                GammaTable::with_pairs(ds.class_count(), alpha1, alpha2, default_gamma, &pairs)?;
            let mut rng = match seed {
                Some(s) => RngState::new(s),
                None => RngState::from_entropy(),
            };
            build_from_labels(&ds, &table, &mut rng)?
        }
        "fill" => {
            let input = PathBuf::from(args.require("in")?);
            let (ds, _) = load_labeled(args)?;
            let k_neighbors = args.parsed::<usize>("k-neighbors")?.unwrap_or(5);
            let partial = load_knowledge_csv(&input)?;
            fill_missing_dr(&partial, &ds, &PairMetricSet::defaults(), k_neighbors)?
        }
        "corrupt" => {
            let n = args
                .parsed::<usize>("n")?
                .ok_or_else(|| CliError::Usage("corrupt needs --n".into()))?;
            let seed = args.parsed::<u64>("seed")?;
            let mut rng = match seed {
                Some(s) => RngState::new(s),
                None => RngState::from_entropy(),
            };
            corrupt_noisy(n, &mut rng)?
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown knowledge mode \"{other}\" (expected build, fill, corrupt)"
            )))
        }
    };
    args.positional.clear();
    std::mem::take(args).finish()?;
    save_knowledge_csv(&mt, &out)?;
    println!("wrote {} ({}x{})", out.display(), mt.len(), mt.len());
    Ok(())
}

fn cmd_train(args: &mut Args) -> Result<(), CliError> {
    let out = PathBuf::from(args.require("out")?);
    let knowledge = args.take("knowledge").map(PathBuf::from);
    let config_path = args.take("config").map(PathBuf::from);
    let seed = args.parsed::<u64>("seed")?;
    let epochs = args.parsed::<usize>("epochs")?;
    let omega1 = args.parsed::<f64>("omega1")?;
    let omega2 = args.parsed::<f64>("omega2")?;
    let (ds, _) = load_labeled(args)?;
    std::mem::take(args).finish()?;

    let mut cfg = match &config_path {
        Some(p) => parse_config(p)?.model,
        None => kiae::model::KiaeConfig::new(1),
    };
    cfg.input_dim = ds.dim();
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(e) = epochs {
        cfg.epochs = e;
    }
    match (omega1, omega2) {
        (Some(w1), None) => {
            cfg.omega1 = w1;
            cfg.omega2 = 1.0 - w1;
        }
        (None, Some(w2)) => {
            cfg.omega2 = w2;
            cfg.omega1 = 1.0 - w2;
        }
        (Some(w1), Some(w2)) => {
            cfg.omega1 = w1;
            cfg.omega2 = w2;
        }
        (None, None) => {
            // Without a knowledge file there is nothing for the distance
            // term to match; default to the plain reconstruction objective.
            if knowledge.is_none() && config_path.is_none() {
                cfg.omega1 = 1.0;
                cfg.omega2 = 0.0;
            }
        }
    }

    let mt = match &knowledge {
        Some(p) => load_knowledge_csv(p)?,
        None => KnowledgeMatrix::zeros(ds.len()),
    };
    let (model, history) = train(&cfg, &ds, &mt)?;
    model.save(&out)?;
    if let Some(last) = history.last() {
        println!(
            "trained {} epochs, final mean loss {last}; wrote {}",
            history.len(),
            out.display()
        );
    } else {
        println!("wrote untrained model to {}", out.display());
    }
    Ok(())
}

fn cmd_encode(args: &mut Args) -> Result<(), CliError> {
    let model_path = PathBuf::from(args.require("model")?);
    let out = PathBuf::from(args.require("out")?);
    let (ds, _) = load_labeled(args)?;
    std::mem::take(args).finish()?;
    let model = KiaeModel::load(&model_path)?;
    let emb = model.encode(&ds)?;
    let labels: Vec<usize> = ds.labels().map(|l| l.to_vec()).unwrap_or_default();
    write_embedding_csv(&out, &emb, &labels)?;
    println!("wrote {} ({} x {})", out.display(), emb.len(), emb.dim());
    Ok(())
}

fn load_embedding(path: &Path) -> Result<LatentEmbedding, CliError> {
    // Embedding files written by this tool carry a trailing label column;
    // plain numeric matrices load as unlabeled.
    let header = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?
        .lines()
        .next()
        .unwrap_or_default()
        .to_string();
    let has_label = header.split(',').any(|c| c.trim() == "label");
    let ds = load_csv(path, if has_label { Some("label") } else { None })?;
    Ok(LatentEmbedding::new(
        ds.sample_ids().to_vec(),
        ds.features().clone(),
    )?)
}

fn cmd_evaluate(args: &mut Args) -> Result<(), CliError> {
    let emb_path = PathBuf::from(args.require("embedding")?);
    let out = args.take("out").map(PathBuf::from);
    let (ds, _) = load_labeled(args)?;
    std::mem::take(args).finish()?;
    let labels = ds
        .labels()
        .ok_or_else(|| CliError::Usage("evaluate needs a labeled dataset".into()))?;
    let emb = load_embedding(&emb_path)?;
    if emb.len() != ds.len() {
        return Err(CliError::Usage(format!(
            "embedding has {} rows but the dataset has {}",
            emb.len(),
            ds.len()
        )));
    }
    let (report, _) = evaluate_embedding(&emb, labels)?;
    println!("misclassification = {}", report.misclassification);
    if let Some(path) = out {
        let mut text = String::from("metric,value\n");
        text.push_str(&format!("misclassification,{}\n", report.misclassification));
        for (c, l) in report.best_label_map.iter().enumerate() {
            text.push_str(&format!("cluster_{c}_label,{l}\n"));
        }
        std::fs::write(&path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_experiment(args: &mut Args) -> Result<ExitCode, CliError> {
    let config_path = PathBuf::from(args.require("config")?);
    let mut spec: ExperimentSpec = parse_config(&config_path)?;
    if let Some(seed) = args.parsed::<u64>("seed")? {
        spec.seed = seed;
        spec.model.seed = seed;
    }
    if let Some(out) = args.take("out") {
        spec.out_dir = PathBuf::from(out);
    }
    let variant_flags = args.take_all("variant");
    if !variant_flags.is_empty() {
        let mut variants = Vec::new();
        for v in &variant_flags {
            let parsed = Variant::parse(v)
                .ok_or_else(|| CliError::Usage(format!("unknown variant \"{v}\"")))?;
            if !variants.contains(&parsed) {
                variants.push(parsed);
            }
        }
        spec.variants = variants;
    }
    if let Some(csv) = args.take("data") {
        spec.source = DataSource::Csv {
            path: PathBuf::from(csv),
            label_column: "label".to_string(),
        };
    }
    if let Some(profile_name) = args.take("synthetic") {
        let profile = SyntheticProfile::parse(&profile_name).ok_or_else(|| {
            CliError::Usage(format!("unknown synthetic profile \"{profile_name}\""))
        })?;
        let (n, d, k) = profile.default_shape();
        spec.source = DataSource::Synthetic {
            profile,
            n,
            d,
            k,
            separation: 4.0,
        };
    }
    std::mem::take(args).finish()?;

    let outcome = run_experiment(&spec)?;
    for row in &outcome.results {
        println!(
            "{},{},{},{}",
            row.dataset,
            row.variant.name(),
            row.split.name(),
            row.misclassification
        );
    }
    for (variant, reason) in &outcome.failures {
        eprintln!("variant {} failed: {reason}", variant.name());
    }
    Ok(if outcome.all_completed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn cmd_plot(args: &mut Args) -> Result<(), CliError> {
    let emb_path = PathBuf::from(args.require("embedding")?);
    let out = PathBuf::from(args.require("out")?);
    let subsample = args.parsed::<usize>("subsample")?;
    let (ds, _) = load_labeled(args)?;
    std::mem::take(args).finish()?;
    let labels = ds
        .labels()
        .ok_or_else(|| CliError::Usage("plot needs a labeled dataset".into()))?;
    let emb = load_embedding(&emb_path)?;
    if emb.len() != ds.len() {
        return Err(CliError::Usage(format!(
            "embedding has {} rows but the dataset has {}",
            emb.len(),
            ds.len()
        )));
    }
    let (report, assignment) = evaluate_embedding(&emb, labels)?;
    let projected = if emb.dim() >= 2 {
        pca_project(emb.vectors(), 2)?.0
    } else {
        let mut out = Matrix::zeros(emb.len(), 2);
        for i in 0..emb.len() {
            out.set(i, 0, emb.vectors().get(i, 0));
        }
        out
    };
    let cohort: Vec<usize> = match subsample {
        Some(m) if m < emb.len() => kiae::eval::setcover_subsample(emb.vectors(), m)?,
        _ => (0..emb.len()).collect(),
    };
    let mut rows = Vec::new();
    let mut pred = Vec::new();
    let mut labs = Vec::new();
    for &i in &cohort {
        rows.push(projected.row(i).to_vec());
        pred.push(assignment.cluster_of()[i]);
        labs.push(labels[i]);
    }
    let points2d = Matrix::from_rows(&rows).map_err(kiae::eval::EvalError::from)?;
    let k = report.centroids.rows();
    let mut centroids2d = Matrix::zeros(k, 2);
    let mut counts = vec![0usize; k];
    for (i, &c) in assignment.cluster_of().iter().enumerate() {
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
        &labs,
        &centroids2d,
        &report.centroid_distances,
        &out,
    )?;
    println!("wrote {} ({} points)", out.display(), cohort.len());
    Ok(())
}
