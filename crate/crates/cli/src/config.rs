use kiae::data::SyntheticProfile;
use kiae::eval::SplitTag;
use kiae::model::{KiaeConfig, ReprActivation, SequenceMode};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

/// One of the three comparison variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Plain reconstruction autoencoder: omega1 = 1, omega2 = 0.
    Ae,
    /// Knowledge-integrated autoencoder.
    Kiae,
    /// Knowledge replaced by uniform noise.
    NoisyKiae,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Ae => "ae",
            Variant::Kiae => "kiae",
            Variant::NoisyKiae => "noisy_kiae",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ae" => Some(Variant::Ae),
            "kiae" => Some(Variant::Kiae),
            "noisy_kiae" => Some(Variant::NoisyKiae),
            _ => None,
        }
    }

    pub const ALL: [Variant; 3] = [Variant::Ae, Variant::Kiae, Variant::NoisyKiae];
}

/// Where the experiment's samples come from.
#[derive(Debug, Clone)]
pub enum DataSource {
    Csv {
        path: PathBuf,
        label_column: String,
    },
    Synthetic {
        profile: SyntheticProfile,
        n: usize,
        d: usize,
        k: usize,
        separation: f64,
    },
}

/// Same-category bounds and cross-category offsets, pre-validation. Pairs
/// use 1-based category indices as they appear in config files.
#[derive(Debug, Clone)]
pub struct GammaSpec {
    pub alpha1: f64,
    pub alpha2: f64,
    pub default_gamma: f64,
    pub pairs: Vec<(usize, usize, f64)>,
}

impl Default for GammaSpec {
    fn default() -> Self {
        GammaSpec {
            alpha1: 0.0,
            alpha2: 1.0,
            default_gamma: 1.0,
            pairs: Vec::new(),
        }
    }
}

/// Fully resolved experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    /// Dataset label used in `results.csv`.
    pub name: String,
    pub source: DataSource,
    pub variants: Vec<Variant>,
    pub splits: Vec<SplitTag>,
    /// Model hyperparameters; `input_dim` is filled from the data and the
    /// omegas are the kiae/noisy defaults (the ae variant forces 1/0).
    pub model: KiaeConfig,
    pub gamma: GammaSpec,
    pub out_dir: PathBuf,
    pub seed: u64,
}

impl ExperimentSpec {
    /// Spec with defaults for a given source: all three variants, all three
    /// splits, equal loss weights.
    pub fn with_source(name: String, source: DataSource) -> Self {
        ExperimentSpec {
            name,
            source,
            variants: Variant::ALL.to_vec(),
            splits: vec![SplitTag::Fit, SplitTag::Train, SplitTag::Test],
            model: KiaeConfig::new(1),
            gamma: GammaSpec::default(),
            out_dir: PathBuf::from("out"),
            seed: 0,
        }
    }
}

/// Config-file error with its 1-based line number (0 = whole file).
#[derive(Debug, Clone)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "config error: {}", self.message)
        } else {
            write!(f, "config error at line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        message: message.into(),
    }
}

/// Parse a `key = value` config file with `[section]` headers.
///
/// Sections: `[experiment]`, `[data]`, `[model]`, `[knowledge]`. Blank lines
/// and `#` comments are ignored. Unknown sections or keys are rejected with
/// their line number. `omega2` may be omitted and is inferred from
/// `omega1 + omega2 = 1` (and vice versa).
pub fn parse_config(path: &Path) -> Result<ExperimentSpec, ConfigError> {
    let text = fs::read_to_string(path)
        .map_err(|e| err(0, format!("cannot read {}: {e}", path.display())))?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> Result<ExperimentSpec, ConfigError> {
    #[derive(Default)]
    struct Raw {
        // [experiment]
        name: Option<String>,
        variants: Option<(usize, String)>,
        splits: Option<(usize, String)>,
        seed: Option<u64>,
        out: Option<String>,
        // [data]
        source: Option<(usize, String)>,
        profile: Option<(usize, String)>,
        n: Option<usize>,
        d: Option<usize>,
        clusters: Option<usize>,
        separation: Option<f64>,
        path: Option<String>,
        label_column: Option<String>,
        // [model]
        lstm_hidden: Option<usize>,
        fc_a: Option<usize>,
        fc_b: Option<usize>,
        repr_dim: Option<usize>,
        omega1: Option<(usize, f64)>,
        omega2: Option<(usize, f64)>,
        batch_size: Option<usize>,
        epochs: Option<usize>,
        learning_rate: Option<f64>,
        sequence_mode: Option<(usize, String)>,
        window: Option<usize>,
        jump: Option<usize>,
        repr_activation: Option<(usize, String)>,
        // [knowledge]
        alpha1: Option<f64>,
        alpha2: Option<f64>,
        gamma_default: Option<f64>,
        gamma_pairs: Vec<(usize, usize, f64)>,
    }

    let mut raw = Raw::default();
    let mut section: Option<String> = None;

    for (i, line_raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = match line_raw.split_once('#') {
            Some((before, _)) => before.trim(),
            None => line_raw.trim(),
        };
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| err(lineno, "unterminated section header"))?
                .trim();
            match name {
                "experiment" | "data" | "model" | "knowledge" => {
                    section = Some(name.to_string());
                }
                other => return Err(err(lineno, format!("unknown section \"[{other}]\""))),
            }
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| {
                err(
                    lineno,
                    format!("expected \"key = value\", found \"{line}\""),
                )
            })?;
        let section = section
            .as_deref()
            .ok_or_else(|| err(lineno, format!("key \"{key}\" appears before any section")))?;

        macro_rules! parse_as {
            ($ty:ty) => {
                value
                    .parse::<$ty>()
                    .map_err(|_| err(lineno, format!("{key}: cannot parse \"{value}\"")))?
            };
        }

        match (section, key) {
            ("experiment", "name") => raw.name = Some(value.to_string()),
            ("experiment", "variants") => raw.variants = Some((lineno, value.to_string())),
            ("experiment", "splits") => raw.splits = Some((lineno, value.to_string())),
            ("experiment", "seed") => raw.seed = Some(parse_as!(u64)),
            ("experiment", "out") => raw.out = Some(value.to_string()),
            ("data", "source") => raw.source = Some((lineno, value.to_string())),
            ("data", "profile") => raw.profile = Some((lineno, value.to_string())),
            ("data", "n") => raw.n = Some(parse_as!(usize)),
            ("data", "d") => raw.d = Some(parse_as!(usize)),
            ("data", "clusters") => raw.clusters = Some(parse_as!(usize)),
            ("data", "separation") => raw.separation = Some(parse_as!(f64)),
            ("data", "path") => raw.path = Some(value.to_string()),
            ("data", "label_column") => raw.label_column = Some(value.to_string()),
            ("model", "lstm_hidden") => raw.lstm_hidden = Some(parse_as!(usize)),
            ("model", "fc_a") => raw.fc_a = Some(parse_as!(usize)),
            ("model", "fc_b") => raw.fc_b = Some(parse_as!(usize)),
            ("model", "repr_dim") => raw.repr_dim = Some(parse_as!(usize)),
            ("model", "omega1") => raw.omega1 = Some((lineno, parse_as!(f64))),
            ("model", "omega2") => raw.omega2 = Some((lineno, parse_as!(f64))),
            ("model", "batch_size") => raw.batch_size = Some(parse_as!(usize)),
            ("model", "epochs") => raw.epochs = Some(parse_as!(usize)),
            ("model", "learning_rate") => raw.learning_rate = Some(parse_as!(f64)),
            ("model", "sequence_mode") => raw.sequence_mode = Some((lineno, value.to_string())),
            ("model", "window") => raw.window = Some(parse_as!(usize)),
            ("model", "jump") => raw.jump = Some(parse_as!(usize)),
            ("model", "repr_activation") => raw.repr_activation = Some((lineno, value.to_string())),
            ("knowledge", "alpha1") => raw.alpha1 = Some(parse_as!(f64)),
            ("knowledge", "alpha2") => raw.alpha2 = Some(parse_as!(f64)),
            ("knowledge", "gamma_default") => raw.gamma_default = Some(parse_as!(f64)),
            ("knowledge", gamma_key) if gamma_key.starts_with("gamma_") => {
                let rest = &gamma_key["gamma_".len()..];
                let (x, y) = rest.split_once('_').ok_or_else(|| {
                    err(
                        lineno,
                        format!("gamma pair key must look like gamma_1_2, got \"{gamma_key}\""),
                    )
                })?;
                let x: usize = x
                    .parse()
                    .map_err(|_| err(lineno, format!("bad category index in \"{gamma_key}\"")))?;
                let y: usize = y
                    .parse()
                    .map_err(|_| err(lineno, format!("bad category index in \"{gamma_key}\"")))?;
                if x == 0 || y == 0 {
                    return Err(err(lineno, "gamma pair indices are 1-based"));
                }
                raw.gamma_pairs.push((x, y, parse_as!(f64)));
            }
            (section, key) => {
                return Err(err(
                    lineno,
                    format!("unknown key \"{key}\" in section [{section}]"),
                ))
            }
        }
    }

    // Data source.
    let (source_line, source_kind) = raw
        .source
        .ok_or_else(|| err(0, "missing required key \"source\" in [data]"))?;
    let source = match source_kind.as_str() {
        "synthetic" => {
            let (profile_line, profile_name) = raw
                .profile
                .ok_or_else(|| err(source_line, "synthetic source needs \"profile\""))?;
            let profile = SyntheticProfile::parse(&profile_name).ok_or_else(|| {
                err(
                    profile_line,
                    format!(
                        "unknown profile \"{profile_name}\" (expected economics_like, physics_like, or biology_like)"
                    ),
                )
            })?;
            let (dn, dd, dk) = profile.default_shape();
            DataSource::Synthetic {
                profile,
                n: raw.n.unwrap_or(dn),
                d: raw.d.unwrap_or(dd),
                k: raw.clusters.unwrap_or(dk),
                separation: raw.separation.unwrap_or(4.0),
            }
        }
        "csv" => {
            let path = raw
                .path
                .ok_or_else(|| err(source_line, "csv source needs \"path\""))?;
            DataSource::Csv {
                path: PathBuf::from(path),
                label_column: raw.label_column.unwrap_or_else(|| "label".to_string()),
            }
        }
        other => {
            return Err(err(
                source_line,
                format!("source must be \"synthetic\" or \"csv\", got \"{other}\""),
            ))
        }
    };

    let name = raw.name.unwrap_or_else(|| match &source {
        DataSource::Synthetic { profile, .. } => profile.name().to_string(),
        DataSource::Csv { path, .. } => path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "dataset".to_string()),
    });

    let mut spec = ExperimentSpec::with_source(name, source);

    if let Some((lineno, list)) = raw.variants {
        let mut variants = Vec::new();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let v = Variant::parse(item).ok_or_else(|| {
                err(
                    lineno,
                    format!("unknown variant \"{item}\" (expected ae, kiae, noisy_kiae)"),
                )
            })?;
            if !variants.contains(&v) {
                variants.push(v);
            }
        }
        if variants.is_empty() {
            return Err(err(lineno, "variant list is empty"));
        }
        spec.variants = variants;
    }
    if let Some((lineno, list)) = raw.splits {
        let mut splits = Vec::new();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let s = match item {
                "fit" => SplitTag::Fit,
                "train" => SplitTag::Train,
                "test" => SplitTag::Test,
                other => {
                    return Err(err(
                        lineno,
                        format!("unknown split \"{other}\" (expected fit, train, test)"),
                    ))
                }
            };
            if !splits.contains(&s) {
                splits.push(s);
            }
        }
        if splits.is_empty() {
            return Err(err(lineno, "split list is empty"));
        }
        // Canonical order keeps results.csv stable regardless of listing order.
        splits.sort_by_key(|s| match s {
            SplitTag::Fit => 0,
            SplitTag::Train => 1,
            SplitTag::Test => 2,
        });
        spec.splits = splits;
    }
    if let Some(seed) = raw.seed {
        spec.seed = seed;
    }
    if let Some(out) = raw.out {
        spec.out_dir = PathBuf::from(out);
    }

    // Model hyperparameters.
    let m = &mut spec.model;
    if let Some(v) = raw.lstm_hidden {
        m.lstm_hidden = v;
    }
    if let Some(v) = raw.fc_a {
        m.fc_a = v;
    }
    if let Some(v) = raw.fc_b {
        m.fc_b = v;
    }
    if let Some(v) = raw.repr_dim {
        m.repr_dim = v;
    }
    if let Some(v) = raw.batch_size {
        m.batch_size = v;
    }
    if let Some(v) = raw.epochs {
        m.epochs = v;
    }
    if let Some(v) = raw.learning_rate {
        m.learning_rate = v;
    }
    if let Some((lineno, mode)) = raw.sequence_mode {
        m.sequence_mode = SequenceMode::parse(&mode).ok_or_else(|| {
            err(
                lineno,
                format!("unknown sequence_mode \"{mode}\" (expected single_step or per_feature)"),
            )
        })?;
    }
    m.window = raw.window;
    m.jump = raw.jump;
    if let Some((lineno, act)) = raw.repr_activation {
        m.repr_activation = ReprActivation::parse(&act).ok_or_else(|| {
            err(
                lineno,
                format!("unknown repr_activation \"{act}\" (expected relu or identity)"),
            )
        })?;
    }
    m.seed = spec.seed;

    // Omega completion and bounds.
    match (raw.omega1, raw.omega2) {
        (Some((l1, w1)), None) => {
            check_omega(l1, "omega1", w1)?;
            m.omega1 = w1;
            m.omega2 = 1.0 - w1;
        }
        (None, Some((l2, w2))) => {
            check_omega(l2, "omega2", w2)?;
            m.omega2 = w2;
            m.omega1 = 1.0 - w2;
        }
        (Some((l1, w1)), Some((l2, w2))) => {
            check_omega(l1, "omega1", w1)?;
            check_omega(l2, "omega2", w2)?;
            if (w1 + w2 - 1.0).abs() > 1e-12 {
                return Err(err(
                    l2,
                    format!("omega1 + omega2 must equal 1, got {w1} + {w2}"),
                ));
            }
            m.omega1 = w1;
            m.omega2 = w2;
        }
        (None, None) => {}
    }

    // Knowledge table.
    if let Some(v) = raw.alpha1 {
        spec.gamma.alpha1 = v;
    }
    if let Some(v) = raw.alpha2 {
        spec.gamma.alpha2 = v;
    }
    if let Some(v) = raw.gamma_default {
        spec.gamma.default_gamma = v;
    }
    spec.gamma.pairs = raw.gamma_pairs;

    Ok(spec)
}

fn check_omega(line: usize, name: &str, w: f64) -> Result<(), ConfigError> {
    if !(0.0..=1.0).contains(&w) {
        return Err(err(line, format!("{name} must lie in [0,1], got {w}")));
    }
    Ok(())
}
