use super::config::{KiaeConfig, ReprActivation, SequenceMode};
use super::network::KiaeModel;
use super::ModelError;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

const MAGIC: &str = "kiae-checkpoint v1";
const VALUES_PER_LINE: usize = 8;

impl KiaeModel {
    /// Write the model as a versioned text checkpoint. Values use the
    /// shortest decimal form that round-trips, so save/load is bit-exact.
    pub fn save(&self, path: &Path) -> Result<(), ModelError> {
        let cfg = self.config();
        let mut out = String::new();
        out.push_str(MAGIC);
        out.push('\n');
        let _ = writeln!(out, "input_dim = {}", cfg.input_dim);
        let _ = writeln!(out, "lstm_hidden = {}", cfg.lstm_hidden);
        let _ = writeln!(out, "fc_a = {}", cfg.fc_a);
        let _ = writeln!(out, "fc_b = {}", cfg.fc_b);
        let _ = writeln!(out, "repr_dim = {}", cfg.repr_dim);
        let _ = writeln!(out, "omega1 = {}", cfg.omega1);
        let _ = writeln!(out, "omega2 = {}", cfg.omega2);
        let _ = writeln!(out, "batch_size = {}", cfg.batch_size);
        let _ = writeln!(out, "epochs = {}", cfg.epochs);
        let _ = writeln!(out, "learning_rate = {}", cfg.learning_rate);
        let _ = writeln!(out, "sequence_mode = {}", cfg.sequence_mode.name());
        let _ = writeln!(out, "window = {}", opt(cfg.window));
        let _ = writeln!(out, "jump = {}", opt(cfg.jump));
        let _ = writeln!(out, "repr_activation = {}", cfg.repr_activation.name());
        let _ = writeln!(out, "seed = {}", cfg.seed);
        let _ = writeln!(out, "params = {}", self.params().len());
        for chunk in self.params().chunks(VALUES_PER_LINE) {
            let line: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        fs::write(path, out).map_err(|source| ModelError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Load a model from a checkpoint written by [`KiaeModel::save`].
    pub fn load(path: &Path) -> Result<KiaeModel, ModelError> {
        let bad = |message: String| ModelError::Checkpoint {
            path: path.to_path_buf(),
            message,
        };
        let text = fs::read_to_string(path).map_err(|source| ModelError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut lines = text.lines();
        match lines.next() {
            Some(l) if l == MAGIC => {}
            other => return Err(bad(format!("expected header \"{MAGIC}\", found {other:?}"))),
        }

        let mut cfg = KiaeConfig::new(1);
        let mut declared = None;
        for line in lines.by_ref() {
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| bad(format!("expected \"key = value\", found \"{line}\"")))?;
            let parse_usize = || {
                value
                    .parse::<usize>()
                    .map_err(|_| bad(format!("{key}: \"{value}\" is not a count")))
            };
            let parse_f64 = || {
                value
                    .parse::<f64>()
                    .map_err(|_| bad(format!("{key}: \"{value}\" is not a number")))
            };
            match key {
                "input_dim" => cfg.input_dim = parse_usize()?,
                "lstm_hidden" => cfg.lstm_hidden = parse_usize()?,
                "fc_a" => cfg.fc_a = parse_usize()?,
                "fc_b" => cfg.fc_b = parse_usize()?,
                "repr_dim" => cfg.repr_dim = parse_usize()?,
                "omega1" => cfg.omega1 = parse_f64()?,
                "omega2" => cfg.omega2 = parse_f64()?,
                "batch_size" => cfg.batch_size = parse_usize()?,
                "epochs" => cfg.epochs = parse_usize()?,
                "learning_rate" => cfg.learning_rate = parse_f64()?,
                "sequence_mode" => {
                    cfg.sequence_mode = SequenceMode::parse(value)
                        .ok_or_else(|| bad(format!("unknown sequence_mode \"{value}\"")))?
                }
                "window" => cfg.window = parse_opt(value, path)?,
                "jump" => cfg.jump = parse_opt(value, path)?,
                "repr_activation" => {
                    cfg.repr_activation = ReprActivation::parse(value)
                        .ok_or_else(|| bad(format!("unknown repr_activation \"{value}\"")))?
                }
                "seed" => {
                    cfg.seed = value
                        .parse::<u64>()
                        .map_err(|_| bad(format!("seed: \"{value}\" is not a u64")))?
                }
                "params" => {
                    declared = Some(parse_usize()?);
                    break;
                }
                other => return Err(bad(format!("unknown key \"{other}\""))),
            }
        }
        let declared = declared.ok_or_else(|| bad("missing \"params = <count>\" line".into()))?;

        let mut params = Vec::with_capacity(declared);
        for line in lines {
            for cell in line.split_whitespace() {
                let v: f64 = cell
                    .parse()
                    .map_err(|_| bad(format!("\"{cell}\" is not a parameter value")))?;
                params.push(v);
            }
        }
        if params.len() != declared {
            return Err(bad(format!(
                "declared {declared} parameters but found {}",
                params.len()
            )));
        }
        KiaeModel::from_parts(cfg, params)
    }
}

fn opt(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "none".into())
}

fn parse_opt(value: &str, path: &Path) -> Result<Option<usize>, ModelError> {
    if value == "none" {
        Ok(None)
    } else {
        value
            .parse::<usize>()
            .map(Some)
            .map_err(|_| ModelError::Checkpoint {
                path: path.to_path_buf(),
                message: format!("\"{value}\" is neither a count nor \"none\""),
            })
    }
}
