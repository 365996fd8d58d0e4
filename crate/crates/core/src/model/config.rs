use super::ModelError;

/// How a sample becomes a sequence for the recurrent encoder/decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceMode {
    /// The whole feature vector is one time step of width `d`.
    SingleStep,
    /// Each feature is a scalar time step; long samples are windowed.
    PerFeature,
}

impl SequenceMode {
    pub fn name(self) -> &'static str {
        match self {
            SequenceMode::SingleStep => "single_step",
            SequenceMode::PerFeature => "per_feature",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "single_step" => Some(SequenceMode::SingleStep),
            "per_feature" => Some(SequenceMode::PerFeature),
            _ => None,
        }
    }
}

/// Activation applied to the representation layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReprActivation {
    /// Non-negative latents (the default).
    Relu,
    /// Escape hatch: unconstrained latents.
    Identity,
}

impl ReprActivation {
    pub fn name(self) -> &'static str {
        match self {
            ReprActivation::Relu => "relu",
            ReprActivation::Identity => "identity",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "relu" => Some(ReprActivation::Relu),
            "identity" => Some(ReprActivation::Identity),
            _ => None,
        }
    }
}

/// Hyperparameters of the autoencoder and its training loop.
#[derive(Debug, Clone)]
pub struct KiaeConfig {
    pub input_dim: usize,
    pub lstm_hidden: usize,
    pub fc_a: usize,
    pub fc_b: usize,
    pub repr_dim: usize,
    /// Reconstruction-term weight; `omega1 + omega2 = 1`.
    pub omega1: f64,
    /// Distance-term weight.
    pub omega2: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub sequence_mode: SequenceMode,
    /// Sliding-window length for `per_feature` mode; `None` = no windowing.
    pub window: Option<usize>,
    /// Sliding-window stride; defaults to `window` when unset.
    pub jump: Option<usize>,
    pub repr_activation: ReprActivation,
    pub seed: u64,
}

impl KiaeConfig {
    /// Defaults for feature dimension `d`: h=32, a=64, b=32, r=8,
    /// equal loss weights, batch 16, 10 epochs, learning rate 1e-3.
    pub fn new(input_dim: usize) -> Self {
        KiaeConfig {
            input_dim,
            lstm_hidden: 32,
            fc_a: 64,
            fc_b: 32,
            repr_dim: 8,
            omega1: 0.5,
            omega2: 0.5,
            batch_size: 16,
            epochs: 10,
            learning_rate: 1e-3,
            sequence_mode: SequenceMode::SingleStep,
            window: None,
            jump: None,
            repr_activation: ReprActivation::Relu,
            seed: 0,
        }
    }

    /// Width of one sequence step.
    pub fn step_dim(&self) -> usize {
        match self.sequence_mode {
            SequenceMode::SingleStep => self.input_dim,
            SequenceMode::PerFeature => 1,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.input_dim == 0 {
            return Err(ModelError::Domain("input_dim must be positive".into()));
        }
        if self.lstm_hidden == 0 || self.fc_a == 0 || self.fc_b == 0 {
            return Err(ModelError::Domain("hidden sizes must be positive".into()));
        }
        if self.repr_dim == 0 {
            return Err(ModelError::Domain("repr_dim must be at least 1".into()));
        }
        for (name, w) in [("omega1", self.omega1), ("omega2", self.omega2)] {
            if !(0.0..=1.0).contains(&w) {
                return Err(ModelError::Domain(format!(
                    "{name} must lie in [0,1], got {w}"
                )));
            }
        }
        if (self.omega1 + self.omega2 - 1.0).abs() > 1e-12 {
            return Err(ModelError::Domain(format!(
                "omega1 + omega2 must equal 1, got {} + {}",
                self.omega1, self.omega2
            )));
        }
        if self.batch_size < 2 {
            return Err(ModelError::Domain(format!(
                "batch_size must be at least 2 (the loss is pairwise), got {}",
                self.batch_size
            )));
        }
        if self.learning_rate <= 0.0 || self.learning_rate.is_nan() {
            return Err(ModelError::Domain(format!(
                "learning_rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if let Some(w) = self.window {
            if w == 0 {
                return Err(ModelError::Domain(
                    "window length must be at least 1".into(),
                ));
            }
            if self.sequence_mode == SequenceMode::SingleStep {
                return Err(ModelError::Domain(
                    "windowing applies to per_feature mode only".into(),
                ));
            }
        }
        if let (Some(j), w) = (self.jump, self.window) {
            if j == 0 {
                return Err(ModelError::Domain("window jump must be at least 1".into()));
            }
            match w {
                None => return Err(ModelError::Domain("jump is set but window is not".into())),
                Some(w) if j > w => {
                    return Err(ModelError::Domain(format!(
                        "window jump {j} exceeds window length {w}; coverage would have gaps"
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        KiaeConfig::new(12).validate().unwrap();
    }

    #[test]
    fn omega_must_sum_to_one() {
        let mut cfg = KiaeConfig::new(4);
        cfg.omega1 = 0.7;
        cfg.omega2 = 0.7;
        assert!(cfg.validate().is_err());
        cfg.omega2 = 0.3;
        cfg.validate().unwrap();
    }

    #[test]
    fn window_requires_per_feature() {
        let mut cfg = KiaeConfig::new(16);
        cfg.window = Some(4);
        assert!(cfg.validate().is_err());
        cfg.sequence_mode = SequenceMode::PerFeature;
        cfg.validate().unwrap();
    }
}
