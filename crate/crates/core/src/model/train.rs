use super::config::KiaeConfig;
use super::network::{KiaeModel, TAG_SHUFFLE};
use super::ModelError;
use crate::data::Dataset;
use crate::knowledge::KnowledgeMatrix;
use crate::numerics::RngState;

/// Adam with the conventional moment parameters.
struct Adam {
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    fn new(lr: f64, n: usize) -> Self {
        Adam {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
        }
    }

    fn step(&mut self, params: &mut [f64], grads: &[f64]) {
        self.t += 1;
        let bc1 = 1.0 - self.beta1.powi(self.t);
        let bc2 = 1.0 - self.beta2.powi(self.t);
        for k in 0..params.len() {
            let g = grads[k];
            self.m[k] = self.beta1 * self.m[k] + (1.0 - self.beta1) * g;
            self.v[k] = self.beta2 * self.v[k] + (1.0 - self.beta2) * g * g;
            let mhat = self.m[k] / bc1;
            let vhat = self.v[k] / bc2;
            params[k] -= self.lr * mhat / (vhat.sqrt() + self.eps);
        }
    }
}

/// Shuffled batch index lists for one epoch. A trailing batch of one sample
/// is folded into its predecessor so every batch supports the pairwise loss.
fn epoch_batches(order: &[usize], batch_size: usize) -> Vec<Vec<usize>> {
    let mut batches: Vec<Vec<usize>> = order.chunks(batch_size).map(|c| c.to_vec()).collect();
    if batches.len() > 1 && batches.last().is_some_and(|b| b.len() < 2) {
        let tail = batches.pop().unwrap();
        batches.last_mut().unwrap().extend(tail);
    }
    batches
}

/// Train a fresh model with Adam: per epoch, shuffle (seeded), batch, subset
/// the knowledge matrix per batch, and apply exact loss gradients. Returns
/// the model and the per-epoch mean loss. Deterministic under `config.seed`.
pub fn train(
    config: &KiaeConfig,
    ds: &Dataset,
    mt: &KnowledgeMatrix,
) -> Result<(KiaeModel, Vec<f64>), ModelError> {
    config.validate()?;
    if mt.len() != ds.len() {
        return Err(ModelError::Shape(format!(
            "knowledge matrix is {}x{} but the dataset has {} samples",
            mt.len(),
            mt.len(),
            ds.len()
        )));
    }
    if ds.dim() != config.input_dim {
        return Err(ModelError::Shape(format!(
            "dataset dimension {} does not match input_dim {}",
            ds.dim(),
            config.input_dim
        )));
    }
    let mut model = KiaeModel::new(config.clone())?;
    if config.epochs == 0 {
        return Ok((model, Vec::new()));
    }
    if ds.len() < 2 {
        return Err(ModelError::Domain(
            "training needs at least 2 samples for the pairwise loss".into(),
        ));
    }
    if config.omega2 > 0.0 && mt.known_pair_count() == 0 {
        eprintln!(
            "warning: omega2 = {} but the knowledge matrix has no known pairs; \
             the distance term will be zero",
            config.omega2
        );
    }

    let mut adam = Adam::new(config.learning_rate, model.param_count());
    let mut rng = RngState::new(config.seed).derive(TAG_SHUFFLE);
    let mut history = Vec::with_capacity(config.epochs);

    for epoch in 0..config.epochs {
        let mut order: Vec<usize> = (0..ds.len()).collect();
        rng.shuffle(&mut order);
        let batches = epoch_batches(&order, config.batch_size);
        let mut epoch_loss = 0.0;
        for (b, batch) in batches.iter().enumerate() {
            let mt_b = mt
                .subset(batch)
                .map_err(|e| ModelError::Domain(e.to_string()))?;
            let (value, grads) = model.loss(ds, batch, &mt_b, config.omega1, config.omega2)?;
            if !value.is_finite() {
                return Err(ModelError::Divergence { epoch, batch: b });
            }
            adam.step(model.params_mut(), &grads);
            if model.params().iter().any(|p| !p.is_finite()) {
                return Err(ModelError::Divergence { epoch, batch: b });
            }
            epoch_loss += value;
        }
        history.push(epoch_loss / batches.len() as f64);
    }
    Ok((model, history))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{generate_synthetic, SyntheticProfile};
    use crate::knowledge::{build_from_labels, GammaTable};

    fn small_config(d: usize, seed: u64) -> KiaeConfig {
        let mut cfg = KiaeConfig::new(d);
        cfg.lstm_hidden = 4;
        cfg.fc_a = 8;
        cfg.fc_b = 4;
        cfg.repr_dim = 2;
        cfg.batch_size = 8;
        cfg.epochs = 10;
        cfg.learning_rate = 5e-3;
        cfg.seed = seed;
        cfg
    }

    #[test]
    fn zero_epochs_returns_untouched_model() {
        let mut cfg = small_config(4, 1);
        cfg.epochs = 0;
        let mut rng = RngState::new(2);
        let ds =
            generate_synthetic(SyntheticProfile::EconomicsLike, 12, 4, 2, 2.0, &mut rng).unwrap();
        let mt = KnowledgeMatrix::zeros(12);
        let (model, history) = train(&cfg, &ds, &mt).unwrap();
        assert!(history.is_empty());
        let fresh = KiaeModel::new(cfg).unwrap();
        assert_eq!(model.params(), fresh.params());
    }

    #[test]
    fn training_reduces_loss_on_two_clusters() {
        // Over five seeds, the final epoch's mean loss must beat the first
        // in at least four.
        let mut wins = 0;
        for seed in 0..5 {
            let cfg = small_config(6, seed);
            let mut rng = RngState::new(100 + seed);
            let ds =
                generate_synthetic(SyntheticProfile::PhysicsLike, 40, 6, 2, 3.0, &mut rng).unwrap();
            let table = GammaTable::uniform(2, 0.0, 1.0, 1.0).unwrap();
            let mut mt_rng = RngState::new(200 + seed);
            let mt = build_from_labels(&ds, &table, &mut mt_rng).unwrap();
            let (_, history) = train(&cfg, &ds, &mt).unwrap();
            if history.last().unwrap() < history.first().unwrap() {
                wins += 1;
            }
        }
        assert!(wins >= 4, "loss decreased in only {wins}/5 runs");
    }

    #[test]
    fn deterministic_under_seed() {
        let cfg = small_config(5, 7);
        let mut rng = RngState::new(3);
        let ds =
            generate_synthetic(SyntheticProfile::EconomicsLike, 20, 5, 2, 2.0, &mut rng).unwrap();
        let table = GammaTable::uniform(2, 0.0, 1.0, 1.0).unwrap();
        let mut mt_rng = RngState::new(4);
        let mt = build_from_labels(&ds, &table, &mut mt_rng).unwrap();
        let (m1, h1) = train(&cfg, &ds, &mt).unwrap();
        let (m2, h2) = train(&cfg, &ds, &mt).unwrap();
        assert_eq!(h1, h2);
        assert_eq!(m1.params(), m2.params());
    }

    #[test]
    fn trailing_singleton_batch_is_merged() {
        let batches = epoch_batches(&(0..17).collect::<Vec<_>>(), 8);
        assert_eq!(batches.len(), 2);
        assert_eq!(batches[1].len(), 9);
        let even = epoch_batches(&(0..16).collect::<Vec<_>>(), 8);
        assert_eq!(even.len(), 2);
        assert_eq!(even[1].len(), 8);
    }

    #[test]
    fn mismatched_knowledge_size_rejected() {
        let cfg = small_config(4, 9);
        let mut rng = RngState::new(5);
        let ds =
            generate_synthetic(SyntheticProfile::EconomicsLike, 10, 4, 2, 2.0, &mut rng).unwrap();
        let mt = KnowledgeMatrix::zeros(9);
        assert!(train(&cfg, &ds, &mt).is_err());
    }
}
