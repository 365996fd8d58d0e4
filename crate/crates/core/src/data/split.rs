use super::{DataError, Dataset};
use crate::numerics::RngState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitMode {
    /// Train on everything; the test set is empty.
    FitAll,
    /// Hold out `1 - train_fraction` of samples for testing.
    TrainTest,
}

/// How to carve a dataset into train/test sets and cross-validation folds.
#[derive(Debug, Clone)]
pub struct SplitSpec {
    pub mode: SplitMode,
    pub train_fraction: f64,
    pub fold_count: usize,
    pub seed: u64,
}

impl SplitSpec {
    /// The 80/20 split with 5 folds.
    pub fn train_test(seed: u64) -> Self {
        SplitSpec {
            mode: SplitMode::TrainTest,
            train_fraction: 0.8,
            fold_count: 5,
            seed,
        }
    }

    pub fn fit_all(seed: u64) -> Self {
        SplitSpec {
            mode: SplitMode::FitAll,
            train_fraction: 1.0,
            fold_count: 5,
            seed,
        }
    }
}

/// A deterministic split. Index vectors refer to positions in the *original*
/// dataset; fold index pairs refer to positions in `train`.
#[derive(Debug, Clone)]
pub struct SplitResult {
    pub train: Dataset,
    pub test: Dataset,
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
    pub folds: Vec<(Vec<usize>, Vec<usize>)>,
}

/// Split a dataset per `spec`, stratifying by label when labels exist.
///
/// Deterministic under `spec.seed`: equal inputs give identical partitions.
/// Fold validation sets are disjoint and together cover the train set.
pub fn split(ds: &Dataset, spec: &SplitSpec) -> Result<SplitResult, DataError> {
    if spec.mode == SplitMode::TrainTest
        && !(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)
    {
        return Err(DataError::Domain(format!(
            "train_fraction must lie in (0,1), got {}",
            spec.train_fraction
        )));
    }
    if spec.fold_count < 2 {
        return Err(DataError::Domain(format!(
            "fold count must be at least 2, got {}",
            spec.fold_count
        )));
    }
    let n = ds.len();
    if n == 0 {
        return Err(DataError::Domain("cannot split an empty dataset".into()));
    }

    let mut rng = RngState::new(spec.seed);

    // Groups of original indices: one per class when labeled, otherwise all.
    let groups: Vec<Vec<usize>> = match ds.labels() {
        Some(labels) => {
            let k = ds.class_count();
            let mut gs = vec![Vec::new(); k];
            for (i, &l) in labels.iter().enumerate() {
                gs[l].push(i);
            }
            gs
        }
        None => vec![(0..n).collect()],
    };

    let mut train_indices: Vec<usize> = Vec::new();
    let mut test_indices: Vec<usize> = Vec::new();
    for group in &groups {
        let mut idx = group.clone();
        rng.shuffle(&mut idx);
        let take = match spec.mode {
            SplitMode::FitAll => idx.len(),
            SplitMode::TrainTest => {
                // Round to the nearest count so class proportions stay
                // within one sample of the requested fraction.
                (idx.len() as f64 * spec.train_fraction).round() as usize
            }
        };
        train_indices.extend_from_slice(&idx[..take]);
        test_indices.extend_from_slice(&idx[take..]);
    }
    train_indices.sort_unstable();
    test_indices.sort_unstable();

    let train = ds.subset(&train_indices)?;
    let test = ds.subset(&test_indices)?;

    // Stratified folds over the train set (positions in `train`).
    let fold_groups: Vec<Vec<usize>> = match train.labels() {
        Some(labels) => {
            let k = train.class_count();
            let mut gs = vec![Vec::new(); k];
            for (i, &l) in labels.iter().enumerate() {
                gs[l].push(i);
            }
            gs
        }
        None => vec![(0..train.len()).collect()],
    };
    let mut fold_members: Vec<Vec<usize>> = vec![Vec::new(); spec.fold_count];
    for (g, group) in fold_groups.iter().enumerate() {
        if group.len() < spec.fold_count {
            let label = train
                .label_names()
                .get(g)
                .cloned()
                .unwrap_or_else(|| "<unlabeled>".to_string());
            return Err(DataError::Stratification {
                label,
                count: group.len(),
                needed: spec.fold_count,
            });
        }
        let mut idx = group.clone();
        rng.shuffle(&mut idx);
        for (pos, &i) in idx.iter().enumerate() {
            fold_members[pos % spec.fold_count].push(i);
        }
    }
    let folds = fold_members
        .iter()
        .map(|val| {
            let mut val = val.clone();
            val.sort_unstable();
            let in_val: std::collections::HashSet<usize> = val.iter().copied().collect();
            let tr: Vec<usize> = (0..train.len()).filter(|i| !in_val.contains(i)).collect();
            (tr, val)
        })
        .collect();

    Ok(SplitResult {
        train,
        test,
        train_indices,
        test_indices,
        folds,
    })
}
