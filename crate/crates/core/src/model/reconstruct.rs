use super::config::SequenceMode;
use super::network::KiaeModel;
use super::tape::Tape;
use super::ModelError;
use crate::data::{FeatureKind, WindowPlan};

/// Combine per-window reconstructions into one sample.
///
/// For each original feature position, the values from every window covering
/// it are aggregated: continuous features take the mean, categorical-coded
/// features take the majority vote with ties broken toward the value from
/// the earliest-starting window. `window_values[w]` holds the flattened
/// reconstruction of window `w` (length `plan.length`, padded coordinates).
pub fn aggregate_windows(
    plan: &WindowPlan,
    window_values: &[Vec<f64>],
    kinds: &[FeatureKind],
) -> Result<Vec<f64>, ModelError> {
    if window_values.len() != plan.windows.len() {
        return Err(ModelError::Shape(format!(
            "{} window reconstructions for {} planned windows",
            window_values.len(),
            plan.windows.len()
        )));
    }
    for (w, values) in window_values.iter().enumerate() {
        if values.len() != plan.length {
            return Err(ModelError::Shape(format!(
                "window {w} reconstruction has {} values, expected {}",
                values.len(),
                plan.length
            )));
        }
    }
    if kinds.len() != plan.sample_length {
        return Err(ModelError::Shape(format!(
            "{} feature kinds for sample length {}",
            kinds.len(),
            plan.sample_length
        )));
    }

    let mut out = Vec::with_capacity(plan.sample_length);
    for p in 0..plan.sample_length {
        let padded = p + plan.pad;
        let votes: Vec<f64> = plan
            .covering(padded)
            .map(|w| window_values[w][padded - plan.windows[w].0])
            .collect();
        if votes.is_empty() {
            return Err(ModelError::Domain(format!(
                "internal error: position {p} covered by no window"
            )));
        }
        let value = match kinds[p] {
            FeatureKind::Continuous => votes.iter().sum::<f64>() / votes.len() as f64,
            FeatureKind::CategoricalCoded => majority(&votes),
        };
        out.push(value);
    }
    Ok(out)
}

/// Most frequent value; ties keep the earliest vote.
fn majority(votes: &[f64]) -> f64 {
    let mut best = votes[0];
    let mut best_count = 0;
    for (i, &candidate) in votes.iter().enumerate() {
        if votes[..i].contains(&candidate) {
            continue; // already counted
        }
        let count = votes.iter().filter(|&&v| v == candidate).count();
        if count > best_count {
            best = candidate;
            best_count = count;
        }
    }
    best
}

impl KiaeModel {
    /// Reconstruct a full sample: encode and decode each window, then
    /// aggregate per position (mean for continuous features, majority vote
    /// for categorical-coded ones). Padded positions are dropped.
    pub fn reconstruct_full(
        &self,
        sample: &[f64],
        kinds: &[FeatureKind],
    ) -> Result<Vec<f64>, ModelError> {
        let windows = self.sample_windows(sample)?;
        let steps = self.steps_per_window();
        let recons: Vec<Vec<f64>> = windows
            .iter()
            .map(|w| {
                let mut tape = Tape::new(self.params());
                let z = self.window_repr(&mut tape, w);
                let recon = self.window_reconstruction(&mut tape, z, steps);
                tape.value(recon).to_vec()
            })
            .collect();
        match self.config().sequence_mode {
            SequenceMode::SingleStep => Ok(recons.into_iter().next().unwrap()),
            SequenceMode::PerFeature => {
                if kinds.len() != sample.len() {
                    return Err(ModelError::Shape(format!(
                        "{} feature kinds for {} features",
                        kinds.len(),
                        sample.len()
                    )));
                }
                let plan = self.window_plan()?;
                aggregate_windows(&plan, &recons, kinds)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::plan_windows;

    #[test]
    fn single_window_is_identity() {
        let plan = plan_windows(4, 4, 1).unwrap();
        let values = vec![vec![1.0, 2.0, 3.0, 4.0]];
        let out = aggregate_windows(&plan, &values, &[FeatureKind::Continuous; 4]).unwrap();
        assert_eq!(out, vec![1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn categorical_majority_vote() {
        // Plan: length 5, window 3, jump 1 -> windows (0,3),(1,4),(2,5).
        // Position 2 is covered by all three.
        let plan = plan_windows(5, 3, 1).unwrap();
        let values = vec![
            vec![9.0, 9.0, 1.0], // window (0,3): position 2 -> 1
            vec![9.0, 1.0, 9.0], // window (1,4): position 2 -> 1
            vec![0.0, 9.0, 9.0], // window (2,5): position 2 -> 0
        ];
        let kinds = [FeatureKind::CategoricalCoded; 5];
        let out = aggregate_windows(&plan, &values, &kinds).unwrap();
        assert_eq!(out[2], 1.0);
    }

    #[test]
    fn categorical_tie_prefers_earliest_window() {
        let plan = plan_windows(4, 3, 1).unwrap(); // windows (0,3),(1,4)
        let values = vec![vec![5.0, 5.0, 2.0], vec![5.0, 7.0, 5.0]];
        let kinds = [FeatureKind::CategoricalCoded; 4];
        let out = aggregate_windows(&plan, &values, &kinds).unwrap();
        // Position 2 gets votes (2, 7): tie, earliest window wins.
        assert_eq!(out[2], 2.0);
    }

    #[test]
    fn continuous_positions_average() {
        let plan = plan_windows(4, 3, 1).unwrap();
        let values = vec![vec![0.0, 0.0, 0.2], vec![0.0, 0.4, 0.0]];
        let out = aggregate_windows(&plan, &values, &[FeatureKind::Continuous; 4]).unwrap();
        assert!((out[2] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn padded_positions_are_dropped() {
        // Sample of 3 with window 5: left-padded by 2.
        let plan = plan_windows(3, 5, 1).unwrap();
        assert_eq!(plan.pad, 2);
        let values = vec![vec![9.0, 9.0, 1.0, 2.0, 3.0]];
        let out = aggregate_windows(&plan, &values, &[FeatureKind::Continuous; 3]).unwrap();
        assert_eq!(out, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn brute_force_oracle_on_random_plans() {
        use crate::numerics::RngState;
        let mut rng = RngState::new(55);
        for _ in 0..100 {
            let len = 1 + rng.below(24);
            let window = 1 + rng.below(10);
            let jump = 1 + rng.below(window);
            let plan = plan_windows(len, window, jump).unwrap();
            let kinds: Vec<FeatureKind> = (0..len)
                .map(|_| {
                    if rng.next_f64() < 0.5 {
                        FeatureKind::Continuous
                    } else {
                        FeatureKind::CategoricalCoded
                    }
                })
                .collect();
            // Small integer votes so exact-equality grouping is exercised.
            let values: Vec<Vec<f64>> = plan
                .windows
                .iter()
                .map(|_| (0..plan.length).map(|_| rng.below(3) as f64).collect())
                .collect();
            let got = aggregate_windows(&plan, &values, &kinds).unwrap();

            // Oracle: recompute per position from scratch.
            for p in 0..len {
                let q = p + plan.pad;
                let mut votes = Vec::new();
                for (w, &(s, e)) in plan.windows.iter().enumerate() {
                    if s <= q && q < e {
                        votes.push(values[w][q - s]);
                    }
                }
                let want = match kinds[p] {
                    FeatureKind::Continuous => votes.iter().sum::<f64>() / votes.len() as f64,
                    FeatureKind::CategoricalCoded => {
                        let mut best = votes[0];
                        let mut best_count = 0usize;
                        for &v in &votes {
                            let c = votes.iter().filter(|&&x| x == v).count();
                            if c > best_count {
                                best_count = c;
                                best = v;
                            }
                        }
                        best
                    }
                };
                assert_eq!(got[p], want, "position {p} of plan {plan:?}");
            }
        }
    }
}
