// SPDX-License-Identifier: Apache-2.0

use super::feedback::TaTeam;
use super::model::{clip, BitInput, Hyperparams, TsmModel};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Sign of the clipped vote sum `v` that gates feedback.
///
/// With `p1 = (T - v) / 2T` for label 1 and `p0 = (T + v) / 2T` for label 0:
///
/// * `ClassSum` takes `v = ΣC⁺ − ΣC⁻`, so examples the machine already gets
///   right by a wide margin receive little feedback.
/// * `NegMinusPos` takes `v = ΣC⁻ − ΣC⁺`. This saturates feedback on
///   confidently correct examples and starves confidently wrong ones; kept
///   for comparison, it does not converge on the bundled digit set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum FeedbackGate {
    #[default]
    ClassSum,
    NegMinusPos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    /// Total monomial count, split evenly between the polarities.
    pub n_monomials: usize,
    pub hyperparams: Hyperparams,
    pub epochs: usize,
    pub seed: u64,
    pub gate: FeedbackGate,
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let h = &self.hyperparams;
        if self.n_monomials == 0 || !self.n_monomials.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "number of monomials must be even and positive, got {}",
                self.n_monomials
            )));
        }
        if h.states == 0 {
            return Err(Error::Config("states per action must be at least 1".into()));
        }
        if h.margin == 0 {
            return Err(Error::Config("margin T must be at least 1".into()));
        }
        #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
        if !(h.specificity > 1.0) {
            return Err(Error::Config(format!(
                "specificity must exceed 1, got {}",
                h.specificity
            )));
        }
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be at least 1".into()));
        }
        Ok(())
    }
}

/// Training state: one automaton team per monomial of each polarity.
#[derive(Debug, Clone)]
pub struct Trainer {
    config: TrainConfig,
    n_vars: usize,
    positive: Vec<TaTeam>,
    negative: Vec<TaTeam>,
    rng: SplitMix64,
}

impl Trainer {
    pub fn new(n_vars: usize, config: TrainConfig) -> Result<Self> {
        config.validate()?;
        if n_vars == 0 {
            return Err(Error::Config("input dimension must be positive".into()));
        }
        let half = config.n_monomials / 2;
        let states = config.hyperparams.states;
        Ok(Self {
            n_vars,
            positive: vec![TaTeam::new(n_vars, states); half],
            negative: vec![TaTeam::new(n_vars, states); half],
            rng: SplitMix64::new(config.seed),
            config,
        })
    }

    pub fn positive_teams(&self) -> &[TaTeam] {
        &self.positive
    }

    pub fn negative_teams(&self) -> &[TaTeam] {
        &self.negative
    }

    /// One update on a single labelled example.
    pub fn step(&mut self, input: &[bool], label: u8) {
        let t = self.config.hyperparams.margin as i64;
        let s = self.config.hyperparams.specificity;
        let pos = self.positive.iter().filter(|m| m.eval(input)).count() as i64;
        let neg = self.negative.iter().filter(|m| m.eval(input)).count() as i64;
        let sum = match self.config.gate {
            FeedbackGate::ClassSum => pos - neg,
            FeedbackGate::NegMinusPos => neg - pos,
        };
        let v = clip(sum, -t, t);
        let (p, plus_gets_type1) = if label == 1 {
            ((t - v) as f64 / (2 * t) as f64, true)
        } else {
            ((t + v) as f64 / (2 * t) as f64, false)
        };
        for j in 0..self.positive.len() {
            if self.rng.next_f64() <= p {
                if plus_gets_type1 {
                    self.positive[j].type1_feedback(input, s, &mut self.rng);
                    self.negative[j].type2_feedback(input);
                } else {
                    self.positive[j].type2_feedback(input);
                    self.negative[j].type1_feedback(input, s, &mut self.rng);
                }
            }
        }
    }

    /// Visits every example once, in a freshly shuffled order.
    pub fn epoch(&mut self, dataset: &[BitInput]) -> Result<()> {
        let mut order: Vec<usize> = (0..dataset.len()).collect();
        self.rng.shuffle(&mut order);
        for i in order {
            let ex = &dataset[i];
            let label = ex.label.ok_or_else(|| {
                Error::Config(format!("training example {} has no label", i + 1))
            })?;
            if ex.len() != self.n_vars {
                return Err(Error::Dimension {
                    expected: self.n_vars,
                    got: ex.len(),
                });
            }
            self.step(&ex.bits, label);
        }
        Ok(())
    }

    pub fn model(&self) -> TsmModel {
        TsmModel::new(
            self.n_vars,
            self.positive.iter().map(TaTeam::monomial).collect(),
            self.negative.iter().map(TaTeam::monomial).collect(),
            self.config.hyperparams,
        )
        .expect("teams always yield a well-formed model")
    }
}

/// Runs the full training loop for `config.epochs` epochs.
pub fn train(dataset: &[BitInput], config: &TrainConfig) -> Result<TsmModel> {
    let first = dataset
        .first()
        .ok_or_else(|| Error::Config("training set is empty".into()))?;
    let mut trainer = Trainer::new(first.len(), config.clone())?;
    for _ in 0..config.epochs {
        trainer.epoch(dataset)?;
    }
    Ok(trainer.model())
}

/// Fraction of labelled examples the model classifies correctly.
pub fn accuracy(model: &TsmModel, dataset: &[BitInput]) -> Result<f64> {
    if dataset.is_empty() {
        return Ok(0.0);
    }
    let mut correct = 0usize;
    for ex in dataset {
        if Some(model.classify(&ex.bits)?) == ex.label {
            correct += 1;
        }
    }
    Ok(correct as f64 / dataset.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor_data() -> Vec<BitInput> {
        vec![
            BitInput::labeled(vec![false, false], 0),
            BitInput::labeled(vec![true, true], 0),
            BitInput::labeled(vec![true, false], 1),
            BitInput::labeled(vec![false, true], 1),
        ]
    }

    fn config(n_monomials: usize, epochs: usize, seed: u64) -> TrainConfig {
        TrainConfig {
            n_monomials,
            hyperparams: Hyperparams {
                states: 100,
                margin: 2,
                specificity: 3.0,
            },
            epochs,
            seed,
            gate: FeedbackGate::ClassSum,
        }
    }

    #[test]
    fn learns_xor() {
        let data = xor_data();
        let m = train(&data, &config(4, 200, 42)).unwrap();
        assert_eq!(accuracy(&m, &data).unwrap(), 1.0, "{m:?}");
    }

    #[test]
    fn gate_variants_differ() {
        let data = xor_data();
        let mut c = config(4, 30, 9);
        let a = train(&data, &c).unwrap();
        c.gate = FeedbackGate::NegMinusPos;
        let b = train(&data, &c).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn single_example() {
        let data = vec![BitInput::labeled(vec![true], 1)];
        let m = train(&data, &config(2, 50, 1)).unwrap();
        assert_eq!(m.classify(&[true]).unwrap(), 1);
    }

    #[test]
    fn reproducible_from_seed() {
        let data = xor_data();
        let a = train(&data, &config(4, 30, 9)).unwrap();
        let b = train(&data, &config(4, 30, 9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_config() {
        let data = xor_data();
        assert!(train(&data, &config(4, 0, 1)).is_err());
        assert!(train(&data, &config(3, 10, 1)).is_err());
        let mut c = config(4, 10, 1);
        c.hyperparams.specificity = 1.0;
        assert!(train(&data, &c).is_err());
        assert!(train(&[], &config(4, 10, 1)).is_err());
    }

    #[test]
    fn rejects_unlabelled_and_ragged() {
        assert!(train(&[BitInput::new(vec![true])], &config(2, 1, 1)).is_err());
        let ragged = vec![
            BitInput::labeled(vec![true], 1),
            BitInput::labeled(vec![true, false], 0),
        ];
        assert!(train(&ragged, &config(2, 1, 1)).is_err());
    }
}
