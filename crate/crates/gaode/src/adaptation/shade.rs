//! SHADE: success-history based adaptation with cyclic memories.
//!
//! Sampling picks a random memory slot and perturbs it JADE-style. At each
//! generation with at least one success, the write cursor's slot is replaced
//! by improvement-weighted Lehmer means of the successful values and the
//! cursor advances; generations without successes freeze both.

use rand::Rng;

use super::sampling::{sample_cr_normal, sample_f_cauchy};
use super::AdaptationMethod;
use crate::de::ControlParams;
use crate::means::weighted_lehmer_mean;
use crate::rng::Stream;

pub struct Shade {
    memory_f: Vec<f64>,
    memory_cr: Vec<f64>,
    cursor: usize,
    successes: Vec<(f64, f64, f64)>,
}

impl Shade {
    pub fn new(history_size: usize) -> Self {
        assert!(history_size >= 1);
        Shade {
            memory_f: vec![0.5; history_size],
            memory_cr: vec![0.5; history_size],
            cursor: 0,
            successes: Vec::new(),
        }
    }

    pub fn memories(&self) -> (&[f64], &[f64], usize) {
        (&self.memory_f, &self.memory_cr, self.cursor)
    }

    /// Memory update from one generation's `(F, CR, improvement)` triples.
    /// Ties (all improvements zero) fall back to uniform weights.
    pub fn apply_update(&mut self, successes: &[(f64, f64, f64)]) {
        if successes.is_empty() {
            return;
        }
        let total: f64 = successes.iter().map(|s| s.2).sum();
        let weights: Vec<f64> = if total > 0.0 {
            successes.iter().map(|s| s.2 / total).collect()
        } else {
            vec![1.0 / successes.len() as f64; successes.len()]
        };
        let fs: Vec<f64> = successes.iter().map(|s| s.0).collect();
        let crs: Vec<f64> = successes.iter().map(|s| s.1).collect();
        self.memory_f[self.cursor] = weighted_lehmer_mean(&fs, &weights);
        self.memory_cr[self.cursor] = weighted_lehmer_mean(&crs, &weights);
        self.cursor = (self.cursor + 1) % self.memory_f.len();
    }
}

impl AdaptationMethod for Shade {
    fn assign(&mut self, _i: usize, _t: u64, rng: &mut Stream) -> ControlParams {
        let slot = rng.gen_range(0..self.memory_f.len());
        let cr = sample_cr_normal(self.memory_cr[slot], rng);
        let f = sample_f_cauchy(self.memory_f[slot], rng);
        ControlParams::new(f, cr)
    }

    fn observe(&mut self, _i: usize, _t: u64, params: ControlParams, success: bool, improvement: f64) {
        if success {
            self.successes.push((params.f, params.cr, improvement));
        }
    }

    fn end_generation(&mut self, _t: u64, _rng: &mut Stream) {
        let successes = std::mem::take(&mut self.successes);
        self.apply_update(&successes);
    }

    fn name(&self) -> &'static str {
        "shade"
    }
}
