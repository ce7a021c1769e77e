//! JADE's mean-tracking adaptation: `CR ~ Normal(mu_CR, 0.1)`,
//! `F ~ Cauchy(mu_F, 0.1)`, with the means pulled toward the arithmetic
//! mean of successful CRs and the Lehmer mean of successful Fs.

use super::sampling::{sample_cr_normal, sample_f_cauchy};
use super::AdaptationMethod;
use crate::de::ControlParams;
use crate::means::{arithmetic_mean, lehmer_mean};
use crate::rng::Stream;

const LEARNING_RATE: f64 = 0.1;

pub struct Jade {
    mu_f: f64,
    mu_cr: f64,
    success_f: Vec<f64>,
    success_cr: Vec<f64>,
}

impl Jade {
    pub fn new() -> Self {
        Jade {
            mu_f: 0.5,
            mu_cr: 0.5,
            success_f: Vec::new(),
            success_cr: Vec::new(),
        }
    }

    pub fn means(&self) -> (f64, f64) {
        (self.mu_f, self.mu_cr)
    }
}

impl Default for Jade {
    fn default() -> Self {
        Self::new()
    }
}

impl AdaptationMethod for Jade {
    fn assign(&mut self, _i: usize, _t: u64, rng: &mut Stream) -> ControlParams {
        let cr = sample_cr_normal(self.mu_cr, rng);
        let f = sample_f_cauchy(self.mu_f, rng);
        ControlParams::new(f, cr)
    }

    fn observe(&mut self, _i: usize, _t: u64, params: ControlParams, success: bool, _improvement: f64) {
        if success {
            self.success_f.push(params.f);
            self.success_cr.push(params.cr);
        }
    }

    fn end_generation(&mut self, _t: u64, _rng: &mut Stream) {
        if !self.success_f.is_empty() {
            self.mu_cr = (1.0 - LEARNING_RATE) * self.mu_cr
                + LEARNING_RATE * arithmetic_mean(&self.success_cr);
            self.mu_f =
                (1.0 - LEARNING_RATE) * self.mu_f + LEARNING_RATE * lehmer_mean(&self.success_f);
        }
        self.success_f.clear();
        self.success_cr.clear();
    }

    fn name(&self) -> &'static str {
        "jade"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStreams;

    #[test]
    fn empty_generation_is_a_no_op() {
        let mut s = RngStreams::for_run(41, 0);
        let mut jade = Jade::new();
        let before = jade.means();
        jade.end_generation(1, &mut s.param);
        assert_eq!(jade.means(), before);
    }

    #[test]
    fn update_blends_toward_success_means() {
        let mut s = RngStreams::for_run(42, 0);
        let mut jade = Jade::new();
        jade.observe(0, 1, ControlParams::new(0.2, 0.4), true, 1.0);
        jade.observe(1, 1, ControlParams::new(0.8, 0.6), true, 1.0);
        jade.end_generation(1, &mut s.param);
        let (mu_f, mu_cr) = jade.means();
        // lehmer({0.2, 0.8}) = 0.68, arith({0.4, 0.6}) = 0.5
        assert!((mu_f - (0.9 * 0.5 + 0.1 * 0.68)).abs() < 1e-15);
        assert!((mu_cr - 0.5).abs() < 1e-15);
    }

    #[test]
    fn means_remain_in_unit_interval() {
        let mut s = RngStreams::for_run(43, 0);
        let mut jade = Jade::new();
        for t in 1..=300 {
            for i in 0..10 {
                let p = jade.assign(i, t, &mut s.param);
                jade.observe(i, t, p, i % 2 == 0, 0.1);
            }
            jade.end_generation(t, &mut s.param);
            let (mu_f, mu_cr) = jade.means();
            assert!((0.0..=1.0).contains(&mu_f));
            assert!((0.0..=1.0).contains(&mu_cr));
        }
    }
}
