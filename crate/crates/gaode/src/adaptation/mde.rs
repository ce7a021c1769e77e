//! MDE's adaptation: JADE-style sampling around scalar means `F_m`, `CR_m`,
//! updated by randomly weighted power means (order 1.5) of the successful
//! values. Means start at `F_m = 0.5`, `CR_m = 0.6`.

use rand::Rng;

use super::sampling::{sample_cr_normal, sample_f_cauchy};
use super::AdaptationMethod;
use crate::de::ControlParams;
use crate::means::power_mean;
use crate::rng::Stream;

const POWER_EXPONENT: f64 = 1.5;

pub struct Mde {
    f_m: f64,
    cr_m: f64,
    success_f: Vec<f64>,
    success_cr: Vec<f64>,
}

impl Mde {
    pub fn new() -> Self {
        Mde {
            f_m: 0.5,
            cr_m: 0.6,
            success_f: Vec::new(),
            success_cr: Vec::new(),
        }
    }

    pub fn means(&self) -> (f64, f64) {
        (self.f_m, self.cr_m)
    }
}

impl Default for Mde {
    fn default() -> Self {
        Self::new()
    }
}

impl AdaptationMethod for Mde {
    fn assign(&mut self, _i: usize, _t: u64, rng: &mut Stream) -> ControlParams {
        let cr = sample_cr_normal(self.cr_m, rng);
        let f = sample_f_cauchy(self.f_m, rng);
        ControlParams::new(f, cr)
    }

    fn observe(&mut self, _i: usize, _t: u64, params: ControlParams, success: bool, _improvement: f64) {
        if success {
            self.success_f.push(params.f);
            self.success_cr.push(params.cr);
        }
    }

    fn end_generation(&mut self, _t: u64, rng: &mut Stream) {
        if !self.success_f.is_empty() {
            let w_f = 0.8 + 0.2 * rng.gen::<f64>();
            self.f_m = w_f * self.f_m + (1.0 - w_f) * power_mean(&self.success_f, POWER_EXPONENT);
            let w_cr = 0.8 + 0.2 * rng.gen::<f64>();
            self.cr_m =
                w_cr * self.cr_m + (1.0 - w_cr) * power_mean(&self.success_cr, POWER_EXPONENT);
        }
        self.success_f.clear();
        self.success_cr.clear();
    }

    fn name(&self) -> &'static str {
        "mde"
    }
}
