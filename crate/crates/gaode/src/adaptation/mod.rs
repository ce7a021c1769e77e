//! Online `{F, CR}` adaptation, decoupled from the mutation and crossover
//! operators it feeds.
//!
//! The generation contract every method follows:
//!
//! 1. `assign` is called exactly once per individual at the start of each
//!    generation and returns the pair used to build that individual's trial.
//! 2. `observe` is called exactly once per generated trial after selection,
//!    with the success flag (`f(trial) <= f(parent)`) and the improvement.
//! 3. `end_generation` is called once after all observations and may fold
//!    the successful pairs into the method's state.
//!
//! Methods draw from the parameter stream only; the trial-randomness stream
//! stays untouched so oracle comparisons remain aligned.

mod epsde;
mod jade;
mod jde;
mod mde;
mod sampling;
mod shade;

pub use epsde::Epsde;
pub use jade::Jade;
pub use jde::Jde;
pub use mde::Mde;
pub use sampling::{sample_cr_normal, sample_f_cauchy};
pub use shade::Shade;

use crate::de::ControlParams;
use crate::error::{GaodeError, Result};
use crate::rng::Stream;

/// A parameter adaptation method driving one run.
pub trait AdaptationMethod {
    /// Pair for individual `i` in generation `t`.
    fn assign(&mut self, i: usize, t: u64, rng: &mut Stream) -> ControlParams;

    /// Selection feedback for individual `i`. `improvement` is
    /// `f(parent) - f(trial)`, nonnegative whenever `success` holds.
    fn observe(&mut self, i: usize, t: u64, params: ControlParams, success: bool, improvement: f64);

    /// Generation boundary; success-set updates happen here.
    fn end_generation(&mut self, t: u64, rng: &mut Stream);

    /// Method token, as used in configs and output files.
    fn name(&self) -> &'static str;
}

impl AdaptationMethod for Box<dyn AdaptationMethod + Send> {
    fn assign(&mut self, i: usize, t: u64, rng: &mut Stream) -> ControlParams {
        (**self).assign(i, t, rng)
    }

    fn observe(&mut self, i: usize, t: u64, params: ControlParams, success: bool, improvement: f64) {
        (**self).observe(i, t, params, success, improvement)
    }

    fn end_generation(&mut self, t: u64, rng: &mut Stream) {
        (**self).end_generation(t, rng)
    }

    fn name(&self) -> &'static str {
        (**self).name()
    }
}

/// All adaptive method tokens (the oracle is selected separately).
pub const METHOD_TOKENS: [&str; 5] = ["jde", "epsde", "jade", "mde", "shade"];

/// Instantiate a method by token for a population of `pop_size`.
pub fn make_method(token: &str, pop_size: usize) -> Result<Box<dyn AdaptationMethod + Send>> {
    match token {
        "jde" => Ok(Box::new(Jde::new(pop_size))),
        "epsde" => Ok(Box::new(Epsde::new(pop_size))),
        "jade" => Ok(Box::new(Jade::new())),
        "mde" => Ok(Box::new(Mde::new())),
        "shade" => Ok(Box::new(Shade::new(10))),
        other => Err(GaodeError::UnknownMethod(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStreams;

    #[test]
    fn tokens_round_trip() {
        for token in METHOD_TOKENS {
            let m = make_method(token, 8).unwrap();
            assert_eq!(m.name(), token);
        }
        assert!(make_method("cma", 8).is_err());
    }

    #[test]
    fn every_method_emits_valid_params() {
        let mut streams = RngStreams::for_run(11, 0);
        for token in METHOD_TOKENS {
            let mut m = make_method(token, 10).unwrap();
            for t in 1..=30u64 {
                for i in 0..10 {
                    let p = m.assign(i, t, &mut streams.param);
                    assert!(p.f > 0.0 && p.f <= 1.0, "{token}: F = {}", p.f);
                    assert!((0.0..=1.0).contains(&p.cr), "{token}: CR = {}", p.cr);
                    let success = i % 3 == 0;
                    m.observe(i, t, p, success, if success { 0.5 } else { 0.0 });
                }
                m.end_generation(t, &mut streams.param);
            }
        }
    }
}
