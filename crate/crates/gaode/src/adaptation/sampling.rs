//! Shared distribution samplers for the mean-tracking methods.

use std::f64::consts::{PI, TAU};

use rand::Rng;

use crate::rng::Stream;

/// One standard-normal deviate via Box-Muller; consumes exactly two uniforms.
fn standard_normal(rng: &mut Stream) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}

/// One Cauchy deviate with location `center` and scale `gamma`.
fn cauchy(center: f64, gamma: f64, rng: &mut Stream) -> f64 {
    let u: f64 = rng.gen();
    center + gamma * (PI * (u - 0.5)).tan()
}

/// Crossover rate: `Normal(center, 0.1)` clamped to `[0, 1]`.
pub fn sample_cr_normal(center: f64, rng: &mut Stream) -> f64 {
    (center + 0.1 * standard_normal(rng)).clamp(0.0, 1.0)
}

/// Scale factor: `Cauchy(center, 0.1)`, redrawn while nonpositive and
/// truncated to 1 above. A 1000-iteration cap falls back to the center.
pub fn sample_f_cauchy(center: f64, rng: &mut Stream) -> f64 {
    for _ in 0..1000 {
        let f = cauchy(center, 0.1, rng);
        if f > 1.0 {
            return 1.0;
        }
        if f > 0.0 {
            return f;
        }
    }
    center
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStreams;

    #[test]
    fn cr_sample_is_clamped() {
        let mut s = RngStreams::for_run(3, 0);
        for _ in 0..2000 {
            let cr = sample_cr_normal(0.95, &mut s.param);
            assert!((0.0..=1.0).contains(&cr));
        }
        // Far-out centers clamp to the boundary.
        assert_eq!(sample_cr_normal(5.0, &mut s.param), 1.0);
        assert_eq!(sample_cr_normal(-5.0, &mut s.param), 0.0);
    }

    #[test]
    fn f_sample_is_positive_and_truncated() {
        let mut s = RngStreams::for_run(4, 0);
        let mut hit_one = false;
        for _ in 0..5000 {
            let f = sample_f_cauchy(0.9, &mut s.param);
            assert!(f > 0.0 && f <= 1.0);
            hit_one |= f == 1.0;
        }
        // Heavy tail above the center must truncate to exactly 1 sometimes.
        assert!(hit_one);
    }

    #[test]
    fn normal_sampler_matches_moments_roughly() {
        let mut s = RngStreams::for_run(5, 0);
        let n = 20000;
        let samples: Vec<f64> = (0..n).map(|_| standard_normal(&mut s.param)).collect();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.03, "mean {mean}");
        assert!((var - 1.0).abs() < 0.05, "var {var}");
    }
}
