//! Means used by the success-driven parameter updates.

/// Lehmer (contraharmonic) mean: `sum(s^2) / sum(s)`.
///
/// Biased toward larger values; stays within `[min, max]` of the sample.
pub fn lehmer_mean(values: &[f64]) -> f64 {
    debug_assert!(!values.is_empty());
    let num: f64 = values.iter().map(|s| s * s).sum();
    let den: f64 = values.iter().sum();
    num / den
}

/// Weighted Lehmer mean: `sum(w s^2) / sum(w s)`.
///
/// Falls back to 0 when the denominator vanishes (all weighted values zero),
/// which can only happen for crossover rates.
pub fn weighted_lehmer_mean(values: &[f64], weights: &[f64]) -> f64 {
    debug_assert_eq!(values.len(), weights.len());
    debug_assert!(!values.is_empty());
    let num: f64 = values.iter().zip(weights).map(|(s, w)| w * s * s).sum();
    let den: f64 = values.iter().zip(weights).map(|(s, w)| w * s).sum();
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Power mean of order `n`: `(sum(s^n) / |S|)^(1/n)`.
pub fn power_mean(values: &[f64], n: f64) -> f64 {
    debug_assert!(!values.is_empty());
    let s: f64 = values.iter().map(|v| v.powf(n)).sum();
    (s / values.len() as f64).powf(1.0 / n)
}

/// Arithmetic mean.
pub fn arithmetic_mean(values: &[f64]) -> f64 {
    debug_assert!(!values.is_empty());
    values.iter().sum::<f64>() / values.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lehmer_of_constant_set() {
        assert_eq!(lehmer_mean(&[0.5, 0.5]), 0.5);
    }

    #[test]
    fn lehmer_two_point() {
        // (0.04 + 0.64) / (0.2 + 0.8)
        assert!((lehmer_mean(&[0.2, 0.8]) - 0.68).abs() < 1e-15);
    }

    #[test]
    fn weighted_lehmer_singleton() {
        assert_eq!(weighted_lehmer_mean(&[0.7], &[1.0]), 0.7);
    }

    #[test]
    fn weighted_lehmer_zero_denominator() {
        assert_eq!(weighted_lehmer_mean(&[0.0, 0.0], &[0.5, 0.5]), 0.0);
    }

    #[test]
    fn power_mean_of_constant_set() {
        assert!((power_mean(&[0.4, 0.4], 1.5) - 0.4).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn means_stay_within_sample_range(
            values in proptest::collection::vec(0.001f64..=1.0, 1..12),
        ) {
            let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let slack = 1e-12;
            let lm = lehmer_mean(&values);
            let pm = power_mean(&values, 1.5);
            prop_assert!(lm >= lo - slack && lm <= hi + slack);
            prop_assert!(pm >= lo - slack && pm <= hi + slack);
        }

        #[test]
        fn weighted_lehmer_within_range(
            values in proptest::collection::vec(0.001f64..=1.0, 1..12),
            raw_weights in proptest::collection::vec(0.0f64..1.0, 12),
        ) {
            let weights: Vec<f64> = raw_weights[..values.len()].to_vec();
            let total: f64 = weights.iter().sum();
            prop_assume!(total > 0.0);
            let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let m = weighted_lehmer_mean(&values, &weights);
            prop_assert!(m >= lo - 1e-12 && m <= hi + 1e-12);
        }
    }
}
