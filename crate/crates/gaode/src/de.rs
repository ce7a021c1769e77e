//! Differential evolution primitives: population handling, rand/1 mutation,
//! binomial crossover, one-to-one survivor selection, and bound repair.
//!
//! Randomness for one trial event is drawn once, up front, into a
//! [`TrialRandomness`] value. Trial construction itself is then fully
//! deterministic, which is what lets the oracle build many virtual trials
//! from different `{F, CR}` pairs under identical randomness.

use rand::Rng;

use crate::error::{GaodeError, Result};
use crate::rng::Stream;

/// One `{F, CR}` pair attached to a trial-generation event.
///
/// `F` is the scale factor in `(0, 1]`, `CR` the crossover rate in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ControlParams {
    pub f: f64,
    pub cr: f64,
}

impl ControlParams {
    /// Panics if the pair is outside `(0,1] x [0,1]`; every sampler in this
    /// crate is clamped or rejected into range before construction.
    pub fn new(f: f64, cr: f64) -> Self {
        assert!(f > 0.0 && f <= 1.0, "scale factor {f} outside (0, 1]");
        assert!((0.0..=1.0).contains(&cr), "crossover rate {cr} outside [0, 1]");
        ControlParams { f, cr }
    }
}

/// A decision vector with its cached objective value.
#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub x: Vec<f64>,
    fx: Option<f64>,
}

impl Individual {
    pub fn unevaluated(x: Vec<f64>) -> Self {
        Individual { x, fx: None }
    }

    pub fn evaluated(x: Vec<f64>, fx: f64) -> Self {
        Individual { x, fx: Some(fx) }
    }

    pub fn set_value(&mut self, fx: f64) {
        self.fx = Some(fx);
    }

    pub fn is_evaluated(&self) -> bool {
        self.fx.is_some()
    }

    /// Cached objective value; panics if the individual was never evaluated.
    pub fn value(&self) -> f64 {
        self.fx.expect("individual used before evaluation")
    }
}

/// Fixed-size population with a generation counter starting at 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Population {
    pub members: Vec<Individual>,
    pub generation: u64,
}

impl Population {
    /// Uniform initialization inside the box, drawn from `init` only.
    pub fn init_uniform(size: usize, lower: &[f64], upper: &[f64], init: &mut Stream) -> Self {
        let dim = lower.len();
        let members = (0..size)
            .map(|_| {
                let x = (0..dim)
                    .map(|j| lower[j] + init.gen::<f64>() * (upper[j] - lower[j]))
                    .collect();
                Individual::unevaluated(x)
            })
            .collect();
        Population { members, generation: 1 }
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn best_value(&self) -> f64 {
        self.members
            .iter()
            .filter(|m| m.is_evaluated())
            .map(Individual::value)
            .fold(f64::INFINITY, f64::min)
    }
}

/// The frozen random draws shared by every virtual trial of one event.
///
/// Exactly `D` mask uniforms are drawn whatever `CR` later turns out to be,
/// so consumption from the shared stream never depends on parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRandomness {
    pub r1: usize,
    pub r2: usize,
    pub r3: usize,
    pub j_rand: usize,
    pub mask_uniforms: Vec<f64>,
}

/// Draw the randomness for one trial event of target `i`.
///
/// Consumes the shared stream only. Draw order is fixed: parent indices
/// (rejection-sampled until distinct and != i), then `j_rand`, then the
/// `D` mask uniforms; the order is recorded in output metadata.
pub fn draw_trial_randomness(
    i: usize,
    pop_size: usize,
    dim: usize,
    shared: &mut Stream,
) -> Result<TrialRandomness> {
    if pop_size < 4 {
        return Err(GaodeError::PopulationTooSmall(pop_size));
    }
    debug_assert!(dim >= 1);
    debug_assert!(i < pop_size);

    let mut picked = [usize::MAX; 3];
    for slot in 0..3 {
        loop {
            let r = shared.gen_range(0..pop_size);
            if r != i && !picked[..slot].contains(&r) {
                picked[slot] = r;
                break;
            }
        }
    }
    let j_rand = shared.gen_range(0..dim);
    let mask_uniforms = (0..dim).map(|_| shared.gen::<f64>()).collect();

    Ok(TrialRandomness {
        r1: picked[0],
        r2: picked[1],
        r3: picked[2],
        j_rand,
        mask_uniforms,
    })
}

/// rand/1 mutation: `v = x_{r1} + F * (x_{r2} - x_{r3})`.
pub fn rand1_mutation(pop: &Population, tr: &TrialRandomness, f: f64) -> Vec<f64> {
    let a = &pop.members[tr.r1].x;
    let b = &pop.members[tr.r2].x;
    let c = &pop.members[tr.r3].x;
    a.iter()
        .zip(b.iter().zip(c))
        .map(|(&a_j, (&b_j, &c_j))| a_j + f * (b_j - c_j))
        .collect()
}

/// Binomial crossover against the pre-drawn mask.
///
/// Coordinate `j` comes from the mutant when `mask[j] <= CR` or `j == j_rand`,
/// so at least one coordinate is always inherited from the mutant.
pub fn binomial_crossover(
    parent: &[f64],
    mutant: &[f64],
    cr: f64,
    tr: &TrialRandomness,
) -> Vec<f64> {
    debug_assert_eq!(tr.mask_uniforms.len(), parent.len());
    parent
        .iter()
        .zip(mutant)
        .enumerate()
        .map(|(j, (&p_j, &m_j))| {
            if tr.mask_uniforms[j] <= cr || j == tr.j_rand {
                m_j
            } else {
                p_j
            }
        })
        .collect()
}

/// One-to-one survivor selection. Ties go to the trial.
///
/// Returns the surviving individual and whether the trial was successful,
/// i.e. `f(trial) <= f(parent)`.
pub fn selection_step(parent: &Individual, trial: &Individual) -> (Individual, bool) {
    let success = trial.value() <= parent.value();
    if success {
        (trial.clone(), true)
    } else {
        (parent.clone(), false)
    }
}

/// Full trial construction for target `i` under frozen randomness:
/// rand/1 mutation, binomial crossover, midpoint bound repair.
pub fn build_trial(
    pop: &Population,
    i: usize,
    tr: &TrialRandomness,
    params: ControlParams,
    lower: &[f64],
    upper: &[f64],
) -> Vec<f64> {
    let mutant = rand1_mutation(pop, tr, params.f);
    let trial = binomial_crossover(&pop.members[i].x, &mutant, params.cr, tr);
    repair_bounds(trial, &pop.members[i].x, lower, upper)
}

/// Midpoint bound repair: each out-of-range coordinate is replaced by the
/// midpoint of the parent coordinate and the violated bound.
pub fn repair_bounds(mut trial: Vec<f64>, parent: &[f64], lower: &[f64], upper: &[f64]) -> Vec<f64> {
    for j in 0..trial.len() {
        if trial[j] < lower[j] {
            trial[j] = (parent[j] + lower[j]) / 2.0;
        } else if trial[j] > upper[j] {
            trial[j] = (parent[j] + upper[j]) / 2.0;
        }
    }
    trial
}
