//! The greedy one-step parameter oracle and the DE that runs on it.
//!
//! At every trial event the oracle samples `lambda` candidate `{F, CR}`
//! pairs, builds all `lambda` virtual trials under one frozen
//! [`TrialRandomness`], evaluates them all without charging the run budget,
//! and commits the best. The winning pair goes into the oracle trace; the
//! committed trial's objective value is reused, so exactly one counted
//! evaluation is charged per event.
//!
//! This is a diagnostic device, not a practical optimizer: it burns
//! `lambda` uncounted evaluations per event to simulate a one-step-optimal
//! parameter choice, and its outputs are labeled accordingly.

use rand::Rng;

use crate::benchmarks::Problem;
use crate::de::{self, ControlParams, Individual, Population, TrialRandomness};
use crate::engine::{init_population, RunSpec, RunState};
use crate::error::{GaodeError, Result};
use crate::metrics::{RunMeta, RunRecord};
use crate::rng::{derive_seed, RngStreams};

/// Candidate sampling ranges and fan-out.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    /// Candidates per trial event.
    pub lambda: usize,
    /// F is drawn uniformly from `(f_min, f_max]`.
    pub f_min: f64,
    pub f_max: f64,
    /// CR is drawn uniformly from `[cr_min, cr_max]`.
    pub cr_min: f64,
    pub cr_max: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig::gaode00(200)
    }
}

impl OracleConfig {
    /// Full-range F sampling, `(0, 1]`.
    pub fn gaode00(lambda: usize) -> Self {
        OracleConfig {
            lambda,
            f_min: 0.0,
            f_max: 1.0,
            cr_min: 0.0,
            cr_max: 1.0,
        }
    }

    /// F restricted to `(0.4, 1]`.
    pub fn gaode04(lambda: usize) -> Self {
        OracleConfig {
            f_min: 0.4,
            ..OracleConfig::gaode00(lambda)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambda < 1 {
            return Err(GaodeError::InvalidConfig("lambda must be >= 1".into()));
        }
        if !(0.0 <= self.f_min && self.f_min < self.f_max && self.f_max <= 1.0) {
            return Err(GaodeError::InvalidConfig(format!(
                "F range ({}, {}] invalid",
                self.f_min, self.f_max
            )));
        }
        if !(0.0 <= self.cr_min && self.cr_min <= self.cr_max && self.cr_max <= 1.0) {
            return Err(GaodeError::InvalidConfig(format!(
                "CR range [{}, {}] invalid",
                self.cr_min, self.cr_max
            )));
        }
        Ok(())
    }

    /// One pair: F on `(f_min, f_max]` (a draw landing exactly on `f_min`
    /// is rejected and repeated), CR on `[cr_min, cr_max]`.
    pub fn sample_pair(&self, rng: &mut crate::rng::Stream) -> ControlParams {
        let f = loop {
            let f = rng.gen_range(self.f_min..=self.f_max);
            if f > self.f_min {
                break f;
            }
        };
        let cr = rng.gen_range(self.cr_min..=self.cr_max);
        ControlParams::new(f, cr)
    }

    /// The `lambda` candidates for one trial event, drawn in order from the
    /// parameter stream.
    pub fn sample_candidates(&self, rng: &mut crate::rng::Stream) -> Vec<ControlParams> {
        (0..self.lambda).map(|_| self.sample_pair(rng)).collect()
    }
}

/// The trial the oracle committed at one event.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleSelection {
    pub trial: Vec<f64>,
    pub params: ControlParams,
    pub value: f64,
    /// Index of the winning candidate; ties go to the lowest index.
    pub candidate_index: usize,
}

/// Build and evaluate all candidates' virtual trials under the frozen
/// randomness `tr` and pick the best; ties break toward the lowest index.
/// Every candidate costs one oracle (uncounted) evaluation.
pub fn evaluate_and_select(
    pop: &Population,
    i: usize,
    tr: &TrialRandomness,
    candidates: &[ControlParams],
    problem: &Problem,
) -> OracleSelection {
    assert!(!candidates.is_empty());
    let mut best: Option<OracleSelection> = None;
    for (index, &params) in candidates.iter().enumerate() {
        let trial = de::build_trial(pop, i, tr, params, &problem.lower, &problem.upper);
        let value = problem.evaluate(&trial);
        let better = best.as_ref().is_none_or(|b| value < b.value);
        if better {
            best = Some(OracleSelection {
                trial,
                params,
                value,
                candidate_index: index,
            });
        }
    }
    best.expect("at least one candidate")
}

/// One committed event: the counted-evaluation index it happened at, the
/// winning pair, and the committed objective value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleTraceEntry {
    pub fevals: u64,
    pub params: ControlParams,
    pub value: f64,
}

/// The oracle's decision trace over a whole run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OracleTrace {
    pub entries: Vec<OracleTraceEntry>,
    /// Total uncounted evaluations: `lambda` per entry.
    pub oracle_evals: u64,
}

/// A stepping oracle-DE run, mirroring the adaptive runner's generation
/// structure so the two are comparable event for event.
pub struct OracleRunner<'p> {
    spec: RunSpec<'p>,
    cfg: OracleConfig,
    streams: RngStreams,
    state: RunState,
    theta_trace: Vec<ControlParams>,
    trace: OracleTrace,
    pop: Population,
}

impl<'p> OracleRunner<'p> {
    pub fn new(spec: RunSpec<'p>, cfg: OracleConfig, mut streams: RngStreams) -> Result<Self> {
        cfg.validate()?;
        if spec.pop_size < 4 {
            return Err(GaodeError::PopulationTooSmall(spec.pop_size));
        }
        let mut state = RunState::new(spec.budget, spec.target_error, spec.problem.f_star());
        let pop = init_population(&spec, &mut streams, &mut state);
        Ok(OracleRunner {
            spec,
            cfg,
            streams,
            state,
            theta_trace: Vec::new(),
            trace: OracleTrace::default(),
            pop,
        })
    }

    pub fn population(&self) -> &Population {
        &self.pop
    }

    pub fn stopped(&self) -> bool {
        self.state.stopped()
    }

    /// Advance one generation; returns false once the run has stopped.
    pub fn step_generation(&mut self) -> Result<bool> {
        if self.state.stopped() {
            return Ok(false);
        }
        let n = self.spec.pop_size;
        let dim = self.spec.problem.dim;

        let mut trials: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n);
        for i in 0..n {
            if !self.state.can_eval() {
                break;
            }
            let tr = de::draw_trial_randomness(i, n, dim, &mut self.streams.shared)?;
            let candidates = self.cfg.sample_candidates(&mut self.streams.param);
            let selection =
                evaluate_and_select(&self.pop, i, &tr, &candidates, self.spec.problem);
            self.trace.oracle_evals += candidates.len() as u64;
            // Commit: the winner's value is reused, one counted evaluation.
            self.state.count_eval(selection.value);
            self.theta_trace.push(selection.params);
            self.trace.entries.push(OracleTraceEntry {
                fevals: self.state.fevals,
                params: selection.params,
                value: selection.value,
            });
            trials.push((selection.trial, selection.value));
        }

        let complete = trials.len() == n;
        for (i, (trial, value)) in trials.into_iter().enumerate() {
            let candidate = Individual::evaluated(trial, value);
            let (kept, _) = de::selection_step(&self.pop.members[i], &candidate);
            self.pop.members[i] = kept;
        }
        if !complete {
            return Ok(false);
        }
        self.pop.generation += 1;
        Ok(!self.state.stopped())
    }

    pub fn run(mut self, meta: RunMeta) -> Result<RunRecord> {
        while self.step_generation()? {}
        Ok(self.into_record(meta))
    }

    pub fn into_record(self, meta: RunMeta) -> RunRecord {
        RunRecord {
            success: self.state.success,
            fevals_to_success: self.state.fevals_to_success,
            trajectory: self.state.trajectory,
            theta_trace: self.theta_trace,
            counted_fevals: self.state.fevals,
            oracle_evals: self.trace.oracle_evals,
            oracle_trace: Some(self.trace),
            generations: self.pop.generation - 1,
            meta,
        }
    }
}

/// Execute one oracle run.
pub fn run_oracle(
    spec: &RunSpec,
    cfg: OracleConfig,
    streams: RngStreams,
    meta: RunMeta,
) -> Result<RunRecord> {
    OracleRunner::new(*spec, cfg, streams)?.run(meta)
}

/// Composite protocol: run the full-range and restricted-range variants
/// `repeats` times each under distinct derived seeds and keep the best
/// record: success with minimum counted evaluations; among failures, the
/// smallest final error. Ties keep the earliest run.
pub fn run_composite(
    spec: &RunSpec,
    cfg00: OracleConfig,
    cfg04: OracleConfig,
    repeats: usize,
    master_seed: u64,
    run_index: u64,
    meta: &RunMeta,
) -> Result<RunRecord> {
    assert!(repeats >= 1);
    let base = derive_seed(master_seed, run_index, 0);
    let mut best: Option<RunRecord> = None;
    for (variant_id, (cfg, variant)) in [(cfg00, "gaode00"), (cfg04, "gaode04")]
        .into_iter()
        .enumerate()
    {
        for repeat in 0..repeats {
            let sub_seed = derive_seed(base, 1000 + variant_id as u64, repeat as u64);
            let streams = RngStreams::from_run_seed(sub_seed);
            let mut meta = meta.clone();
            meta.oracle_variant = Some(variant.to_string());
            let record = run_oracle(spec, cfg, streams, meta)?;
            let better = match &best {
                None => true,
                Some(b) => match (b.fevals_to_success, record.fevals_to_success) {
                    (Some(a), Some(c)) => c < a,
                    (Some(_), None) => false,
                    (None, Some(_)) => true,
                    (None, None) => record.final_error() < b.final_error(),
                },
            };
            if better {
                best = Some(record);
            }
        }
    }
    Ok(best.expect("repeats >= 1"))
}
