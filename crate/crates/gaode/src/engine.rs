//! Run execution: a single run is strictly sequential and fully determined
//! by its [`RngStreams`].
//!
//! A generation is synchronous: parameters are assigned to every individual
//! first, then all trials are generated and evaluated against the current
//! population, then one-to-one selection and the adaptation feedback happen
//! together at the generation boundary. A run stops the moment the
//! best-so-far error reaches the target, or when the next evaluation would
//! exceed the budget.

use crate::adaptation::AdaptationMethod;
use crate::benchmarks::Problem;
use crate::de::{self, ControlParams, Individual, Population};
use crate::error::{GaodeError, Result};
use crate::metrics::{RunMeta, RunRecord};
use crate::rng::RngStreams;

/// What a run needs besides the method: problem, sizing, and stop rules.
#[derive(Clone, Copy, Debug)]
pub struct RunSpec<'p> {
    pub problem: &'p Problem,
    pub pop_size: usize,
    pub budget: u64,
    pub target_error: f64,
}

/// Counted-evaluation bookkeeping shared by the adaptive and oracle runners.
pub(crate) struct RunState {
    budget: u64,
    target_error: f64,
    f_star: f64,
    pub fevals: u64,
    best_error: f64,
    pub trajectory: Vec<(u64, f64)>,
    pub success: bool,
    pub fevals_to_success: Option<u64>,
}

impl RunState {
    pub fn new(budget: u64, target_error: f64, f_star: f64) -> Self {
        RunState {
            budget,
            target_error,
            f_star,
            fevals: 0,
            best_error: f64::INFINITY,
            trajectory: Vec::new(),
            success: false,
            fevals_to_success: None,
        }
    }

    /// True while another counted evaluation is allowed.
    pub fn can_eval(&self) -> bool {
        !self.success && self.fevals < self.budget
    }

    pub fn stopped(&self) -> bool {
        !self.can_eval()
    }

    /// Charge one counted evaluation and fold its value into the
    /// best-so-far trajectory and the success test.
    pub fn count_eval(&mut self, value: f64) {
        debug_assert!(self.fevals < self.budget);
        self.fevals += 1;
        let error = (value - self.f_star).abs();
        if error < self.best_error {
            self.best_error = error;
            self.trajectory.push((self.fevals, error));
            if error <= self.target_error {
                self.success = true;
                self.fevals_to_success = Some(self.fevals);
            }
        }
    }
}

/// Initialize and evaluate the population, charging one counted evaluation
/// per member.
pub(crate) fn init_population(
    spec: &RunSpec,
    streams: &mut RngStreams,
    state: &mut RunState,
) -> Population {
    let mut pop = Population::init_uniform(
        spec.pop_size,
        &spec.problem.lower,
        &spec.problem.upper,
        &mut streams.init,
    );
    for member in &mut pop.members {
        if !state.can_eval() {
            break;
        }
        let value = spec.problem.evaluate(&member.x);
        member.set_value(value);
        state.count_eval(value);
    }
    pop
}

/// A stepping adaptive-DE run.
pub struct AdaptiveRunner<'p, M: AdaptationMethod> {
    spec: RunSpec<'p>,
    method: M,
    streams: RngStreams,
    pub(crate) state: RunState,
    theta_trace: Vec<ControlParams>,
    pop: Population,
}

impl<'p, M: AdaptationMethod> AdaptiveRunner<'p, M> {
    pub fn new(spec: RunSpec<'p>, method: M, mut streams: RngStreams) -> Result<Self> {
        if spec.pop_size < 4 {
            return Err(GaodeError::PopulationTooSmall(spec.pop_size));
        }
        let mut state = RunState::new(spec.budget, spec.target_error, spec.problem.f_star());
        let pop = init_population(&spec, &mut streams, &mut state);
        Ok(AdaptiveRunner {
            spec,
            method,
            streams,
            state,
            theta_trace: Vec::new(),
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
    /// A generation cut short by the stop rules skips the boundary update.
    pub fn step_generation(&mut self) -> Result<bool> {
        if self.state.stopped() {
            return Ok(false);
        }
        let n = self.spec.pop_size;
        let dim = self.spec.problem.dim;
        let t = self.pop.generation;

        let params: Vec<ControlParams> = (0..n)
            .map(|i| self.method.assign(i, t, &mut self.streams.param))
            .collect();

        let mut trials: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n);
        for (i, &p) in params.iter().enumerate() {
            if !self.state.can_eval() {
                break;
            }
            let tr = de::draw_trial_randomness(i, n, dim, &mut self.streams.shared)?;
            let trial = de::build_trial(
                &self.pop,
                i,
                &tr,
                p,
                &self.spec.problem.lower,
                &self.spec.problem.upper,
            );
            let value = self.spec.problem.evaluate(&trial);
            self.state.count_eval(value);
            self.theta_trace.push(p);
            trials.push((trial, value));
        }

        let complete = trials.len() == n;
        for (i, (trial, value)) in trials.into_iter().enumerate() {
            let candidate = Individual::evaluated(trial, value);
            let (kept, success) = de::selection_step(&self.pop.members[i], &candidate);
            let improvement = if success {
                self.pop.members[i].value() - value
            } else {
                0.0
            };
            self.method.observe(i, t, params[i], success, improvement);
            self.pop.members[i] = kept;
        }
        if !complete {
            return Ok(false);
        }
        self.method.end_generation(t, &mut self.streams.param);
        self.pop.generation += 1;
        Ok(!self.state.stopped())
    }

    /// Run to termination and assemble the record.
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
            oracle_evals: 0,
            oracle_trace: None,
            generations: self.pop.generation - 1,
            meta,
        }
    }
}

/// Convenience wrapper: build, run, record.
pub fn run_adaptive<M: AdaptationMethod>(
    spec: &RunSpec,
    method: M,
    streams: RngStreams,
    meta: RunMeta,
) -> Result<RunRecord> {
    AdaptiveRunner::new(*spec, method, streams)?.run(meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adaptation::make_method;
    use crate::benchmarks::{FunctionKind, Problem};
    use crate::rng::Stream;

    fn meta(method: &str) -> RunMeta {
        RunMeta {
            method: method.into(),
            function: "sphere".into(),
            dim: 2,
            pop_size: 8,
            budget: 2000,
            target_error: 1e-8,
            master_seed: 1,
            run_index: 0,
            lambda: None,
            oracle_variant: None,
        }
    }

    fn spec(problem: &Problem, budget: u64) -> RunSpec<'_> {
        RunSpec {
            problem,
            pop_size: 8,
            budget,
            target_error: 1e-8,
        }
    }

    #[test]
    fn identical_seeds_give_identical_records() {
        let problem = Problem::new(FunctionKind::Rastrigin, 3, 5).unwrap();
        let spec = RunSpec {
            problem: &problem,
            pop_size: 10,
            budget: 3000,
            target_error: 1e-8,
        };
        let a = run_adaptive(
            &spec,
            make_method("shade", 10).unwrap(),
            RngStreams::for_run(5, 0),
            meta("shade"),
        )
        .unwrap();
        let b = run_adaptive(
            &spec,
            make_method("shade", 10).unwrap(),
            RngStreams::for_run(5, 0),
            meta("shade"),
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn trajectory_errors_strictly_decrease() {
        let problem = Problem::new(FunctionKind::Sphere, 2, 0).unwrap();
        let r = run_adaptive(
            &spec(&problem, 2000),
            make_method("jde", 8).unwrap(),
            RngStreams::for_run(3, 1),
            meta("jde"),
        )
        .unwrap();
        assert!(!r.trajectory.is_empty());
        assert!(r.trajectory.windows(2).all(|w| w[1].1 < w[0].1));
        assert!(r.trajectory.windows(2).all(|w| w[1].0 > w[0].0));
    }

    #[test]
    fn budget_is_respected_and_theta_matches_events() {
        let problem = Problem::new(FunctionKind::Ackley, 2, 0).unwrap();
        let budget = 123; // not a multiple of the population
        let r = run_adaptive(
            &spec(&problem, budget),
            make_method("epsde", 8).unwrap(),
            RngStreams::for_run(4, 0),
            meta("epsde"),
        )
        .unwrap();
        assert!(!r.success);
        assert_eq!(r.counted_fevals, budget);
        assert_eq!(r.theta_trace.len() as u64, budget - 8);
    }

    #[test]
    fn success_stops_the_run_immediately() {
        let problem = Problem::new(FunctionKind::Sphere, 2, 0).unwrap();
        // A loose target makes the very first evaluation a success.
        let spec = RunSpec {
            problem: &problem,
            pop_size: 8,
            budget: 10_000,
            target_error: 1e3,
        };
        let r = run_adaptive(
            &spec,
            make_method("jade", 8).unwrap(),
            RngStreams::for_run(6, 0),
            meta("jade"),
        )
        .unwrap();
        assert!(r.success);
        assert_eq!(r.fevals_to_success, Some(1));
        assert_eq!(r.counted_fevals, 1);
    }

    #[test]
    fn population_best_is_non_increasing_across_generations() {
        let problem = Problem::new(FunctionKind::Rosenbrock, 2, 0).unwrap();
        let spec = RunSpec {
            problem: &problem,
            pop_size: 8,
            budget: 2000,
            target_error: 0.0,
        };
        let mut runner = AdaptiveRunner::new(
            spec,
            make_method("shade", 8).unwrap(),
            RngStreams::for_run(8, 0),
        )
        .unwrap();
        let mut last = runner.population().best_value();
        while runner.step_generation().unwrap() {
            let best = runner.population().best_value();
            assert!(best <= last, "{best} > {last}");
            last = best;
        }
    }

    #[test]
    fn small_population_is_rejected() {
        let problem = Problem::new(FunctionKind::Sphere, 2, 0).unwrap();
        let spec = RunSpec {
            problem: &problem,
            pop_size: 3,
            budget: 100,
            target_error: 1e-8,
        };
        let err = run_adaptive(
            &spec,
            make_method("jde", 3).unwrap(),
            RngStreams::for_run(1, 0),
            meta("jde"),
        );
        assert!(matches!(err, Err(GaodeError::PopulationTooSmall(3))));
    }

    #[test]
    fn call_discipline_is_exactly_once_per_individual_per_generation() {
        use std::collections::HashMap;

        #[derive(Default)]
        struct Counter {
            assigns: HashMap<(u64, usize), u32>,
            observes: HashMap<(u64, usize), u32>,
            ends: Vec<u64>,
        }
        struct ByRef<'a>(&'a mut Counter);
        impl AdaptationMethod for ByRef<'_> {
            fn assign(&mut self, i: usize, t: u64, _rng: &mut Stream) -> ControlParams {
                *self.0.assigns.entry((t, i)).or_insert(0) += 1;
                ControlParams::new(0.5, 0.5)
            }
            fn observe(&mut self, i: usize, t: u64, _p: ControlParams, _s: bool, _d: f64) {
                *self.0.observes.entry((t, i)).or_insert(0) += 1;
            }
            fn end_generation(&mut self, t: u64, _rng: &mut Stream) {
                self.0.ends.push(t);
            }
            fn name(&self) -> &'static str {
                "counter"
            }
        }

        let problem = Problem::new(FunctionKind::Sphere, 2, 0).unwrap();
        let n = 6;
        let gens = 5u64;
        let spec = RunSpec {
            problem: &problem,
            pop_size: n,
            budget: n as u64 + gens * n as u64,
            target_error: 0.0,
        };
        let mut counter = Counter::default();
        let r = run_adaptive(
            &spec,
            ByRef(&mut counter),
            RngStreams::for_run(9, 0),
            meta("counter"),
        )
        .unwrap();
        assert_eq!(r.generations, gens);
        for t in 1..=gens {
            for i in 0..n {
                assert_eq!(counter.assigns.get(&(t, i)), Some(&1));
                assert_eq!(counter.observes.get(&(t, i)), Some(&1));
            }
        }
        assert_eq!(counter.ends, (1..=gens).collect::<Vec<_>>());
    }
}
