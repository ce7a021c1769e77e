//! Run records and the success/performance metrics computed over them:
//! SP1, target-based ECDF, and `{F, CR}` frequency histograms.

use crate::de::ControlParams;
use crate::error::{GaodeError, Result};
use crate::gao::OracleTrace;

/// Identifying metadata carried by every run record; emitted verbatim into
/// output files so results are self-describing.
#[derive(Clone, Debug, PartialEq)]
pub struct RunMeta {
    pub method: String,
    pub function: String,
    pub dim: usize,
    pub pop_size: usize,
    pub budget: u64,
    pub target_error: f64,
    pub master_seed: u64,
    pub run_index: u64,
    /// Oracle fan-out, when the run used the oracle.
    pub lambda: Option<usize>,
    /// Which oracle variant produced this record (`gaode00`/`gaode04`).
    pub oracle_variant: Option<String>,
}

/// Outcome of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub success: bool,
    /// Counted evaluations at the moment the target was first reached.
    pub fevals_to_success: Option<u64>,
    /// Sparse best-so-far trajectory: one `(fevals, error)` entry per strict
    /// improvement, errors non-increasing.
    pub trajectory: Vec<(u64, f64)>,
    /// The `{F, CR}` pair consumed by each counted trial event, in order.
    pub theta_trace: Vec<ControlParams>,
    /// Counted objective evaluations performed (initialization included).
    pub counted_fevals: u64,
    /// Oracle evaluations, never charged to the budget. Zero for the
    /// adaptive methods.
    pub oracle_evals: u64,
    /// Per-event oracle selections, present only for oracle runs.
    pub oracle_trace: Option<OracleTrace>,
    pub generations: u64,
    pub meta: RunMeta,
}

impl RunRecord {
    /// Best error seen by the end of the run.
    pub fn final_error(&self) -> f64 {
        self.trajectory.last().map_or(f64::INFINITY, |&(_, e)| e)
    }

    /// First counted evaluation at which the error dropped to `target`,
    /// if it ever did.
    pub fn fevals_to_target(&self, target: f64) -> Option<u64> {
        self.trajectory
            .iter()
            .find(|&&(_, e)| e <= target)
            .map(|&(fe, _)| fe)
    }
}

/// Success Performance 1: mean counted evaluations over successful runs,
/// divided by the success rate. `None` when no run succeeded.
pub fn sp1(records: &[RunRecord]) -> Option<f64> {
    let successes: Vec<u64> = records
        .iter()
        .filter_map(|r| r.fevals_to_success)
        .collect();
    if successes.is_empty() {
        return None;
    }
    let mean = successes.iter().sum::<u64>() as f64 / successes.len() as f64;
    let rate = successes.len() as f64 / records.len() as f64;
    Some(mean / rate)
}

/// The literal "mean successful evaluations divided by the number of
/// successes" reading; emitted alongside [`sp1`] for transparency.
pub fn sp1_per_success_count(records: &[RunRecord]) -> Option<f64> {
    let successes: Vec<u64> = records
        .iter()
        .filter_map(|r| r.fevals_to_success)
        .collect();
    if successes.is_empty() {
        return None;
    }
    let mean = successes.iter().sum::<u64>() as f64 / successes.len() as f64;
    Some(mean / successes.len() as f64)
}

/// Median counted evaluations over successful runs; `None` when no run
/// succeeded. Even-sized samples average the two middle values.
pub fn median_fevals_to_success(records: &[RunRecord]) -> Option<f64> {
    let mut successes: Vec<u64> = records
        .iter()
        .filter_map(|r| r.fevals_to_success)
        .collect();
    if successes.is_empty() {
        return None;
    }
    successes.sort_unstable();
    let n = successes.len();
    Some(if n % 2 == 1 {
        successes[n / 2] as f64
    } else {
        (successes[n / 2 - 1] + successes[n / 2]) as f64 / 2.0
    })
}

/// The 50 log-spaced error targets from `1e2` down to `1e-8`.
pub fn default_targets() -> Vec<f64> {
    (1..=50)
        .map(|i| 10f64.powf(2.0 - 10.0 * (i - 1) as f64 / 49.0))
        .collect()
}

/// 100 log-spaced budget points from 1 to `budget`, deduplicated.
pub fn log_budget_grid(budget: u64, points: usize) -> Vec<u64> {
    assert!(budget >= 1 && points >= 2);
    let mut grid: Vec<u64> = (0..points)
        .map(|k| {
            let t = k as f64 / (points - 1) as f64;
            (budget as f64).powf(t).round() as u64
        })
        .collect();
    grid.dedup();
    grid
}

/// Fraction of `(run, target)` pairs solved within each budget of the grid.
pub fn ecdf(records: &[RunRecord], targets: &[f64], budget_grid: &[u64]) -> Result<Vec<(u64, f64)>> {
    if records.is_empty() {
        return Err(GaodeError::EmptyRecords);
    }
    let mut hits: Vec<u64> = Vec::new();
    let total_pairs = records.len() * targets.len();
    for record in records {
        for &target in targets {
            if let Some(fe) = record.fevals_to_target(target) {
                hits.push(fe);
            }
        }
    }
    hits.sort_unstable();
    let curve = budget_grid
        .iter()
        .map(|&b| {
            let solved = hits.partition_point(|&fe| fe <= b);
            (b, solved as f64 / total_pairs as f64)
        })
        .collect();
    Ok(curve)
}

/// `B x B` bin counts over `[0,1] x [0,1]`, F on the first axis.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram2D {
    pub bins: usize,
    /// `counts[f_bin][cr_bin]`.
    pub counts: Vec<Vec<u64>>,
}

impl Histogram2D {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Counts along the F axis (summed over CR bins).
    pub fn f_marginal(&self) -> Vec<u64> {
        self.counts.iter().map(|row| row.iter().sum()).collect()
    }

    /// Counts along the CR axis (summed over F bins).
    pub fn cr_marginal(&self) -> Vec<u64> {
        (0..self.bins)
            .map(|j| self.counts.iter().map(|row| row[j]).sum())
            .collect()
    }
}

/// Bin a `{F, CR}` trace; values at 1.0 clamp into the last bin.
pub fn param_heatmap(trace: &[ControlParams], bins: usize) -> Histogram2D {
    assert!(bins >= 1);
    let mut counts = vec![vec![0u64; bins]; bins];
    for p in trace {
        let fi = ((p.f * bins as f64) as usize).min(bins - 1);
        let ci = ((p.cr * bins as f64) as usize).min(bins - 1);
        counts[fi][ci] += 1;
    }
    Histogram2D { bins, counts }
}

/// The best record: successful with minimum evaluations, else the smallest
/// final error; ties keep the earliest index.
pub fn select_best_run(records: &[RunRecord]) -> &RunRecord {
    assert!(!records.is_empty());
    records
        .iter()
        .reduce(|best, r| {
            let better = match (best.fevals_to_success, r.fevals_to_success) {
                (Some(a), Some(b)) => b < a,
                (Some(_), None) => false,
                (None, Some(_)) => true,
                (None, None) => r.final_error() < best.final_error(),
            };
            if better {
                r
            } else {
                best
            }
        })
        .expect("nonempty records")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta() -> RunMeta {
        RunMeta {
            method: "test".into(),
            function: "sphere".into(),
            dim: 2,
            pop_size: 4,
            budget: 1000,
            target_error: 1e-8,
            master_seed: 0,
            run_index: 0,
            lambda: None,
            oracle_variant: None,
        }
    }

    fn record(success_at: Option<u64>, trajectory: Vec<(u64, f64)>) -> RunRecord {
        RunRecord {
            success: success_at.is_some(),
            fevals_to_success: success_at,
            trajectory,
            theta_trace: vec![],
            counted_fevals: 1000,
            oracle_evals: 0,
            oracle_trace: None,
            generations: 10,
            meta: meta(),
        }
    }

    #[test]
    fn sp1_full_success_is_the_mean() {
        let records: Vec<RunRecord> = [100, 200, 300]
            .iter()
            .map(|&fe| record(Some(fe), vec![(fe, 0.0)]))
            .collect();
        assert_eq!(sp1(&records), Some(200.0));
    }

    #[test]
    fn sp1_divides_by_success_rate() {
        let records = vec![
            record(Some(100), vec![(100, 0.0)]),
            record(Some(300), vec![(300, 0.0)]),
            record(None, vec![(1000, 1.0)]),
            record(None, vec![(1000, 2.0)]),
        ];
        assert_eq!(sp1(&records), Some(400.0));
        assert_eq!(sp1_per_success_count(&records), Some(100.0));
    }

    #[test]
    fn sp1_undefined_without_successes() {
        let records = vec![record(None, vec![(1000, 1.0)])];
        assert_eq!(sp1(&records), None);
        assert_eq!(sp1_per_success_count(&records), None);
        assert_eq!(median_fevals_to_success(&records), None);
    }

    #[test]
    fn median_over_successful_runs() {
        let records = vec![
            record(Some(400), vec![(400, 0.0)]),
            record(None, vec![(1000, 1.0)]),
            record(Some(100), vec![(100, 0.0)]),
            record(Some(200), vec![(200, 0.0)]),
        ];
        assert_eq!(median_fevals_to_success(&records), Some(200.0));
        let even = vec![records[0].clone(), records[3].clone()];
        assert_eq!(median_fevals_to_success(&even), Some(300.0));
    }

    #[test]
    fn targets_span_1e2_to_1e_minus_8() {
        let t = default_targets();
        assert_eq!(t.len(), 50);
        assert!((t[0] - 100.0).abs() < 1e-12);
        assert!((t[49] - 1e-8).abs() < 1e-20);
        assert!(t.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn ecdf_enumerated_pairs() {
        // Two runs, two targets (10.0 and 0.1).
        // Run A hits 10.0 at 10 fevals, 0.1 at 20. Run B hits 10.0 at 30 only.
        let a = record(None, vec![(10, 5.0), (20, 0.05)]);
        let b = record(None, vec![(30, 6.0)]);
        let targets = [10.0, 0.1];
        let curve = ecdf(&[a, b], &targets, &[5, 25, 40]).unwrap();
        assert_eq!(curve, vec![(5, 0.0), (25, 0.5), (40, 0.75)]);
    }

    #[test]
    fn ecdf_budget_zero_counts_zero_feval_entries() {
        let r = record(None, vec![(0, 50.0)]);
        let curve = ecdf(&[r], &[100.0, 1.0], &[0]).unwrap();
        assert_eq!(curve, vec![(0, 0.5)]);
    }

    #[test]
    fn ecdf_solved_run_hits_all_targets() {
        let r = record(Some(500), vec![(100, 50.0), (500, 1e-9)]);
        let targets = default_targets();
        let curve = ecdf(std::slice::from_ref(&r), &targets, &[1000]).unwrap();
        assert_eq!(curve, vec![(1000, 1.0)]);
    }

    #[test]
    fn ecdf_rejects_empty_records() {
        assert!(ecdf(&[], &[1.0], &[10]).is_err());
    }

    #[test]
    fn ecdf_is_monotone() {
        let a = record(None, vec![(3, 9.0), (70, 0.5), (400, 1e-3)]);
        let b = record(None, vec![(9, 20.0), (120, 2.0)]);
        let grid = log_budget_grid(1000, 50);
        let curve = ecdf(&[a, b], &default_targets(), &grid).unwrap();
        assert!(curve.windows(2).all(|w| w[0].1 <= w[1].1));
        assert!(curve.iter().all(|&(_, v)| (0.0..=1.0).contains(&v)));
    }

    #[test]
    fn heatmap_binning_and_conservation() {
        let trace = vec![
            ControlParams::new(0.05, 0.95),
            ControlParams::new(1.0, 1.0),
            ControlParams::new(0.55, 0.15),
        ];
        let h = param_heatmap(&trace, 10);
        assert_eq!(h.counts[0][9], 1);
        assert_eq!(h.counts[9][9], 1);
        assert_eq!(h.counts[5][1], 1);
        assert_eq!(h.total(), 3);
    }

    #[test]
    fn heatmap_conserves_large_traces() {
        let trace: Vec<ControlParams> = (0..4000)
            .map(|k| ControlParams::new(((k % 997) as f64 + 1.0) / 997.0, (k % 31) as f64 / 30.0))
            .collect();
        assert_eq!(param_heatmap(&trace, 10).total(), 4000);
    }

    #[test]
    fn best_run_selection_rules() {
        let fast = record(Some(4000), vec![(4000, 0.0)]);
        let slow = record(Some(5000), vec![(5000, 0.0)]);
        let close = record(None, vec![(1000, 1e-5)]);
        let far = record(None, vec![(1000, 1e-3)]);

        let records = vec![slow.clone(), fast.clone()];
        assert_eq!(select_best_run(&records), &fast);

        let records = vec![far.clone(), close.clone()];
        assert_eq!(select_best_run(&records), &close);

        let records = vec![far.clone(), close.clone(), slow.clone()];
        assert_eq!(select_best_run(&records), &slow);

        // Tie on fevals keeps the earliest.
        let records = vec![fast.clone(), fast.clone()];
        assert!(std::ptr::eq(select_best_run(&records), &records[0]));
    }
}
