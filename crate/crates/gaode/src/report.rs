//! Text artifacts: CSV tables, the experiment metadata file, and the
//! decision notes stamped into every emitted file.
//!
//! Everything here renders to strings first so outputs stay byte-stable
//! under parallel execution and easy to assert on in tests.

use std::fmt::Write;

use crate::config::{OraclePreset, ResolvedConfig};
use crate::metrics::{
    self, ecdf, log_budget_grid, param_heatmap, select_best_run, Histogram2D, RunRecord,
};
use crate::rng::RNG_NAME;

/// Heatmap resolution: 10 x 10 bins over `[0,1] x [0,1]`.
pub const HEATMAP_BINS: usize = 10;

/// ECDF plotting resolution (pair bookkeeping itself is exact).
pub const ECDF_GRID_POINTS: usize = 100;

/// Fixed implementation choices, stamped into every output so experiments
/// are self-describing.
pub const DECISION_NOTES: &[&str] = &[
    "rng=chacha8 streams=shared,param,init",
    "trial_draw_order=parent_indices,j_rand,mask_uniforms",
    "mask_uniforms=exactly_D_per_event",
    "bound_repair=midpoint_toward_parent",
    "selection_tie=trial_survives",
    "population_rule=20_for_D_in_2..4,5xD_for_D>=5",
    "jde=tau_f_0.1,tau_cr_0.1,f_in_[0.1,1.0],init_f_0.5,init_cr_0.9,commit_on_success",
    "epsde=f_pool_0.4..0.9,cr_pool_0.1..0.9,memory_fifo_capacity_N,failed_pair_coinflip_pool_or_memory",
    "jade=c_0.1,cr_normal_0.1_clamped,f_cauchy_0.1_reject_nonpos_truncate_1,lehmer_f,arith_cr",
    "mde=power_mean_n_1.5,init_f_0.5,init_cr_0.6,weights_0.8+0.2rand,sampling_as_jade",
    "shade=h_10,weighted_lehmer_for_f_and_cr,tie_fallback_uniform_weights,cursor_freezes_on_empty",
    "gao=frozen_trial_randomness,lambda_evals_uncounted,tie_lowest_candidate_index,commit_value_reused",
    "gao_is_a_diagnostic_oracle_not_a_practical_algorithm",
    "bounds=sphere_ellipsoid_rot-ellipsoid_[-5,5],rosenbrock_[-5,10],ackley_[-32,32],rastrigin_[-5.12,5.12]",
    "sp1=mean_successful_fevals/success_rate;sp1_per_success_count_also_emitted",
];

fn fmt_f64(v: f64) -> String {
    format!("{v:e}")
}

fn config_lines(cfg: &ResolvedConfig) -> Vec<String> {
    let mut lines = vec![
        format!("method={}", cfg.method),
        format!("function={}", cfg.function.token()),
        format!("dim={}", cfg.dim),
        format!("population={}", cfg.pop_size),
        format!("runs={}", cfg.runs),
        format!("budget={}", cfg.budget),
        format!("target_error={}", fmt_f64(cfg.target_error)),
        format!("master_seed={}", cfg.master_seed),
        format!("rng={RNG_NAME}"),
    ];
    if cfg.is_oracle() {
        lines.push(format!("oracle_lambda={}", cfg.oracle.lambda));
        lines.push(format!("oracle_preset={}", cfg.oracle.preset.token()));
        lines.push(format!("oracle_repeats={}", cfg.oracle.repeats));
        let describe = |name: &str, c: &crate::gao::OracleConfig| {
            format!(
                "oracle_{name}=F({},{}],CR[{},{}]",
                c.f_min, c.f_max, c.cr_min, c.cr_max
            )
        };
        match cfg.oracle.preset {
            OraclePreset::Composite => {
                lines.push(describe("gaode00", &cfg.oracle.cfg00));
                lines.push(describe("gaode04", &cfg.oracle.cfg04));
            }
            OraclePreset::Gaode00 => lines.push(describe("gaode00", &cfg.oracle.cfg00)),
            OraclePreset::Gaode04 => lines.push(describe("gaode04", &cfg.oracle.cfg04)),
        }
    }
    lines
}

fn comment_block(cfg: &ResolvedConfig) -> String {
    let mut out = String::new();
    for line in config_lines(cfg) {
        writeln!(out, "# {line}").unwrap();
    }
    for note in DECISION_NOTES {
        writeln!(out, "# {note}").unwrap();
    }
    out
}

/// One row per run, ordered by run index.
pub fn runs_csv(cfg: &ResolvedConfig, records: &[RunRecord]) -> String {
    let mut out = comment_block(cfg);
    out.push_str(
        "run,seed,variant,success,fevals_to_success,final_error,counted_fevals,oracle_evals,generations,theta_len\n",
    );
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.meta.run_index,
            r.meta.master_seed,
            r.meta.oracle_variant.as_deref().unwrap_or(""),
            r.success,
            r.fevals_to_success
                .map(|v| v.to_string())
                .unwrap_or_default(),
            fmt_f64(r.final_error()),
            r.counted_fevals,
            r.oracle_evals,
            r.generations,
            r.theta_trace.len(),
        )
        .unwrap();
    }
    out
}

/// One aggregate row for the experiment cell.
pub fn summary_csv(cfg: &ResolvedConfig, records: &[RunRecord]) -> String {
    let successes = records.iter().filter(|r| r.success).count();
    let rate = successes as f64 / records.len() as f64;
    let opt_fmt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    let min_fe = records
        .iter()
        .filter_map(|r| r.fevals_to_success)
        .min()
        .map(|v| v.to_string())
        .unwrap_or_default();
    let mean_final_error =
        records.iter().map(RunRecord::final_error).sum::<f64>() / records.len() as f64;
    let total_oracle: u64 = records.iter().map(|r| r.oracle_evals).sum();

    let mut out = comment_block(cfg);
    out.push_str(
        "method,function,dim,population,runs,successes,success_rate,sp1,sp1_per_success_count,median_fevals_success,min_fevals_success,mean_final_error,total_oracle_evals\n",
    );
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        cfg.method,
        cfg.function.token(),
        cfg.dim,
        cfg.pop_size,
        records.len(),
        successes,
        rate,
        opt_fmt(metrics::sp1(records)),
        opt_fmt(metrics::sp1_per_success_count(records)),
        opt_fmt(metrics::median_fevals_to_success(records)),
        min_fe,
        fmt_f64(mean_final_error),
        total_oracle,
    )
    .unwrap();
    out
}

/// Heatmap of the best run's `{F, CR}` trace as a matrix block:
/// rows are F bins (low to high), columns CR bins (low to high).
pub fn heatmap_csv(cfg: &ResolvedConfig, records: &[RunRecord]) -> (String, Histogram2D) {
    let best = select_best_run(records);
    let hist = param_heatmap(&best.theta_trace, HEATMAP_BINS);
    let mut out = comment_block(cfg);
    writeln!(out, "# best_run={}", best.meta.run_index).unwrap();
    writeln!(out, "# trace_len={}", best.theta_trace.len()).unwrap();
    out.push_str("# rows=F_bins_low_to_high,cols=CR_bins_low_to_high\n");
    for row in &hist.counts {
        let cells: Vec<String> = row.iter().map(u64::to_string).collect();
        writeln!(out, "{}", cells.join(",")).unwrap();
    }
    (out, hist)
}

/// ECDF of run lengths over the 50 standard targets.
pub fn ecdf_csv(cfg: &ResolvedConfig, records: &[RunRecord]) -> crate::Result<(String, Vec<(u64, f64)>)> {
    let targets = metrics::default_targets();
    let grid = log_budget_grid(cfg.budget, ECDF_GRID_POINTS);
    let curve = ecdf(records, &targets, &grid)?;
    let mut out = comment_block(cfg);
    writeln!(out, "# targets=50_log_spaced_1e2_to_1e-8").unwrap();
    out.push_str("budget_fevals,fevals_per_dim,fraction_solved\n");
    for &(b, frac) in &curve {
        writeln!(out, "{},{},{}", b, b as f64 / cfg.dim as f64, frac).unwrap();
    }
    Ok((out, curve))
}

/// The plain-text metadata file.
pub fn meta_text(cfg: &ResolvedConfig) -> String {
    let mut out = String::new();
    for line in config_lines(cfg) {
        writeln!(out, "{line}").unwrap();
    }
    writeln!(out, "threads={}", cfg.threads).unwrap();
    writeln!(out, "heatmap_bins={HEATMAP_BINS}").unwrap();
    writeln!(out, "ecdf_grid_points={ECDF_GRID_POINTS}").unwrap();
    for note in DECISION_NOTES {
        writeln!(out, "{note}").unwrap();
    }
    out
}
