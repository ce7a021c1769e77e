//! Experiment orchestration: seeded parallel run execution, output
//! persistence, and the method-by-function sweep.
//!
//! Runs are embarrassingly parallel: each gets independent streams derived
//! from `(master_seed, run_index)`, records are collected in run order, and
//! every file is rendered from the ordered records, so output bytes do not
//! depend on the parallelism degree.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::adaptation::make_method;
use crate::benchmarks::Problem;
use crate::config::{OraclePreset, ResolvedConfig};
use crate::engine::{run_adaptive, RunSpec};
use crate::error::Result;
use crate::gao::{run_composite, run_oracle};
use crate::metrics::{self, RunMeta, RunRecord};
use crate::plot::{self, Series};
use crate::report;
use crate::rng::RngStreams;

/// Execute every run of one experiment cell, in parallel, ordered by run
/// index.
pub fn run_experiment(cfg: &ResolvedConfig) -> Result<Vec<RunRecord>> {
    let problem = Problem::new(cfg.function, cfg.dim, cfg.master_seed)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| crate::error::GaodeError::InvalidConfig(e.to_string()))?;
    pool.install(|| {
        (0..cfg.runs as u64)
            .into_par_iter()
            .map(|run_index| execute_run(cfg, &problem, run_index))
            .collect()
    })
}

/// One run of the configured method.
pub fn execute_run(cfg: &ResolvedConfig, problem: &Problem, run_index: u64) -> Result<RunRecord> {
    let spec = RunSpec {
        problem,
        pop_size: cfg.pop_size,
        budget: cfg.budget,
        target_error: cfg.target_error,
    };
    let meta = RunMeta {
        method: cfg.method.clone(),
        function: cfg.function.token().to_string(),
        dim: cfg.dim,
        pop_size: cfg.pop_size,
        budget: cfg.budget,
        target_error: cfg.target_error,
        master_seed: cfg.master_seed,
        run_index,
        lambda: cfg.is_oracle().then_some(cfg.oracle.lambda),
        oracle_variant: None,
    };
    if cfg.is_oracle() {
        match cfg.oracle.preset {
            OraclePreset::Composite => run_composite(
                &spec,
                cfg.oracle.cfg00,
                cfg.oracle.cfg04,
                cfg.oracle.repeats,
                cfg.master_seed,
                run_index,
                &meta,
            ),
            OraclePreset::Gaode00 => {
                let mut meta = meta;
                meta.oracle_variant = Some("gaode00".into());
                run_oracle(
                    &spec,
                    cfg.oracle.cfg00,
                    RngStreams::for_run(cfg.master_seed, run_index),
                    meta,
                )
            }
            OraclePreset::Gaode04 => {
                let mut meta = meta;
                meta.oracle_variant = Some("gaode04".into());
                run_oracle(
                    &spec,
                    cfg.oracle.cfg04,
                    RngStreams::for_run(cfg.master_seed, run_index),
                    meta,
                )
            }
        }
    } else {
        let method = make_method(&cfg.method, cfg.pop_size)?;
        run_adaptive(
            &spec,
            method,
            RngStreams::for_run(cfg.master_seed, run_index),
            meta,
        )
    }
}

/// Write the per-cell artifacts: `runs.csv`, `summary.csv`,
/// `heatmap_<method>.csv` and `.svg` for the best run, `ecdf.csv` and
/// `.svg`, and `meta.txt`.
pub fn write_experiment_outputs(cfg: &ResolvedConfig, records: &[RunRecord]) -> Result<()> {
    fs::create_dir_all(&cfg.output)?;
    write(cfg.output.join("runs.csv"), report::runs_csv(cfg, records))?;
    write(cfg.output.join("summary.csv"), report::summary_csv(cfg, records))?;

    let (heatmap_text, hist) = report::heatmap_csv(cfg, records);
    write(
        cfg.output.join(format!("heatmap_{}.csv", cfg.method)),
        heatmap_text,
    )?;
    let title = format!(
        "{{F, CR}} frequency, {} on {} D={} (best of {} runs)",
        cfg.method,
        cfg.function.token(),
        cfg.dim,
        records.len()
    );
    write(
        cfg.output.join(format!("heatmap_{}.svg", cfg.method)),
        plot::heatmap(&title, "CR", "F", &hist.counts),
    )?;

    let (ecdf_text, curve) = report::ecdf_csv(cfg, records)?;
    write(cfg.output.join("ecdf.csv"), ecdf_text)?;
    let series = vec![Series {
        label: cfg.method.clone(),
        points: curve
            .iter()
            .map(|&(b, f)| (b as f64 / cfg.dim as f64, f))
            .collect(),
    }];
    let title = format!(
        "ECDF of run lengths, {} on {} D={}",
        cfg.method,
        cfg.function.token(),
        cfg.dim
    );
    write(
        cfg.output.join("ecdf.svg"),
        plot::line_plot(&title, "fevals / D", "fraction of (run, target) pairs", &series, true, false),
    )?;

    write(cfg.output.join("meta.txt"), report::meta_text(cfg))?;
    Ok(())
}

fn write(path: std::path::PathBuf, text: String) -> Result<()> {
    fs::write(path, text)?;
    Ok(())
}

/// Sweep result for one cell.
pub struct SweepCell {
    pub cfg: ResolvedConfig,
    pub records: Vec<RunRecord>,
}

/// Run every cell of the cross product, write per-cell outputs under the
/// sweep root, then the aggregate SP1 table and per-function plots.
///
/// The oracle column reports the lowest successful evaluation count of the
/// composed runs rather than SP1; zero-success cells stay blank and are
/// omitted from plots.
pub fn run_sweep(cells: &[ResolvedConfig], root: &Path) -> Result<Vec<SweepCell>> {
    let mut results = Vec::with_capacity(cells.len());
    for cfg in cells {
        let records = run_experiment(cfg)?;
        write_experiment_outputs(cfg, &records)?;
        results.push(SweepCell {
            cfg: cfg.clone(),
            records,
        });
    }
    write_sweep_outputs(&results, root)?;
    Ok(results)
}

/// The aggregate score for one cell: SP1 for adaptive methods, minimum
/// successful evaluations for the oracle. `None` when nothing succeeded.
pub fn cell_score(cell: &SweepCell) -> Option<f64> {
    if cell.cfg.is_oracle() {
        cell.records
            .iter()
            .filter_map(|r| r.fevals_to_success)
            .min()
            .map(|v| v as f64)
    } else {
        metrics::sp1(&cell.records)
    }
}

fn write_sweep_outputs(results: &[SweepCell], root: &Path) -> Result<()> {
    fs::create_dir_all(root)?;

    // Preserve first-appearance order of methods and functions.
    let mut methods: Vec<String> = Vec::new();
    let mut functions: Vec<String> = Vec::new();
    let mut dims: Vec<usize> = Vec::new();
    for cell in results {
        if !methods.contains(&cell.cfg.method) {
            methods.push(cell.cfg.method.clone());
        }
        let f = cell.cfg.function.token().to_string();
        if !functions.contains(&f) {
            functions.push(f);
        }
        if !dims.contains(&cell.cfg.dim) {
            dims.push(cell.cfg.dim);
        }
    }
    dims.sort_unstable();

    let mut scores: BTreeMap<(String, usize, String), Option<f64>> = BTreeMap::new();
    for cell in results {
        scores.insert(
            (
                cell.cfg.function.token().to_string(),
                cell.cfg.dim,
                cell.cfg.method.clone(),
            ),
            cell_score(cell),
        );
    }

    // SP1 table: one row per (function, dim), methods as columns.
    let mut table = String::new();
    table.push_str("# score=sp1_for_adaptive_methods,min_successful_fevals_for_gao\n");
    table.push_str("# blank=zero_successes\n");
    table.push_str("function,dim,");
    table.push_str(&methods.join(","));
    table.push('\n');
    for function in &functions {
        for &dim in &dims {
            let mut row = format!("{function},{dim}");
            let mut any = false;
            for method in &methods {
                let score = scores
                    .get(&(function.clone(), dim, method.clone()))
                    .copied()
                    .flatten();
                if score.is_some() {
                    any = true;
                }
                row.push(',');
                if let Some(v) = score {
                    row.push_str(&format!("{v:e}"));
                }
            }
            if any || !scores.is_empty() {
                table.push_str(&row);
                table.push('\n');
            }
        }
    }
    write(root.join("sp1_table.csv"), table)?;

    // One score-vs-dimension plot per function; zero-success points omitted.
    for function in &functions {
        let series: Vec<Series> = methods
            .iter()
            .map(|method| Series {
                label: method.clone(),
                points: dims
                    .iter()
                    .filter_map(|&dim| {
                        scores
                            .get(&(function.clone(), dim, method.clone()))
                            .copied()
                            .flatten()
                            .map(|v| (dim as f64, v))
                    })
                    .collect(),
            })
            .collect();
        let svg = plot::line_plot(
            &format!("Evaluations to target on {function}"),
            "dimension D",
            "SP1 (gao: min successful fevals)",
            &series,
            false,
            true,
        );
        write(root.join(format!("sp1_{function}.svg")), svg)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ConfigDocument;

    fn doc(text: &str) -> ConfigDocument {
        ConfigDocument::parse(text).unwrap()
    }

    #[test]
    fn records_are_ordered_and_counted() {
        let cfg = doc(
            r#"
            [experiment]
            method = "jde"
            function = "sphere"
            dim = 2
            runs = 5
            budget = 400
            seed = 3
            threads = 2
            "#,
        )
        .resolve_experiment()
        .unwrap();
        let records = run_experiment(&cfg).unwrap();
        assert_eq!(records.len(), 5);
        for (i, r) in records.iter().enumerate() {
            assert_eq!(r.meta.run_index, i as u64);
        }
    }

    #[test]
    fn permuting_run_indices_leaves_each_record_identical() {
        let cfg = doc(
            r#"
            [experiment]
            method = "shade"
            function = "rastrigin"
            dim = 2
            runs = 4
            budget = 300
            seed = 11
            threads = 1
            "#,
        )
        .resolve_experiment()
        .unwrap();
        let problem = Problem::new(cfg.function, cfg.dim, cfg.master_seed).unwrap();
        let forward: Vec<_> = (0..4)
            .map(|i| execute_run(&cfg, &problem, i).unwrap())
            .collect();
        let backward: Vec<_> = (0..4)
            .rev()
            .map(|i| execute_run(&cfg, &problem, i).unwrap())
            .collect();
        for (f, b) in forward.iter().zip(backward.iter().rev()) {
            assert_eq!(f, b);
        }
    }

    #[test]
    fn outputs_land_on_disk() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = doc(&format!(
            r#"
            [experiment]
            method = "jade"
            function = "ackley"
            dim = 2
            runs = 3
            budget = 300
            seed = 5
            output = "{}"
            "#,
            dir.path().join("cell").display()
        ))
        .resolve_experiment()
        .unwrap();
        let records = run_experiment(&cfg).unwrap();
        write_experiment_outputs(&cfg, &records).unwrap();
        for name in [
            "runs.csv",
            "summary.csv",
            "heatmap_jade.csv",
            "heatmap_jade.svg",
            "ecdf.csv",
            "ecdf.svg",
            "meta.txt",
        ] {
            assert!(cfg.output.join(name).exists(), "{name} missing");
        }
    }

    #[test]
    fn zero_success_cells_stay_blank() {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().join("sweep");
        let doc = doc(&format!(
            r#"
            [experiment]
            runs = 2
            budget = 60
            seed = 1
            output = "{}"

            [sweep]
            methods = ["jde"]
            functions = ["rastrigin"]
            dims = [3]
            "#,
            root.display()
        ));
        // 60 evaluations cannot reach 1e-8 on Rastrigin.
        let cells = doc.resolve_sweep().unwrap();
        let results = run_sweep(&cells, &root).unwrap();
        assert_eq!(cell_score(&results[0]), None);
        let table = std::fs::read_to_string(root.join("sp1_table.csv")).unwrap();
        let row = table.lines().last().unwrap();
        assert_eq!(row, "rastrigin,3,");
        // The plot omits the point entirely: no markers drawn.
        let svg = std::fs::read_to_string(root.join("sp1_rastrigin.svg")).unwrap();
        assert!(!svg.contains("<circle"));
    }

    #[test]
    fn sweep_emits_table_and_plots() {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().join("sweep");
        let doc = doc(&format!(
            r#"
            [experiment]
            runs = 2
            budget = 200
            seed = 2
            output = "{}"

            [oracle]
            lambda = 4

            [sweep]
            methods = ["jde", "gao"]
            functions = ["sphere"]
            dims = [2]
            "#,
            root.display()
        ));
        let cells = doc.resolve_sweep().unwrap();
        let results = run_sweep(&cells, &root).unwrap();
        assert_eq!(results.len(), 2);
        assert!(root.join("sp1_table.csv").exists());
        assert!(root.join("sp1_sphere.svg").exists());
        assert!(root.join("jde-sphere-d2").join("runs.csv").exists());
        let table = std::fs::read_to_string(root.join("sp1_table.csv")).unwrap();
        assert!(table.contains("function,dim,jde,gao"));
    }
}
