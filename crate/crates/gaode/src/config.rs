//! Experiment configuration: a single TOML document with `[experiment]`,
//! `[oracle]`, and `[sweep]` sections. Every field has a protocol default
//! so desk-scale overrides stay short.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::benchmarks::FunctionKind;
use crate::error::{GaodeError, Result};
use crate::gao::OracleConfig;

/// Protocol defaults applied when a field is left unset.
pub const DEFAULT_RUNS: usize = 51;
pub const DEFAULT_TARGET_ERROR: f64 = 1e-8;
pub const DEFAULT_LAMBDA: usize = 200;
pub const DEFAULT_SEED: u64 = 1;
/// Budget scales with dimension: `dim * 100_000`.
pub const BUDGET_PER_DIM: u64 = 100_000;

/// Environment variable naming the root directory for outputs.
pub const OUTPUT_ROOT_ENV: &str = "GAODE_OUT";

/// Population-size rule: 20 up to four dimensions, `5 * dim` from five.
pub fn default_population_size(dim: usize) -> Result<usize> {
    if dim < 2 {
        return Err(GaodeError::DimensionTooSmall(dim));
    }
    Ok(if dim <= 4 { 20 } else { 5 * dim })
}

/// Raw `[experiment]` section; all fields optional.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub method: Option<String>,
    pub function: Option<String>,
    pub dim: Option<usize>,
    pub runs: Option<usize>,
    pub population: Option<usize>,
    pub budget: Option<u64>,
    pub target_error: Option<f64>,
    pub seed: Option<u64>,
    /// Worker threads for parallel runs; 0 means all available cores.
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
}

/// Raw `[oracle]` section, used when `method = "gao"`.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSettings {
    pub lambda: Option<usize>,
    /// `gaode00`, `gaode04`, or `composite` (the default).
    pub preset: Option<String>,
    /// Underlying runs per variant in composite mode.
    pub repeats: Option<usize>,
    pub f_min: Option<f64>,
    pub f_max: Option<f64>,
    pub cr_min: Option<f64>,
    pub cr_max: Option<f64>,
}

/// Raw `[sweep]` section: the cross product to evaluate.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSettings {
    pub methods: Vec<String>,
    pub functions: Vec<String>,
    pub dims: Vec<usize>,
}

/// The whole config document.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    #[serde(default)]
    pub experiment: ExperimentConfig,
    #[serde(default)]
    pub oracle: OracleSettings,
    pub sweep: Option<SweepSettings>,
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| GaodeError::ConfigParse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Resolve the `[experiment]` section into a runnable configuration.
    pub fn resolve_experiment(&self) -> Result<ResolvedConfig> {
        let exp = &self.experiment;
        let method = exp
            .method
            .clone()
            .ok_or_else(|| GaodeError::InvalidConfig("method is required".into()))?;
        validate_method_token(&method)?;
        let function_token = exp
            .function
            .clone()
            .ok_or_else(|| GaodeError::InvalidConfig("function is required".into()))?;
        let function = FunctionKind::from_token(&function_token)?;
        let dim = exp
            .dim
            .ok_or_else(|| GaodeError::InvalidConfig("dim is required".into()))?;
        if dim < 2 {
            return Err(GaodeError::DimensionTooSmall(dim));
        }
        let pop_size = match exp.population {
            Some(n) => n,
            None => default_population_size(dim)?,
        };
        if pop_size < 4 {
            return Err(GaodeError::PopulationTooSmall(pop_size));
        }
        let runs = exp.runs.unwrap_or(DEFAULT_RUNS);
        if runs < 1 {
            return Err(GaodeError::InvalidConfig("runs must be >= 1".into()));
        }
        let budget = exp.budget.unwrap_or(dim as u64 * BUDGET_PER_DIM);
        if budget == 0 {
            return Err(GaodeError::InvalidConfig("budget must be > 0".into()));
        }
        let target_error = exp.target_error.unwrap_or(DEFAULT_TARGET_ERROR);
        let master_seed = exp.seed.unwrap_or(DEFAULT_SEED);
        let threads = exp.threads.unwrap_or(0);
        let oracle = self.resolve_oracle()?;
        let output = resolve_output_path(
            exp.output.as_deref(),
            &format!("{method}-{}-d{dim}", function.token()),
        );
        Ok(ResolvedConfig {
            method,
            function,
            dim,
            pop_size,
            runs,
            budget,
            target_error,
            master_seed,
            threads,
            output,
            oracle,
        })
    }

    /// Root directory for sweep-level outputs.
    pub fn sweep_root(&self) -> PathBuf {
        resolve_output_path(self.experiment.output.as_deref(), "sweep")
    }

    /// Resolve the sweep cross product; each cell inherits `[experiment]`
    /// defaults and writes into its own subdirectory.
    pub fn resolve_sweep(&self) -> Result<Vec<ResolvedConfig>> {
        let sweep = self
            .sweep
            .as_ref()
            .ok_or_else(|| GaodeError::InvalidConfig("sweep section is required".into()))?;
        if sweep.methods.is_empty() || sweep.functions.is_empty() || sweep.dims.is_empty() {
            return Err(GaodeError::InvalidConfig(
                "sweep methods, functions, and dims must all be nonempty".into(),
            ));
        }
        let root = self.sweep_root();
        let mut cells = Vec::new();
        for method in &sweep.methods {
            for function in &sweep.functions {
                for &dim in &sweep.dims {
                    let mut doc = self.clone();
                    doc.experiment.method = Some(method.clone());
                    doc.experiment.function = Some(function.clone());
                    doc.experiment.dim = Some(dim);
                    // The per-dim default must win over any inherited value.
                    doc.experiment.population = self.experiment.population;
                    doc.experiment.output =
                        Some(root.join(format!("{method}-{function}-d{dim}")));
                    cells.push(doc.resolve_experiment()?);
                }
            }
        }
        Ok(cells)
    }

    fn resolve_oracle(&self) -> Result<ResolvedOracle> {
        let o = &self.oracle;
        let lambda = o.lambda.unwrap_or(DEFAULT_LAMBDA);
        let repeats = o.repeats.unwrap_or(1);
        if repeats < 1 {
            return Err(GaodeError::InvalidConfig("repeats must be >= 1".into()));
        }
        let preset = match o.preset.as_deref() {
            None | Some("composite") => OraclePreset::Composite,
            Some("gaode00") => OraclePreset::Gaode00,
            Some("gaode04") => OraclePreset::Gaode04,
            Some(other) => return Err(GaodeError::UnknownPreset(other.to_string())),
        };
        let has_range_override =
            o.f_min.is_some() || o.f_max.is_some() || o.cr_min.is_some() || o.cr_max.is_some();
        if has_range_override && preset == OraclePreset::Composite {
            return Err(GaodeError::InvalidConfig(
                "explicit F/CR ranges require preset gaode00 or gaode04".into(),
            ));
        }
        let apply = |mut cfg: OracleConfig| -> OracleConfig {
            if let Some(v) = o.f_min {
                cfg.f_min = v;
            }
            if let Some(v) = o.f_max {
                cfg.f_max = v;
            }
            if let Some(v) = o.cr_min {
                cfg.cr_min = v;
            }
            if let Some(v) = o.cr_max {
                cfg.cr_max = v;
            }
            cfg
        };
        let (cfg00, cfg04) = match preset {
            OraclePreset::Composite => (OracleConfig::gaode00(lambda), OracleConfig::gaode04(lambda)),
            OraclePreset::Gaode00 => {
                let cfg = apply(OracleConfig::gaode00(lambda));
                (cfg, OracleConfig::gaode04(lambda))
            }
            OraclePreset::Gaode04 => {
                let cfg = apply(OracleConfig::gaode04(lambda));
                (OracleConfig::gaode00(lambda), cfg)
            }
        };
        cfg00.validate()?;
        cfg04.validate()?;
        Ok(ResolvedOracle {
            lambda,
            preset,
            repeats,
            cfg00,
            cfg04,
        })
    }
}

fn validate_method_token(token: &str) -> Result<()> {
    match token {
        "jde" | "epsde" | "jade" | "mde" | "shade" | "gao" => Ok(()),
        other => Err(GaodeError::UnknownMethod(other.to_string())),
    }
}

fn resolve_output_path(configured: Option<&Path>, default_name: &str) -> PathBuf {
    let root = std::env::var_os(OUTPUT_ROOT_ENV).map(PathBuf::from);
    match (configured, root) {
        (Some(p), Some(root)) if p.is_relative() => root.join(p),
        (Some(p), _) => p.to_path_buf(),
        (None, Some(root)) => root.join(default_name),
        (None, None) => PathBuf::from("gaode-out").join(default_name),
    }
}

/// Oracle variant selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OraclePreset {
    Gaode00,
    Gaode04,
    /// Best-of-both protocol.
    Composite,
}

impl OraclePreset {
    pub fn token(self) -> &'static str {
        match self {
            OraclePreset::Gaode00 => "gaode00",
            OraclePreset::Gaode04 => "gaode04",
            OraclePreset::Composite => "composite",
        }
    }
}

/// Oracle configuration with every default applied.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResolvedOracle {
    pub lambda: usize,
    pub preset: OraclePreset,
    pub repeats: usize,
    pub cfg00: OracleConfig,
    pub cfg04: OracleConfig,
}

/// A fully resolved experiment cell; outputs are a pure function of this.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolvedConfig {
    pub method: String,
    pub function: FunctionKind,
    pub dim: usize,
    pub pop_size: usize,
    pub runs: usize,
    pub budget: u64,
    pub target_error: f64,
    pub master_seed: u64,
    pub threads: usize,
    pub output: PathBuf,
    pub oracle: ResolvedOracle,
}

impl ResolvedConfig {
    pub fn is_oracle(&self) -> bool {
        self.method == "gao"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn population_rule() {
        assert_eq!(default_population_size(2).unwrap(), 20);
        assert_eq!(default_population_size(3).unwrap(), 20);
        assert_eq!(default_population_size(4).unwrap(), 20);
        assert_eq!(default_population_size(5).unwrap(), 25);
        assert_eq!(default_population_size(10).unwrap(), 50);
        assert_eq!(default_population_size(20).unwrap(), 100);
        assert!(default_population_size(1).is_err());
    }

    #[test]
    fn minimal_document_gets_protocol_defaults() {
        let doc = ConfigDocument::parse(
            r#"
            [experiment]
            method = "shade"
            function = "rastrigin"
            dim = 10
            "#,
        )
        .unwrap();
        let cfg = doc.resolve_experiment().unwrap();
        assert_eq!(cfg.pop_size, 50);
        assert_eq!(cfg.runs, 51);
        assert_eq!(cfg.budget, 1_000_000);
        assert_eq!(cfg.target_error, 1e-8);
        assert_eq!(cfg.master_seed, DEFAULT_SEED);
        assert_eq!(cfg.oracle.lambda, 200);
        assert_eq!(cfg.oracle.preset, OraclePreset::Composite);
    }

    #[test]
    fn bad_tokens_are_rejected() {
        let doc = ConfigDocument::parse(
            r#"
            [experiment]
            method = "cmaes"
            function = "sphere"
            dim = 2
            "#,
        )
        .unwrap();
        assert!(matches!(
            doc.resolve_experiment(),
            Err(GaodeError::UnknownMethod(_))
        ));

        let doc = ConfigDocument::parse(
            r#"
            [experiment]
            method = "jde"
            function = "griewank"
            dim = 2
            "#,
        )
        .unwrap();
        assert!(matches!(
            doc.resolve_experiment(),
            Err(GaodeError::UnknownFunction(_))
        ));
    }

    #[test]
    fn unknown_keys_fail_parsing() {
        assert!(ConfigDocument::parse("[experiment]\npouplation = 3\n").is_err());
    }

    #[test]
    fn oracle_preset_and_overrides() {
        let doc = ConfigDocument::parse(
            r#"
            [experiment]
            method = "gao"
            function = "sphere"
            dim = 2

            [oracle]
            lambda = 50
            preset = "gaode04"
            cr_min = 0.2
            "#,
        )
        .unwrap();
        let cfg = doc.resolve_experiment().unwrap();
        assert_eq!(cfg.oracle.preset, OraclePreset::Gaode04);
        assert_eq!(cfg.oracle.cfg04.lambda, 50);
        assert_eq!(cfg.oracle.cfg04.f_min, 0.4);
        assert_eq!(cfg.oracle.cfg04.cr_min, 0.2);
    }

    #[test]
    fn range_overrides_need_single_variant() {
        let doc = ConfigDocument::parse(
            r#"
            [experiment]
            method = "gao"
            function = "sphere"
            dim = 2

            [oracle]
            f_min = 0.3
            "#,
        )
        .unwrap();
        assert!(doc.resolve_experiment().is_err());
    }

    #[test]
    fn sweep_cross_product() {
        let doc = ConfigDocument::parse(
            r#"
            [experiment]
            runs = 5
            seed = 9
            output = "/tmp/sweep-test"

            [sweep]
            methods = ["jde", "gao"]
            functions = ["sphere", "ackley"]
            dims = [2, 5]
            "#,
        )
        .unwrap();
        let cells = doc.resolve_sweep().unwrap();
        assert_eq!(cells.len(), 8);
        assert!(cells.iter().all(|c| c.runs == 5 && c.master_seed == 9));
        let d5: Vec<_> = cells.iter().filter(|c| c.dim == 5).collect();
        assert!(d5.iter().all(|c| c.pop_size == 25));
        assert!(cells
            .iter()
            .any(|c| c.output.ends_with("jde-sphere-d2")));
    }
}
