//! Run configuration: a strict JSON document, merged with `--set` dot-path
//! overrides and command-line flags, validated before anything executes.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use dehp::lattice::Lattice;
use dehp::models::{Model1Params, Model2Params, ModelId, Spin2TwoDParams, XyzDmParams};
use dehp::solver::SolveOptions;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

/// Model parameters, dispatched on the `model` field.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelParams {
    Model1(Model1Params),
    Model2(Model2Params),
    Spin2TwoD(Spin2TwoDParams),
    XyzDm(XyzDmParams),
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct MultipletBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CorrelateBlock {
    pub r_max: usize,
    /// Observable for both insertion points; currently sz or sx.
    pub observable: String,
}

impl Default for CorrelateBlock {
    fn default() -> Self {
        CorrelateBlock { r_max: 6, observable: "sz".into() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ObcBlock {
    pub hz1: f64,
    pub hxn: f64,
}

impl Default for ObcBlock {
    fn default() -> Self {
        ObcBlock { hz1: 0.3, hxn: 0.7 }
    }
}

/// The full run configuration as stored on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Optional echo of the subcommand; when present it must match.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    pub model: ModelId,
    pub params: Value,
    pub lattice: Lattice,
    /// Relative residual below which a check passes.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplet: Option<MultipletBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correlate: Option<CorrelateBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obc: Option<ObcBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solve: Option<SolveOptions>,
}

fn default_tolerance() -> f64 {
    dehp::RESIDUAL_TOL
}

fn default_seed() -> u64 {
    1
}

impl RunConfig {
    /// Typed model parameters; strict: unknown keys anywhere are rejected.
    pub fn model_params(&self) -> Result<ModelParams, ConfigError> {
        let v = self.params.clone();
        let parsed = match self.model {
            ModelId::Model1 => serde_json::from_value::<Model1Params>(v).map(ModelParams::Model1),
            ModelId::Model2 => serde_json::from_value::<Model2Params>(v).map(ModelParams::Model2),
            ModelId::Spin2TwoD => {
                serde_json::from_value::<Spin2TwoDParams>(v).map(ModelParams::Spin2TwoD)
            }
            ModelId::XyzDmTwoD => serde_json::from_value::<XyzDmParams>(v).map(ModelParams::XyzDm),
        };
        parsed.map_err(|e| err(format!("params for {}: {e}", self.model)))
    }

    /// Default parameter block and lattice for a model family.
    pub fn defaults_for(model: ModelId) -> RunConfig {
        let (params, lattice) = match model {
            ModelId::Model1 => (
                serde_json::json!({"two_s": 1, "D": [1.0, 1.0, 1.0], "a": [2.0, 0.0]}),
                Lattice::Ring { n: 8 },
            ),
            ModelId::Model2 => (
                serde_json::json!({"jy": 0.7, "jz": -0.3, "hy": 0.9}),
                Lattice::Ring { n: 6 },
            ),
            ModelId::Spin2TwoD => (
                serde_json::json!({
                    "a": [1.3, 0.0], "b": [0.8, 0.0],
                    "lambda": [1.1, 0.7, 1.3, 0.5, 0.9], "hz": 0.9
                }),
                Lattice::Torus { lx: 2, ly: 3 },
            ),
            ModelId::XyzDmTwoD => (
                serde_json::json!({"jx": 1.0, "jy": 2.0, "jz": 3.0, "dxy": 0.7, "hz_sign": 1}),
                Lattice::Torus { lx: 2, ly: 2 },
            ),
        };
        RunConfig {
            command: None,
            model,
            params,
            lattice,
            tolerance: default_tolerance(),
            seed: default_seed(),
            multiplet: None,
            correlate: None,
            obc: None,
            solve: None,
        }
    }
}

/// Apply one `--set key=value` override to the raw JSON document. Keys are
/// dot paths (`params.a`, `lattice.n`, `solve.multistarts`); values parse
/// as JSON with a string fallback.
pub fn apply_set(doc: &mut Value, spec: &str) -> Result<(), ConfigError> {
    let (path, raw) = spec
        .split_once('=')
        .ok_or_else(|| err(format!("--set expects key=value, got '{spec}'")))?;
    let value: Value = serde_json::from_str(raw).unwrap_or(Value::String(raw.to_string()));
    let mut cursor = doc;
    let parts: Vec<&str> = path.split('.').collect();
    if parts.is_empty() || parts.iter().any(|p| p.is_empty()) {
        return Err(err(format!("bad --set path '{path}'")));
    }
    for part in &parts[..parts.len() - 1] {
        cursor = cursor
            .as_object_mut()
            .ok_or_else(|| err(format!("--set path '{path}' crosses a non-object")))?
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    cursor
        .as_object_mut()
        .ok_or_else(|| err(format!("--set path '{path}' crosses a non-object")))?
        .insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

/// Load + merge + validate the configuration for a subcommand.
pub fn resolve(
    command: &str,
    config_path: Option<&std::path::Path>,
    model_flag: Option<&str>,
    sets: &[String],
    seed_flag: Option<u64>,
) -> Result<RunConfig, ConfigError> {
    let mut doc: Value = match config_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| err(format!("reading {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| err(format!("parsing {}: {e}", path.display())))?
        }
        None => {
            let model: ModelId = model_flag
                .ok_or_else(|| err("either --config or --model is required"))?
                .parse()
                .map_err(|e| err(format!("{e}")))?;
            serde_json::to_value(RunConfig::defaults_for(model)).expect("defaults serialize")
        }
    };
    if let Some(m) = model_flag {
        apply_set(&mut doc, &format!("model=\"{m}\""))?;
        // switching the family resets params to that family's defaults
        // unless the config document already carries them
        if config_path.is_none() {
            let model: ModelId = m.parse().map_err(|e| err(format!("{e}")))?;
            let defaults = RunConfig::defaults_for(model);
            doc["params"] = defaults.params;
            doc["lattice"] = serde_json::to_value(defaults.lattice).unwrap();
        }
    }
    for s in sets {
        apply_set(&mut doc, s)?;
    }
    if let Some(seed) = seed_flag {
        apply_set(&mut doc, &format!("seed={seed}"))?;
    }
    let config: RunConfig =
        serde_json::from_value(doc).map_err(|e| err(format!("invalid config: {e}")))?;
    if let Some(cmd) = &config.command {
        if cmd != command {
            return Err(err(format!(
                "config is for command '{cmd}' but '{command}' was invoked"
            )));
        }
    }
    // surface parameter-domain problems before running anything
    config.model_params()?;
    if config.tolerance.is_nan() || config.tolerance <= 0.0 {
        return Err(err("tolerance must be positive"));
    }
    Ok(config)
}
