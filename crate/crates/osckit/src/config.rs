//! Runtime configuration: defaults, optional config file pointed to by
//! `OSCKIT_CONFIG`, and per-invocation flag overrides (in that order).

use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug)]
pub struct Config {
    /// Float-backend precision in bits (>= 53).
    pub precision_bits: usize,
    /// Series truncation order.
    pub trunc: usize,
    /// Residual tolerance for verification.
    pub residual_tol: f64,
    /// Contour quadrature starting node count.
    pub quad_nodes: usize,
    pub format: OutputFormat,
    /// Seed for randomized self-checks.
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            precision_bits: 113,
            trunc: 24,
            residual_tol: 1e-25,
            quad_nodes: 4096,
            format: OutputFormat::Json,
            seed: 0,
        }
    }
}

impl Config {
    /// Applies the config file named by `OSCKIT_CONFIG`, when present.
    pub fn from_env() -> Result<Self, String> {
        let mut cfg = Config::default();
        if let Ok(path) = std::env::var("OSCKIT_CONFIG") {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| format!("cannot read config {path}: {e}"))?;
            let v: Value =
                serde_json::from_str(&text).map_err(|e| format!("bad config JSON: {e}"))?;
            if let Some(p) = v.get("precision_bits").and_then(Value::as_u64) {
                cfg.precision_bits = p as usize;
            }
            if let Some(n) = v.get("trunc").and_then(Value::as_u64) {
                cfg.trunc = n as usize;
            }
            if let Some(t) = v.get("residual_tol").and_then(Value::as_f64) {
                cfg.residual_tol = t;
            }
            if let Some(q) = v.get("quad_nodes").and_then(Value::as_u64) {
                cfg.quad_nodes = q as usize;
            }
            if let Some(s) = v.get("seed").and_then(Value::as_u64) {
                cfg.seed = s;
            }
            if let Some(fmt) = v.get("format").and_then(Value::as_str) {
                cfg.format = parse_format(fmt)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.precision_bits < 53 {
            return Err("precision_bits must be at least 53".into());
        }
        if !(self.residual_tol > 0.0) {
            return Err("residual_tol must be positive".into());
        }
        if self.quad_nodes == 0 {
            return Err("quad_nodes must be positive".into());
        }
        Ok(())
    }

    pub fn build_opts(&self) -> osckit_core::builder::BuildOpts {
        osckit_core::builder::BuildOpts {
            precision: self.precision_bits,
            residual_tol: self.residual_tol,
        }
    }

    pub fn root_opts(&self) -> osckit_core::expalg::RootOpts {
        osckit_core::expalg::RootOpts {
            precision: 2 * self.precision_bits,
            residual_tol: 1e-20,
            cluster_rel: 1e-8,
        }
    }
}

pub fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "json" => Ok(OutputFormat::Json),
        "csv" => Ok(OutputFormat::Csv),
        "text" => Ok(OutputFormat::Text),
        other => Err(format!("unknown output format {other:?} (json|csv|text)")),
    }
}
