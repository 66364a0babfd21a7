//! Line-oriented `key = value` run configuration.

use std::path::PathBuf;

use mocc_core::analysis::{ApproxLimits, ExperimentConfig, ReferenceWords, Scheme};
use mocc_core::decoder::DecoderOptions;
use mocc_core::{ConvCode, PhysicalConfig};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("key `{key}`: {message}")]
    Value { key: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub physical: PhysicalConfig,
    /// Slot interval for `pc` and the weights of `distance`.
    pub slot_interval: f64,
    /// Set when the config file names `slot_interval` explicitly.
    pub slot_interval_given: bool,
    pub l_max: usize,
    pub schemes: Vec<String>,
    pub constraint_length: usize,
    pub generators: Option<[String; 2]>,
    pub tb_grid: Vec<f64>,
    pub approx_tb_grid: Vec<f64>,
    pub frames: u64,
    pub info_bits: usize,
    pub seed: u64,
    pub min_bit_errors: u64,
    /// Zero means unbounded.
    pub max_survivors: usize,
    pub approx_info_len: usize,
    pub approx_max_level: usize,
    pub approx_max_crossovers: usize,
    pub approx_references: ReferenceWords,
    pub approx_max_hamming_weight: Option<usize>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let approx = ApproxLimits::default();
        Self {
            physical: PhysicalConfig::default(),
            slot_interval: 1.0,
            slot_interval_given: false,
            l_max: 8,
            schemes: ["uncoded", "hamming74", "conv_hd", "conv_cd", "conv_lsd"].map(String::from).to_vec(),
            constraint_length: 3,
            generators: None,
            tb_grid: vec![0.5, 1.0, 1.5, 2.0, 3.0, 4.0],
            approx_tb_grid: vec![2.0, 2.5, 3.0, 3.5, 4.0],
            frames: 2000,
            info_bits: 1000,
            seed: 1,
            min_bit_errors: 200,
            max_survivors: mocc_core::decoder::DEFAULT_MAX_SURVIVORS,
            approx_info_len: approx.info_len,
            approx_max_level: approx.max_level,
            approx_max_crossovers: approx.max_crossovers,
            approx_references: approx.references,
            approx_max_hamming_weight: approx.max_hamming_weight,
            out: None,
            svg: None,
        }
    }
}

/// Generators of the rate-1/2 maximum free distance codes for common `K`.
fn default_generators(k: usize) -> Option<[&'static str; 2]> {
    match k {
        3 => Some(["5", "7"]),
        5 => Some(["27", "31"]),
        7 => Some(["117", "155"]),
        _ => None,
    }
}

fn value_err(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Value { key: key.to_string(), message: message.into() }
}

fn positive_f64(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v.parse().map_err(|_| value_err(key, format!("{v:?} is not a number")))?;
    if !(x.is_finite() && x > 0.0) {
        return Err(value_err(key, format!("must be positive, got {v}")));
    }
    Ok(x)
}

fn integer<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| value_err(key, format!("{v:?} is not a non-negative integer")))
}

fn positive_int<T: std::str::FromStr + PartialEq + Default>(key: &str, v: &str) -> Result<T> {
    let x: T = integer(key, v)?;
    if x == T::default() {
        return Err(value_err(key, "must be positive"));
    }
    Ok(x)
}

fn list(v: &str) -> Vec<&str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn grid(key: &str, v: &str) -> Result<Vec<f64>> {
    let values = list(v).into_iter().map(|x| positive_f64(key, x)).collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        return Err(value_err(key, "grid is empty"));
    }
    Ok(values)
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen: Vec<String> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax { line, message: format!("expected `key = value`, got {content:?}") })?;
            let (key, value) = (key.trim(), value.trim());
            if seen.iter().any(|k| k == key) {
                return Err(ConfigError::Duplicate { line, key: key.to_string() });
            }
            cfg.set(key, value, line)?;
            seen.push(key.to_string());
        }
        cfg.check()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, v: &str, line: usize) -> Result<()> {
        match key {
            "temperature" => self.physical.temperature_kelvin = positive_f64(key, v)?,
            "viscosity" => self.physical.viscosity = positive_f64(key, v)?,
            "molecule_radius" => self.physical.molecule_radius = positive_f64(key, v)?,
            "distance" => self.physical.distance = positive_f64(key, v)?,
            "drift_velocity" => self.physical.drift_velocity = positive_f64(key, v)?,
            "slot_interval" => {
                self.slot_interval = positive_f64(key, v)?;
                self.slot_interval_given = true;
            }
            "l_max" => self.l_max = positive_int(key, v)?,
            "schemes" => self.schemes = list(v).into_iter().map(String::from).collect(),
            "constraint_length" => self.constraint_length = positive_int(key, v)?,
            "generators" => {
                let g = list(v);
                if g.len() != 2 {
                    return Err(value_err(key, "expected two octal generators"));
                }
                self.generators = Some([g[0].to_string(), g[1].to_string()]);
            }
            "tb_grid" => self.tb_grid = grid(key, v)?,
            "approx_tb_grid" => self.approx_tb_grid = grid(key, v)?,
            "frames" => self.frames = positive_int(key, v)?,
            "info_bits" => self.info_bits = positive_int(key, v)?,
            "seed" => self.seed = integer(key, v)?,
            "min_bit_errors" => self.min_bit_errors = positive_int(key, v)?,
            "max_survivors" => self.max_survivors = integer(key, v)?,
            "approx_info_len" => self.approx_info_len = positive_int(key, v)?,
            "approx_max_level" => self.approx_max_level = positive_int(key, v)?,
            "approx_max_crossovers" => self.approx_max_crossovers = integer(key, v)?,
            "approx_references" => {
                self.approx_references = match v {
                    "zero" => ReferenceWords::Zero,
                    "all" => ReferenceWords::All,
                    n => ReferenceWords::Sampled { count: positive_int(key, n)?, seed: 0 },
                }
            }
            "approx_max_hamming_weight" => {
                self.approx_max_hamming_weight = if v == "none" { None } else { Some(integer(key, v)?) }
            }
            "out" => self.out = Some(PathBuf::from(v)),
            "svg" => self.svg = Some(PathBuf::from(v)),
            _ => return Err(ConfigError::UnknownKey { line, key: key.to_string() }),
        }
        Ok(())
    }

    fn check(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(value_err("schemes", "at least one scheme is required"));
        }
        let code = self.code()?;
        for s in &self.schemes {
            Scheme::parse(s, &code).map_err(|e| value_err("schemes", e.to_string()))?;
        }
        self.physical.validate().map_err(|e| value_err("physical", e.to_string()))?;
        Ok(())
    }

    pub fn code(&self) -> Result<ConvCode> {
        let k = self.constraint_length;
        let result = match &self.generators {
            Some([a, b]) => ConvCode::from_octal(k, [a.as_str(), b.as_str()]),
            None => match default_generators(k) {
                Some(g) => ConvCode::from_octal(k, g),
                None => return Err(value_err("generators", format!("no default code for K = {k}; set `generators`"))),
            },
        };
        result.map_err(|e| value_err("generators", e.to_string()))
    }

    pub fn experiment(&self) -> Result<ExperimentConfig> {
        let code = self.code()?;
        let schemes = self
            .schemes
            .iter()
            .map(|s| Scheme::parse(s, &code).map_err(|e| value_err("schemes", e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let decoder = DecoderOptions {
            max_survivors: (self.max_survivors > 0).then_some(self.max_survivors),
            ..DecoderOptions::default()
        };
        Ok(ExperimentConfig {
            schemes,
            physical: self.physical,
            tb_grid: self.tb_grid.clone(),
            frames: self.frames,
            info_bits_per_frame: self.info_bits,
            base_seed: self.seed,
            min_bit_errors: self.min_bit_errors,
            max_level: self.l_max,
            decoder,
        })
    }

    pub fn approx_limits(&self) -> ApproxLimits {
        ApproxLimits {
            info_len: self.approx_info_len,
            max_level: self.approx_max_level,
            max_crossovers: self.approx_max_crossovers,
            max_hamming_weight: self.approx_max_hamming_weight,
            // Sampled references follow the run seed.
            references: match self.approx_references {
                ReferenceWords::Sampled { count, .. } => ReferenceWords::Sampled { count, seed: self.seed },
                other => other,
            },
            ..ApproxLimits::default()
        }
    }
}
