//! Run configuration: flat `key = value` files plus flag overrides.
//! Unknown keys are errors; the format is line-diffable by design.

use std::path::{Path, PathBuf};

use copmix::copula::CopulaFamily;
use copmix::prior::{CenteringMeasure, HyperPrior};
use copmix::sampler::{AdaptMode, McmcConfig};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub family: Option<CopulaFamily>,
    pub data: Option<PathBuf>,
    pub draws: Option<PathBuf>,
    pub out: PathBuf,
    pub seed: u64,
    pub iters: usize,
    pub burnin: usize,
    pub thin: usize,
    pub r_aux: usize,
    pub adapt: AdaptMode,
    /// Shifted-gamma centering shape/rate (Clayton, Gumbel, Joe).
    pub g0_shape: f64,
    pub g0_rate: f64,
    /// Normal centering mean/precision (Frank).
    pub g0_mean: f64,
    pub g0_precision: f64,
    pub c_a: f64,
    pub d_a: f64,
    pub c_b: f64,
    pub d_b: f64,
    pub rank_transform: bool,
    pub preset: Option<String>,
    /// density-grid resolution and 1-based coordinate pair.
    pub grid: usize,
    pub pair: (usize, usize),
    pub binder_candidates: usize,
    /// Manual simulate spec (used when no preset is given).
    pub n: Option<usize>,
    pub dimension: usize,
    pub mixture_weights: Vec<f64>,
    pub mixture_thetas: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            family: None,
            data: None,
            draws: None,
            out: PathBuf::from("."),
            seed: 1,
            iters: 15_000,
            burnin: 5_000,
            thin: 5,
            r_aux: 3,
            adapt: AdaptMode::Bounded,
            g0_shape: 4.0,
            g0_rate: 1.0,
            g0_mean: 0.0,
            g0_precision: 4.0,
            c_a: 1.0,
            d_a: 20.0,
            c_b: 1.0,
            d_b: 20.0,
            rank_transform: false,
            preset: None,
            grid: 200,
            pair: (1, 2),
            binder_candidates: 16,
            n: None,
            dimension: 2,
            mixture_weights: Vec::new(),
            mixture_thetas: Vec::new(),
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> CliResult<T> {
    value
        .parse::<T>()
        .map_err(|_| CliError::Config(format!("cannot parse {key} = {value}")))
}

fn parse_list(key: &str, value: &str) -> CliResult<Vec<f64>> {
    value
        .split(',')
        .map(|s| parse::<f64>(key, s.trim()))
        .collect()
}

fn parse_on_off(key: &str, value: &str) -> CliResult<bool> {
    match value {
        "on" | "true" | "1" => Ok(true),
        "off" | "false" | "0" => Ok(false),
        _ => Err(CliError::Config(format!("{key} must be on or off, got {value}"))),
    }
}

impl RunConfig {
    /// Applies a config file; later lines win, unknown keys error.
    pub fn apply_file(&mut self, path: &Path) -> CliResult<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("{}:{}: expected key = value", path.display(), lineno + 1))
            })?;
            self.apply_key(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn apply_key(&mut self, key: &str, value: &str) -> CliResult<()> {
        match key {
            "family" => {
                self.family = Some(CopulaFamily::parse(value).ok_or_else(|| {
                    CliError::Config(format!("unknown family {value} (amh|cla|fra|gum|joe)"))
                })?)
            }
            "data" => self.data = Some(PathBuf::from(value)),
            "draws" => self.draws = Some(PathBuf::from(value)),
            "out" => self.out = PathBuf::from(value),
            "seed" => self.seed = parse(key, value)?,
            "iters" => self.iters = parse(key, value)?,
            "burnin" => self.burnin = parse(key, value)?,
            "thin" => self.thin = parse(key, value)?,
            "r_aux" => self.r_aux = parse(key, value)?,
            "adapt" => {
                self.adapt = match value {
                    "bounded" => AdaptMode::Bounded,
                    "paper-literal" => AdaptMode::PaperLiteral,
                    _ => {
                        return Err(CliError::Config(format!(
                            "adapt must be bounded or paper-literal, got {value}"
                        )))
                    }
                }
            }
            "g0_shape" => self.g0_shape = parse(key, value)?,
            "g0_rate" => self.g0_rate = parse(key, value)?,
            "g0_mean" => self.g0_mean = parse(key, value)?,
            "g0_precision" => self.g0_precision = parse(key, value)?,
            "c_a" => self.c_a = parse(key, value)?,
            "d_a" => self.d_a = parse(key, value)?,
            "c_b" => self.c_b = parse(key, value)?,
            "d_b" => self.d_b = parse(key, value)?,
            "rank_transform" => self.rank_transform = parse_on_off(key, value)?,
            "preset" => self.preset = Some(value.to_string()),
            "grid" => self.grid = parse(key, value)?,
            "pair" => {
                let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                if parts.len() != 2 {
                    return Err(CliError::Config(format!("pair must be i,j; got {value}")));
                }
                self.pair = (parse(key, parts[0])?, parse(key, parts[1])?);
            }
            "binder_candidates" => self.binder_candidates = parse(key, value)?,
            "n" => self.n = Some(parse(key, value)?),
            "dimension" => self.dimension = parse(key, value)?,
            "mixture_weights" => self.mixture_weights = parse_list(key, value)?,
            "mixture_thetas" => self.mixture_thetas = parse_list(key, value)?,
            _ => return Err(CliError::Config(format!("unknown config key: {key}"))),
        }
        Ok(())
    }

    pub fn family(&self) -> CliResult<CopulaFamily> {
        self.family
            .ok_or_else(|| CliError::Config("family is required (--family or config)".into()))
    }

    /// Centering measure assembled from the per-family parameters.
    pub fn centering(&self) -> CliResult<CenteringMeasure> {
        let family = self.family()?;
        let g0 = match family {
            CopulaFamily::Amh => CenteringMeasure::default_for(family),
            CopulaFamily::Frank => {
                CenteringMeasure::with_normal(family, self.g0_mean, self.g0_precision)
                    .map_err(|e| CliError::Config(e.to_string()))?
            }
            _ => CenteringMeasure::with_gamma(family, self.g0_shape, self.g0_rate)
                .map_err(|e| CliError::Config(e.to_string()))?,
        };
        Ok(g0)
    }

    pub fn hyper_prior(&self) -> CliResult<HyperPrior> {
        HyperPrior::new(self.c_a, self.d_a, self.c_b, self.d_b)
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn mcmc(&self) -> CliResult<McmcConfig> {
        let mut config = McmcConfig::new(self.family()?, self.iters, self.burnin, self.thin, self.seed);
        config.g0 = self.centering()?;
        config.hyper_prior = self.hyper_prior()?;
        config.r_aux = self.r_aux;
        config.adapt = self.adapt;
        config.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(config)
    }
}
