//! Archimedean copula kernels: the five classical one-parameter families
//! (Ali-Mikhail-Haq, Clayton, Frank, Gumbel, Joe) with exact generators,
//! generator derivatives, inverse-generator derivatives, copula CDFs,
//! log-densities, Kendall tau and exact sampling.

mod density;
mod generator;
mod sample;
mod tau;

pub use sample::sample_copula;
pub use tau::{debye1, TauMonteCarlo};

use crate::error::{Error, Result};

/// Coordinates closer to the boundary than this are rejected by density
/// evaluation; ingestion clamps into `[EVAL_LO, EVAL_HI]`.
pub const EVAL_LO: f64 = 1e-12;
pub const EVAL_HI: f64 = 1.0 - 1e-12;

/// Left end of the Joe parameter space as used throughout.
pub const JOE_THETA_MIN: f64 = 0.238734;

/// The five Archimedean families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CopulaFamily {
    Amh,
    Clayton,
    Frank,
    Gumbel,
    Joe,
}

impl CopulaFamily {
    pub const ALL: [CopulaFamily; 5] = [
        CopulaFamily::Amh,
        CopulaFamily::Clayton,
        CopulaFamily::Frank,
        CopulaFamily::Gumbel,
        CopulaFamily::Joe,
    ];

    /// Three-letter tag used in files and reports.
    pub fn label(self) -> &'static str {
        match self {
            CopulaFamily::Amh => "AMH",
            CopulaFamily::Clayton => "CLA",
            CopulaFamily::Frank => "FRA",
            CopulaFamily::Gumbel => "GUM",
            CopulaFamily::Joe => "JOE",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "amh" => Some(CopulaFamily::Amh),
            "cla" | "clayton" => Some(CopulaFamily::Clayton),
            "fra" | "frank" => Some(CopulaFamily::Frank),
            "gum" | "gumbel" => Some(CopulaFamily::Gumbel),
            "joe" => Some(CopulaFamily::Joe),
            _ => None,
        }
    }

    /// Whether `value` lies in the bivariate parameter space.
    ///
    /// AMH: [-1, 1]; Clayton: [-1, inf) \ {0}; Frank: R \ {0};
    /// Gumbel: [1, inf); Joe: [0.238734, inf).
    pub fn admits(self, value: f64) -> bool {
        if !value.is_finite() {
            return false;
        }
        match self {
            CopulaFamily::Amh => (-1.0..=1.0).contains(&value),
            CopulaFamily::Clayton => value >= -1.0 && value != 0.0,
            CopulaFamily::Frank => value != 0.0,
            CopulaFamily::Gumbel => value >= 1.0,
            CopulaFamily::Joe => value >= JOE_THETA_MIN,
        }
    }

    /// Whether `value` parameterizes a valid copula in dimension `dim`.
    ///
    /// Above two dimensions the space is restricted to strictly positive
    /// parameters (at least 1 for Gumbel and Joe), where the inverse
    /// generator is completely monotone.
    pub fn admits_in_dim(self, value: f64, dim: usize) -> bool {
        if dim <= 2 {
            return self.admits(value);
        }
        match self {
            CopulaFamily::Amh => value > 0.0 && value < 1.0,
            CopulaFamily::Clayton | CopulaFamily::Frank => value > 0.0,
            CopulaFamily::Gumbel | CopulaFamily::Joe => value >= 1.0,
        }
    }

    /// Closure of the admissible interval in dimension `dim`, used to
    /// truncate random-walk proposals. Excluded interior points (0 for
    /// Clayton/Frank in the bivariate case) have measure zero.
    pub fn theta_interval(self, dim: usize) -> (f64, f64) {
        if dim <= 2 {
            match self {
                CopulaFamily::Amh => (-1.0, 1.0),
                CopulaFamily::Clayton => (-1.0, f64::INFINITY),
                CopulaFamily::Frank => (f64::NEG_INFINITY, f64::INFINITY),
                CopulaFamily::Gumbel => (1.0, f64::INFINITY),
                CopulaFamily::Joe => (JOE_THETA_MIN, f64::INFINITY),
            }
        } else {
            match self {
                CopulaFamily::Amh => (0.0, 1.0),
                CopulaFamily::Clayton | CopulaFamily::Frank => (0.0, f64::INFINITY),
                CopulaFamily::Gumbel | CopulaFamily::Joe => (1.0, f64::INFINITY),
            }
        }
    }
}

impl std::fmt::Display for CopulaFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// A validated copula parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theta {
    family: CopulaFamily,
    value: f64,
}

impl Theta {
    /// Validates against the bivariate parameter space.
    pub fn new(family: CopulaFamily, value: f64) -> Result<Self> {
        if family.admits(value) {
            Ok(Theta { family, value })
        } else {
            Err(Error::InvalidTheta { family, value })
        }
    }

    /// Validates against the parameter space admissible in dimension `dim`.
    pub fn for_dim(family: CopulaFamily, value: f64, dim: usize) -> Result<Self> {
        if !family.admits(value) {
            return Err(Error::InvalidTheta { family, value });
        }
        if !family.admits_in_dim(value, dim) {
            return Err(Error::UnsupportedDimension {
                family,
                value,
                dim,
            });
        }
        Ok(Theta { family, value })
    }

    /// Skips validation; for internal call sites that maintain the
    /// parameter-space invariant themselves.
    pub(crate) fn unchecked(family: CopulaFamily, value: f64) -> Self {
        Theta { family, value }
    }

    pub fn family(&self) -> CopulaFamily {
        self.family
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

/// A point in the open unit hypercube, dimension at least 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitPoint {
    coords: Vec<f64>,
}

impl UnitPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "unit point needs dimension >= 2, got {}",
                coords.len()
            )));
        }
        if coords.iter().any(|&c| !(c > 0.0 && c < 1.0)) {
            return Err(Error::Domain(format!(
                "coordinates must lie strictly inside (0,1): {coords:?}"
            )));
        }
        Ok(UnitPoint { coords })
    }

    pub fn pair(u1: f64, u2: f64) -> Result<Self> {
        UnitPoint::new(vec![u1, u2])
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Density evaluation rejects boundary-adjacent coordinates.
    pub(crate) fn eval_guard(&self) -> Result<()> {
        if self.coords.iter().any(|&c| !(EVAL_LO..=EVAL_HI).contains(&c)) {
            return Err(Error::Domain(format!(
                "coordinates outside [{EVAL_LO:e}, 1-{EVAL_LO:e}]: {:?}",
                self.coords
            )));
        }
        Ok(())
    }
}
