//! Pseudo-observation datasets: n x p matrices in the open unit hypercube.

use crate::copula::{UnitPoint, EVAL_HI, EVAL_LO};
use crate::error::{Error, Result};

/// An n x p matrix of pseudo-observations. Entries are clamped into
/// `[1e-12, 1 - 1e-12]` at construction so that density evaluation never
/// sees boundary values that a file round-trip may have produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    points: Vec<UnitPoint>,
    columns: Vec<String>,
}

impl Dataset {
    pub fn from_rows(rows: Vec<Vec<f64>>, columns: Option<Vec<String>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidInput("dataset has no rows".into()));
        }
        let p = rows[0].len();
        if p < 2 {
            return Err(Error::InvalidInput(format!(
                "dataset needs at least 2 columns, got {p}"
            )));
        }
        let columns = match columns {
            Some(cols) => {
                if cols.len() != p {
                    return Err(Error::InvalidInput(format!(
                        "{} column names for {p} columns",
                        cols.len()
                    )));
                }
                cols
            }
            None => (1..=p).map(|j| format!("u{j}")).collect(),
        };
        let mut points = Vec::with_capacity(rows.len());
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != p {
                return Err(Error::InvalidInput(format!(
                    "row {i} has {} entries, expected {p}",
                    row.len()
                )));
            }
            if row.iter().any(|v| !(v.is_finite() && *v > 0.0 && *v < 1.0)) {
                return Err(Error::InvalidInput(format!(
                    "row {i} has entries outside the open unit interval: {row:?}"
                )));
            }
            let clamped: Vec<f64> = row.into_iter().map(|v| v.clamp(EVAL_LO, EVAL_HI)).collect();
            points.push(UnitPoint::new(clamped)?);
        }
        Ok(Dataset { points, columns })
    }

    pub fn from_points(points: Vec<UnitPoint>, columns: Option<Vec<String>>) -> Result<Self> {
        let rows = points
            .into_iter()
            .map(|u| u.coords().to_vec())
            .collect::<Vec<_>>();
        Dataset::from_rows(rows, columns)
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn p(&self) -> usize {
        self.points[0].dim()
    }

    pub fn point(&self, i: usize) -> &UnitPoint {
        &self.points[i]
    }

    pub fn points(&self) -> &[UnitPoint] {
        &self.points
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.points.iter().map(|u| u.coords()[j]).collect()
    }
}
