use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, dot, Point};

/// `x -> <slope, x> + intercept`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineFunction {
    pub slope: Point,
    pub intercept: f64,
}

impl AffineFunction {
    pub fn new(slope: Point, intercept: f64) -> Result<Self> {
        if !intercept.is_finite() || slope.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidInput("affine function must be finite".into()));
        }
        Ok(Self { slope, intercept })
    }

    /// The linear functional `x -> <x, y>`.
    pub fn linear(y: Point) -> Self {
        Self {
            slope: y,
            intercept: 0.0,
        }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self {
            slope: vec![0.0; dim],
            intercept: c,
        }
    }

    pub fn dim(&self) -> usize {
        self.slope.len()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.slope, x) + self.intercept
    }

    pub fn add(&self, other: &AffineFunction) -> AffineFunction {
        AffineFunction {
            slope: linalg::add(&self.slope, &other.slope),
            intercept: self.intercept + other.intercept,
        }
    }

    pub fn scaled(&self, s: f64) -> AffineFunction {
        AffineFunction {
            slope: linalg::scale(&self.slope, s),
            intercept: self.intercept * s,
        }
    }

    pub fn approx_eq(&self, other: &AffineFunction, tol: f64) -> bool {
        (self.intercept - other.intercept).abs() <= tol
            && self
                .slope
                .iter()
                .zip(&other.slope)
                .all(|(a, b)| (a - b).abs() <= tol)
    }
}

/// Vertical shift `alpha` and translation `x0`: `u -> u(. - x0) + alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerticalShiftTag {
    pub shift: f64,
    pub translation: Point,
}

impl VerticalShiftTag {
    pub fn new(shift: f64, translation: Point) -> Result<Self> {
        if !shift.is_finite() || translation.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidInput("shift tag must be finite".into()));
        }
        Ok(Self { shift, translation })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            shift: 0.0,
            translation: vec![0.0; dim],
        }
    }
}
