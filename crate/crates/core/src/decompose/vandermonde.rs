use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest degree bound for the exact integer-node scheme.
pub const MAX_EXACT_DEGREE: usize = 12;
/// Largest degree bound for floating-point node schemes.
pub const MAX_FLOAT_DEGREE: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum NodeScheme {
    /// Nodes `0, 1, ..., n`, inverted exactly over the rationals.
    #[default]
    Integer,
    /// Chebyshev points mapped into `(0, n)`, inverted in floating point.
    Chebyshev,
}

/// Nodes `t_j` and `alpha = V^{-1}` for `V_kj = t_k^j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionMatrix {
    pub n: usize,
    pub nodes: Vec<f64>,
    pub alpha: Vec<Vec<f64>>,
}

impl DecompositionMatrix {
    /// `max |V alpha - I|`.
    pub fn identity_defect(&self) -> f64 {
        let m = self.n + 1;
        let mut worst = 0.0f64;
        for k in 0..m {
            for c in 0..m {
                let s: f64 = (0..m).map(|j| self.nodes[k].powi(j as i32) * self.alpha[j][c]).sum();
                let target = if k == c { 1.0 } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        worst
    }
}

pub fn vandermonde_coeffs(n: usize) -> Result<DecompositionMatrix> {
    vandermonde_coeffs_with(n, NodeScheme::Integer)
}

pub fn vandermonde_coeffs_with(n: usize, scheme: NodeScheme) -> Result<DecompositionMatrix> {
    match scheme {
        NodeScheme::Integer => exact_integer(n),
        NodeScheme::Chebyshev => chebyshev(n),
    }
}

fn exact_integer(n: usize) -> Result<DecompositionMatrix> {
    if n > MAX_EXACT_DEGREE {
        return Err(Error::DegreeTooLarge(n));
    }
    let m = n + 1;
    let int = |v: i64| BigRational::from_integer(BigInt::from(v));
    // augmented [V | I]
    let mut a: Vec<Vec<BigRational>> = (0..m)
        .map(|k| {
            let mut row: Vec<BigRational> = (0..m).map(|j| int((k as i64).pow(j as u32))).collect();
            row.extend((0..m).map(|c| if c == k { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for col in 0..m {
        let pivot = (col..m).find(|&r| !a[r][col].is_zero()).expect("Vandermonde matrix is invertible");
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        let prow = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&prow) {
                    *x = &*x - &f * p;
                }
            }
        }
    }
    let alpha = a
        .iter()
        .map(|row| row[m..].iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect())
        .collect();
    Ok(DecompositionMatrix {
        n,
        nodes: (0..m).map(|k| k as f64).collect(),
        alpha,
    })
}

fn chebyshev(n: usize) -> Result<DecompositionMatrix> {
    if n > MAX_FLOAT_DEGREE {
        return Err(Error::DegreeTooLarge(n));
    }
    let m = n + 1;
    let top = n.max(1) as f64;
    let nodes: Vec<f64> = (0..m)
        .map(|k| {
            let theta = (2 * k + 1) as f64 * std::f64::consts::PI / (2 * m) as f64;
            0.5 * top * (1.0 - theta.cos())
        })
        .collect();
    let v = DMatrix::from_fn(m, m, |k, j| nodes[k].powi(j as i32));
    let inv = v
        .try_inverse()
        .ok_or_else(|| Error::RankDeficient("Chebyshev Vandermonde matrix is singular".into()))?;
    let alpha = (0..m).map(|i| (0..m).map(|j| inv[(i, j)]).collect()).collect();
    Ok(DecompositionMatrix { n, nodes, alpha })
}
