use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convexfn::{inf_convolve, CellPA};
use crate::error::{Error, Result};
use crate::hessian::SmoothGridFunction;
use crate::linalg::factorial;
use crate::valuations::ValuationOracle;

/// `Z̄(u_1[i_1], ..., u_k[i_k])` for every multi-index of total degree `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedValuationTable {
    pub exponents: Vec<Vec<usize>>,
    pub values: Vec<f64>,
}

impl MixedValuationTable {
    pub fn get(&self, exponent: &[usize]) -> Option<f64> {
        self.exponents.iter().position(|e| e == exponent).map(|i| self.values[i])
    }
}

/// Least-squares fit of a homogeneous polynomial of degree `m` in `k` scaling
/// parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialFit {
    pub exponents: Vec<Vec<usize>>,
    pub coefficients: Vec<f64>,
    /// Largest absolute misfit over the samples.
    pub residual: f64,
    pub max_sample: f64,
    pub mixed: MixedValuationTable,
}

/// Multi-indices of length `k` and total degree `m`, lexicographically descending.
fn exponents(k: usize, m: usize) -> Vec<Vec<usize>> {
    if k == 1 {
        return vec![vec![m]];
    }
    let mut out = Vec::new();
    for first in (0..=m).rev() {
        for mut rest in exponents(k - 1, m - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn multinomial(e: &[usize]) -> f64 {
    let m: usize = e.iter().sum();
    e.iter().fold(factorial(m), |acc, &i| acc / factorial(i))
}

/// Fits `Z(λ_1, ..., λ_k) = sum_e c_e λ^e` on the tensor grid `lambdas^k`.
pub fn polynomial_fit_with(
    k: usize,
    m: usize,
    lambdas: &[f64],
    sample: impl Fn(&[f64]) -> Result<f64> + Sync,
) -> Result<PolynomialFit> {
    if k == 0 {
        return Err(Error::ArityMismatch("at least one argument is required".into()));
    }
    let mut distinct: Vec<f64> = lambdas.iter().copied().filter(|&l| l > 0.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < m + 1 {
        return Err(Error::RankDeficient(format!(
            "{} distinct positive nodes for degree {m}",
            distinct.len()
        )));
    }
    let points: Vec<Vec<f64>> = (0..distinct.len().pow(k as u32))
        .map(|mut c| {
            (0..k)
                .map(|_| {
                    let l = distinct[c % distinct.len()];
                    c /= distinct.len();
                    l
                })
                .collect()
        })
        .collect();
    let values = points.par_iter().map(|p| sample(p)).collect::<Result<Vec<f64>>>()?;
    let exps = exponents(k, m);
    let design = DMatrix::from_fn(points.len(), exps.len(), |r, c| {
        points[r]
            .iter()
            .zip(&exps[c])
            .map(|(l, &e)| l.powi(e as i32))
            .product()
    });
    let rhs = DVector::from_vec(values.clone());
    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if svd.rank(1e-12 * smax) < exps.len() {
        return Err(Error::RankDeficient("design matrix has deficient rank".into()));
    }
    let coef = svd
        .solve(&rhs, 1e-14 * smax)
        .map_err(|e| Error::RankDeficient(e.to_string()))?;
    let residual = (&design * &coef - &rhs).amax();
    let coefficients: Vec<f64> = coef.iter().copied().collect();
    let mixed = MixedValuationTable {
        exponents: exps.clone(),
        values: coefficients.iter().zip(&exps).map(|(c, e)| c / multinomial(e)).collect(),
    };
    Ok(PolynomialFit {
        exponents: exps,
        coefficients,
        residual,
        max_sample: values.iter().fold(0.0, |a, v| a.max(v.abs())),
        mixed,
    })
}

fn degree_of(z: &ValuationOracle<CellPA>, fallback: Option<usize>) -> Result<usize> {
    z.flags()
        .degree
        .or(fallback)
        .ok_or_else(|| Error::ArityMismatch("oracle does not declare a homogeneity degree".into()))
}

/// Samples `Z(λ_1 □ u_1 □ ... □ λ_k □ u_k)` and fits the polynomial of the
/// oracle's degree.
pub fn polynomial_fit(z: &ValuationOracle<CellPA>, us: &[CellPA], lambdas: &[f64]) -> Result<PolynomialFit> {
    let m = degree_of(z, None)?;
    polynomial_fit_with(us.len(), m, lambdas, |l| z.eval(&inf_convolve(l, us)?))
}

/// Samples `Z(λ_1 v_1 + ... + λ_k v_k)` for functions on a common grid.
pub fn polynomial_fit_smooth(
    z: &ValuationOracle<SmoothGridFunction>,
    vs: &[SmoothGridFunction],
    m: usize,
    lambdas: &[f64],
) -> Result<PolynomialFit> {
    polynomial_fit_with(vs.len(), m, lambdas, |l| z.eval(&SmoothGridFunction::combine(l, vs)?))
}

/// `(1/m!) sum_{S != ∅} (-1)^{m-|S|} Z(□_{j in S} u_j)`.
pub fn polarize(z: &ValuationOracle<CellPA>, us: &[CellPA]) -> Result<f64> {
    let m = us.len();
    if m == 0 {
        return Err(Error::ArityMismatch("no arguments".into()));
    }
    if let Some(d) = z.flags().degree {
        if d != m {
            return Err(Error::ArityMismatch(format!("{m} arguments for a {d}-homogeneous oracle")));
        }
    }
    let terms = (1usize..(1 << m))
        .into_par_iter()
        .map(|mask| {
            let subset: Vec<CellPA> = (0..m).filter(|j| mask & (1 << j) != 0).map(|j| us[j].clone()).collect();
            let sign = if (m - subset.len()).is_multiple_of(2) { 1.0 } else { -1.0 };
            let value = if subset.len() == 1 {
                z.eval(&subset[0])?
            } else {
                z.eval(&inf_convolve(&vec![1.0; subset.len()], &subset)?)?
            };
            Ok(sign * value)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(terms.iter().sum::<f64>() / factorial(m))
}
