//! Homogeneous decomposition of epi-translation invariant valuations by
//! Vandermonde inversion over epi-multiples, homogeneity checks, polarization
//! into mixed valuations and polynomial fitting in the scaling parameters.

mod fit;
mod vandermonde;

pub use fit::{
    polarize, polynomial_fit, polynomial_fit_smooth, polynomial_fit_with, MixedValuationTable, PolynomialFit,
};
pub use vandermonde::{vandermonde_coeffs, vandermonde_coeffs_with, DecompositionMatrix, NodeScheme};

use rayon::prelude::*;

use crate::convexfn::{inf_convolve, CellPA, Conjugate, MaxAffine};
use crate::error::Result;
use crate::valuations::{dual_wrap, ValuationOracle};

fn apply(alpha: &DecompositionMatrix, samples: &[f64]) -> Vec<f64> {
    alpha
        .alpha
        .iter()
        .map(|row| row.iter().zip(samples).map(|(a, z)| a * z).sum())
        .collect()
}

/// `(Z_0(u), ..., Z_n(u))` with `Z_i(u) = sum_j alpha_ij Z(t_j □ u)`.
pub fn homogeneous_components(z: &ValuationOracle<CellPA>, u: &CellPA, n: usize) -> Result<Vec<f64>> {
    homogeneous_components_with(z, u, &vandermonde_coeffs(n)?)
}

pub fn homogeneous_components_with(
    z: &ValuationOracle<CellPA>,
    u: &CellPA,
    alpha: &DecompositionMatrix,
) -> Result<Vec<f64>> {
    let samples = alpha
        .nodes
        .par_iter()
        .map(|&t| z.eval(&u.epi_scale(t)?))
        .collect::<Result<Vec<f64>>>()?;
    Ok(apply(alpha, &samples))
}

/// The `i`-th homogeneous component of `z` as an oracle in its own right.
pub fn component_oracle(z: &ValuationOracle<CellPA>, i: usize, n: usize) -> Result<ValuationOracle<CellPA>> {
    let alpha = vandermonde_coeffs(n)?;
    if i > n {
        return Err(crate::Error::ArityMismatch(format!("component {i} of degree bound {n}")));
    }
    let inner = z.clone();
    let mut flags = z.flags();
    flags.degree = Some(i);
    Ok(ValuationOracle::new(
        format!("{}[{i}]", z.name()),
        flags,
        move |u: &CellPA| Ok(homogeneous_components_with(&inner, u, &alpha)?[i]),
    ))
}

/// `max_λ |Z_i(λ □ u) - λ^i Z_i(u)| / (1 + |Z_i(u)|)`.
pub fn verify_homogeneity(zi: &ValuationOracle<CellPA>, u: &CellPA, i: usize, lambdas: &[f64]) -> Result<f64> {
    if lambdas.iter().any(|&l| !(l > 0.0)) {
        return Err(crate::Error::InvalidInput("scaling factors must be positive".into()));
    }
    let base = zi.eval(u)?;
    let defects = lambdas
        .par_iter()
        .map(|&l| Ok((zi.eval(&u.epi_scale(l)?)? - l.powi(i as i32) * base).abs() / (1.0 + base.abs())))
        .collect::<Result<Vec<f64>>>()?;
    Ok(defects.into_iter().fold(0.0, f64::max))
}

/// Components of a dually invariant `Z` from the values `Z(t_j v)`.
pub fn dual_decompose(z: &ValuationOracle<MaxAffine>, v: &MaxAffine, n: usize) -> Result<Vec<f64>> {
    let alpha = vandermonde_coeffs(n)?;
    let samples = alpha
        .nodes
        .par_iter()
        .map(|&t| z.eval(&v.scale_values(t)?))
        .collect::<Result<Vec<f64>>>()?;
    Ok(apply(&alpha, &samples))
}

/// The same components computed on the conjugate side, through `Z*(u) = Z(u*)`.
pub fn dual_decompose_via_conjugate(z: &ValuationOracle<MaxAffine>, v: &MaxAffine, n: usize) -> Result<Vec<f64>> {
    let zs = dual_wrap::<CellPA>(z);
    homogeneous_components(&zs, &v.conjugate()?, n)
}

/// `u -> Z(u □ w)`. Epi-translation invariant when `Z` is; its degree-one
/// component is `m Z̄(u, w[m-1])` for an `m`-homogeneous `Z`.
pub fn convolved_oracle(z: &ValuationOracle<CellPA>, w: &CellPA) -> ValuationOracle<CellPA> {
    let (inner, w) = (z.clone(), w.clone());
    let mut flags = z.flags();
    flags.degree = None;
    ValuationOracle::new(format!("{} □ w", z.name()), flags, move |u: &CellPA| {
        inner.eval(&inf_convolve(&[1.0, 1.0], &[u.clone(), w.clone()])?)
    })
}

#[cfg(test)]
mod tests;
