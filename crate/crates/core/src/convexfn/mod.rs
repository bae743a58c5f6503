//! Calculus of piecewise-affine convex functions in two representations:
//! finite maxima of affine functions and cell-wise affine functions with a
//! bounded polytopal domain. The two are exchanged by Legendre conjugation.

mod affine;
mod approx;
mod cell_pa;
mod lattice;
mod max_affine;

pub use affine::{AffineFunction, VerticalShiftTag};
pub use approx::{
    epi_distance_report, numeric_gradient, sample_approx, sublevel_set, sublevel_set_max_affine,
    ConeRestriction, EpiDistanceReport, H_FD,
};
pub use cell_pa::CellPA;
pub use lattice::{guarded_min, guarded_min_max_affine, pointwise_max, MinResult};
pub use max_affine::MaxAffine;

use crate::error::{Error, Result};

/// Legendre conjugation between the two representations.
pub trait Conjugate {
    type Dual;
    fn conjugate(&self) -> Result<Self::Dual>;
}

impl Conjugate for MaxAffine {
    type Dual = CellPA;
    fn conjugate(&self) -> Result<CellPA> {
        conjugate_max_affine(self)
    }
}

impl Conjugate for CellPA {
    type Dual = MaxAffine;
    fn conjugate(&self) -> Result<MaxAffine> {
        conjugate_cell_pa(self)
    }
}

/// `v*`: the convex envelope of the values `-b_i` at the slopes `a_i`.
pub fn conjugate_max_affine(v: &MaxAffine) -> Result<CellPA> {
    CellPA::from_vertex_values(
        v.dim(),
        v.pieces()
            .iter()
            .map(|p| (p.slope.clone(), -p.intercept))
            .collect(),
    )
}

pub fn conjugate_cell_pa(u: &CellPA) -> Result<MaxAffine> {
    u.conjugate()
}

/// Weighted infimal convolution `w_1 □ u_1 □ ... □ w_m □ u_m`, computed as the
/// conjugate of `sum_j w_j u_j*`.
pub fn inf_convolve(weights: &[f64], inputs: &[CellPA]) -> Result<CellPA> {
    if weights.len() != inputs.len() {
        return Err(Error::ArityMismatch(format!(
            "{} weights for {} functions",
            weights.len(),
            inputs.len()
        )));
    }
    if inputs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut acc: Option<MaxAffine> = None;
    for (&w, u) in weights.iter().zip(inputs) {
        if w < 0.0 || w.is_nan() {
            return Err(Error::NegativeScale(w));
        }
        if w == 0.0 {
            return Err(Error::ZeroWeight);
        }
        let term = u.conjugate()?.scale_values(w)?;
        acc = Some(match acc {
            None => term,
            Some(a) => a.sum(&term)?,
        });
    }
    conjugate_max_affine(&acc.expect("nonempty"))
}

#[cfg(test)]
mod tests;
