//! Hessian measures of piecewise-affine convex functions via the strata of
//! the subdifferential graph, a Monte-Carlo oracle for the displaced-graph
//! volume, and midpoint quadrature of smooth integral valuations.

mod measures;
mod montecarlo;
mod smooth;

pub use measures::{
    duality_check, face_lattice, finite_face_lattice, hessian_measure, hessian_measure_finite,
    DualityReport, GraphPiece, HessianMeasureTable, Window,
};
pub use montecarlo::{ps_volume_mc, McEstimate};
pub use smooth::{
    alesker_valuation_quad, counterexample_eval, mixed_discriminant, normalized_symmetric,
    smooth_valuation_quad, ExponentSign, Grid, MatrixField, Matrix, NodeData, SmoothGridFunction,
};

#[cfg(test)]
mod tests;
