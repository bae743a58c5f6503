//! Valuations on piecewise-affine convex functions: the gradient-weighted
//! volume functionals, their duals on finite functions, valuations restricted
//! to linear-plus-indicator functions, and a uniform oracle interface.

mod oracle;
mod test_function;

pub use oracle::{dual_wrap, OracleFlags, ValuationOracle};
pub use test_function::{Slot, TestFunction, TestFunction3};

use crate::convexfn::{CellPA, MaxAffine};
use crate::error::{Error, Result};
use crate::geometry::Polyhedron;
use crate::linalg::{self, Point};

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// `∫_{dom u} ζ(∇u(x)) dx`, exact as a sum over cells.
pub fn zeta_valuation(zeta: &TestFunction, u: &CellPA) -> Result<f64> {
    check_dim(zeta.dim(), u.dim())?;
    let mut total = 0.0;
    for (i, c) in u.cells().iter().enumerate() {
        let vol = c.poly.volume()?;
        if vol > 0.0 {
            total += vol * zeta.eval(&u.piece(i).slope);
        }
    }
    Ok(total)
}

/// Sum over kink vertices `x` of `v` of `ζ(x) vol(∂v(x))`.
pub fn dual_zeta_valuation(zeta: &TestFunction, v: &MaxAffine) -> Result<f64> {
    check_dim(zeta.dim(), v.dim())?;
    if v.dim() == 0 || v.dim() > 2 {
        return Err(Error::DimensionUnsupported(v.dim()));
    }
    let mut total = 0.0;
    for (x, active) in v.kink_vertices() {
        let w = zeta.eval(&x);
        if w == 0.0 {
            continue;
        }
        let slopes: Vec<Point> = active.iter().map(|&i| v.pieces()[i].slope.clone()).collect();
        total += w * Polyhedron::from_points(v.dim(), &slopes)?.volume()?;
    }
    debug_assert!({
        let other = zeta_valuation(zeta, &crate::convexfn::conjugate_max_affine(v)?)?;
        (other - total).abs() <= 1e-8 * (1.0 + total.abs())
    });
    Ok(total)
}

/// `Z(<y, .> + I_K)`.
pub fn body_valuation(z: &ValuationOracle<CellPA>, y: &[f64], k: &Polyhedron) -> Result<f64> {
    check_dim(k.dim(), y.len())?;
    z.eval(&CellPA::linear_on(y, k)?)
}

pub fn zeta_oracle(zeta: &TestFunction) -> ValuationOracle<CellPA> {
    let z = zeta.clone();
    ValuationOracle::new(
        "zeta",
        OracleFlags {
            translation_invariant: true,
            continuous: true,
            degree: Some(zeta.dim()),
        },
        move |u| zeta_valuation(&z, u),
    )
}

pub fn dual_zeta_oracle(zeta: &TestFunction) -> ValuationOracle<MaxAffine> {
    let z = zeta.clone();
    ValuationOracle::new(
        "dual-zeta",
        OracleFlags {
            translation_invariant: true,
            continuous: true,
            degree: Some(zeta.dim()),
        },
        move |v| dual_zeta_valuation(&z, v),
    )
}

/// `<y, .> + I_C` with `C` a cylinder of unit cross-section radius and height
/// `1 / |ζ(y)|` along `y`, so that the valuation equals `±κ_{n-1}`. Returns the
/// function and its valuation.
pub fn cylinder_witness(zeta: &TestFunction, y: &[f64]) -> Result<(CellPA, f64)> {
    check_dim(zeta.dim(), y.len())?;
    let w = zeta.eval(y);
    if w == 0.0 {
        return Err(Error::ZeroWeight);
    }
    let height = 1.0 / w.abs();
    let body = match y.len() {
        1 => Polyhedron::cuboid(&[0.0], &[height])?,
        2 => {
            let n = linalg::norm(y);
            let axis = if n > 0.0 { linalg::scale(y, 1.0 / n) } else { vec![0.0, 1.0] };
            let across = linalg::perp(&axis);
            let corners: Vec<Point> = [(-1.0, 0.0), (1.0, 0.0), (1.0, height), (-1.0, height)]
                .iter()
                .map(|&(s, t)| linalg::add(&linalg::scale(&across, s), &linalg::scale(&axis, t)))
                .collect();
            Polyhedron::from_points(2, &corners)?
        }
        d => return Err(Error::DimensionUnsupported(d)),
    };
    let u = CellPA::linear_on(y, &body)?;
    let val = zeta_valuation(zeta, &u)?;
    Ok((u, val))
}
