use serde::{Deserialize, Serialize};

use crate::convexfn::{ConeRestriction, MaxAffine};
use crate::error::{Error, Result};
use crate::hessian::{counterexample_eval, ExponentSign, Grid, SmoothGridFunction};
use crate::linalg;
use crate::valuations::{dual_zeta_valuation, zeta_valuation, TestFunction};

/// Polygon sides used for the truncating ball.
pub const BALL_SIDES: usize = 720;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoerciveRow {
    pub radius: f64,
    pub value: f64,
    /// `value / R^n`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoerciveReport {
    pub rows: Vec<CoerciveRow>,
    /// `ζ(y) vol(C ∩ B)` for the unit ball `B`.
    pub predicted_ratio: f64,
}

impl CoerciveReport {
    /// Largest `|ratio / predicted - 1|`; zero when the prediction vanishes
    /// and so do all values.
    pub fn max_relative_deviation(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| {
                if self.predicted_ratio == 0.0 {
                    if r.value == 0.0 { 0.0 } else { f64::INFINITY }
                } else {
                    (r.ratio / self.predicted_ratio - 1.0).abs()
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Volume of a pointed cone inside the unit ball.
fn cone_ball_volume(cone: &ConeRestriction) -> f64 {
    match (cone.dim(), cone.rays.len()) {
        (1, _) => 1.0,
        (2, 2) => {
            let (a, b) = (&cone.rays[0], &cone.rays[1]);
            let cos = linalg::dot(a, b) / (linalg::norm(a) * linalg::norm(b));
            0.5 * cos.clamp(-1.0, 1.0).acos()
        }
        _ => 0.0,
    }
}

/// `Z_ζ(<y, .> + I_{C ∩ R B})` for growing `R`: grows like `R^n`, so `Z_ζ` has
/// no finite extension to the coercive functions `<y, .> + I_C`.
pub fn coercive_divergence_demo(zeta: &TestFunction, cone: &ConeRestriction, radii: &[f64]) -> Result<CoerciveReport> {
    let n = cone.dim();
    if zeta.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: zeta.dim() });
    }
    let rows = radii
        .iter()
        .map(|&r| {
            let u = cone.truncate(r, BALL_SIDES)?;
            let value = zeta_valuation(zeta, &u)?;
            Ok(CoerciveRow { radius: r, value, ratio: value / r.powi(n as i32) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CoerciveReport {
        rows,
        predicted_ratio: zeta.eval(&cone.linear) * cone_ball_volume(cone),
    })
}

/// `log|Z(λ)| - n log λ ≈ c0 + c1 λ` fitted over the positive grid points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub lambdas: Vec<f64>,
    pub values: Vec<f64>,
    pub c0: f64,
    pub c1: f64,
    /// `|values|` non-decreasing in `λ`.
    pub monotone: bool,
}

pub fn growth_fit(n: usize, lambdas: &[f64], values: &[f64]) -> Result<GrowthReport> {
    let pts: Vec<(f64, f64)> = lambdas
        .iter()
        .zip(values)
        .filter(|(l, v)| **l > 0.0 && v.abs() > 0.0)
        .map(|(l, v)| (*l, v.abs().ln() - n as f64 * l.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::RankDeficient("need two positive samples".into()));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::RankDeficient("scaling factors coincide".into()));
    }
    let c1 = sxy / sxx;
    Ok(GrowthReport {
        lambdas: lambdas.to_vec(),
        values: values.to_vec(),
        c0: my - c1 * mx,
        c1,
        monotone: values.windows(2).all(|w| w[1].abs() >= w[0].abs()),
    })
}

/// Grid for the growth demo: `[-3, 3]^n` at step `h`.
pub fn growth_grid(n: usize, h: f64) -> Result<Grid> {
    Grid::new(&vec![-3.0; n], &vec![3.0; n], h)
}

/// The non-vertically-invariant example on `λ |x|^2 / 2`.
pub fn growth_demo(eta: &TestFunction, lambdas: &[f64], sign: ExponentSign, h: f64) -> Result<GrowthReport> {
    let n = eta.dim();
    let grid = growth_grid(n, h)?;
    let base = SmoothGridFunction::sample(grid, |x| 0.5 * linalg::dot(x, x));
    let values = lambdas
        .iter()
        .map(|&l| counterexample_eval(eta, &base.scaled(l), sign))
        .collect::<Result<Vec<_>>>()?;
    growth_fit(n, lambdas, &values)
}

/// `λ -> Z*_ζ(λ v)`: polynomial growth of exact degree `n`.
pub fn polynomial_growth_control(zeta: &TestFunction, v: &MaxAffine, lambdas: &[f64]) -> Result<GrowthReport> {
    let values = lambdas
        .iter()
        .map(|&l| dual_zeta_valuation(zeta, &v.scale_values(l)?))
        .collect::<Result<Vec<_>>>()?;
    growth_fit(v.dim(), lambdas, &values)
}
