use serde::{Deserialize, Serialize};

use super::affine::AffineFunction;
use crate::error::{Error, Result};
use crate::geometry::{lower_hull, Halfspace, LiftedPointSet, Polyhedron};
use crate::linalg::{self, lex_cmp, Point};

/// Finite piecewise-affine convex function `max_i w_i`, kept with only
/// essential pieces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaxAffine {
    dim: usize,
    pieces: Vec<AffineFunction>,
}

#[derive(Deserialize)]
struct MaxAffineJson {
    dim: usize,
    pieces: Vec<AffineFunction>,
}

impl<'de> Deserialize<'de> for MaxAffine {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MaxAffineJson::deserialize(d)?;
        MaxAffine::new(raw.dim, raw.pieces).map_err(serde::de::Error::custom)
    }
}

impl MaxAffine {
    /// Builds the maximum of `pieces`, dropping pieces that never strictly win.
    pub fn new(dim: usize, pieces: Vec<AffineFunction>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::EmptyInput);
        }
        for p in &pieces {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
            AffineFunction::new(p.slope.clone(), p.intercept)?;
        }
        let pieces = prune(dim, pieces)?;
        Ok(Self { dim, pieces })
    }

    pub fn linear(y: Point) -> Self {
        let dim = y.len();
        Self {
            dim,
            pieces: vec![AffineFunction::linear(y)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[AffineFunction] {
        &self.pieces
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.eval(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index of a maximizing piece at `x`.
    pub fn active_piece(&self, x: &[f64]) -> usize {
        let mut best = 0;
        let mut val = f64::NEG_INFINITY;
        for (i, p) in self.pieces.iter().enumerate() {
            let v = p.eval(x);
            if v > val {
                val = v;
                best = i;
            }
        }
        best
    }

    /// `x -> lambda * v(x)`.
    pub fn scale_values(&self, lambda: f64) -> Result<Self> {
        if lambda < 0.0 {
            return Err(Error::NegativeScale(lambda));
        }
        Self::new(self.dim, self.pieces.iter().map(|p| p.scaled(lambda)).collect())
    }

    /// Epi-scaling `lambda v(x / lambda)` for `lambda > 0`.
    pub fn epi_scale(&self, lambda: f64) -> Result<Self> {
        if lambda < 0.0 {
            return Err(Error::NegativeScale(lambda));
        }
        if lambda == 0.0 {
            return Err(Error::ZeroWeight);
        }
        Ok(Self {
            dim: self.dim,
            pieces: self
                .pieces
                .iter()
                .map(|p| AffineFunction {
                    slope: p.slope.clone(),
                    intercept: lambda * p.intercept,
                })
                .collect(),
        })
    }

    /// Pointwise sum, pruned.
    pub fn sum(&self, other: &MaxAffine) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut pieces = Vec::with_capacity(self.pieces.len() * other.pieces.len());
        for p in &self.pieces {
            for q in &other.pieces {
                pieces.push(p.add(q));
            }
        }
        Self::new(self.dim, pieces)
    }

    /// `x -> v(x - x0) + alpha`.
    pub fn translate(&self, x0: &[f64], alpha: f64) -> Self {
        Self {
            dim: self.dim,
            pieces: self
                .pieces
                .iter()
                .map(|p| AffineFunction {
                    slope: p.slope.clone(),
                    intercept: p.intercept - linalg::dot(&p.slope, x0) + alpha,
                })
                .collect(),
        }
    }

    pub fn pointwise_max(&self, other: &MaxAffine) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        Self::new(self.dim, pieces)
    }

    /// Closed region where piece `i` is active, as an H-polyhedron.
    pub fn region(&self, i: usize) -> Result<Polyhedron> {
        let pi = &self.pieces[i];
        let hs = self
            .pieces
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, pj)| {
                Halfspace::new(linalg::sub(&pj.slope, &pi.slope), pi.intercept - pj.intercept)
            })
            .collect();
        Polyhedron::from_halfspaces(self.dim, hs)
    }

    /// Points where the subdifferential is full-dimensional, with the indices
    /// of the pieces active there.
    pub fn kink_vertices(&self) -> Vec<(Point, Vec<usize>)> {
        let m = self.pieces.len();
        let mut cand: Vec<Point> = vec![];
        if self.dim == 1 {
            for i in 0..m {
                for j in (i + 1)..m {
                    let (p, q) = (&self.pieces[i], &self.pieces[j]);
                    let da = p.slope[0] - q.slope[0];
                    if da.abs() > 1e-14 {
                        cand.push(vec![(q.intercept - p.intercept) / da]);
                    }
                }
            }
        } else if self.dim == 2 {
            for i in 0..m {
                for j in (i + 1)..m {
                    for k in (j + 1)..m {
                        let (p, q, r) = (&self.pieces[i], &self.pieces[j], &self.pieces[k]);
                        let a = linalg::sub(&p.slope, &q.slope);
                        let c = linalg::sub(&p.slope, &r.slope);
                        let (b, e) = (q.intercept - p.intercept, r.intercept - p.intercept);
                        let det = a[0] * c[1] - a[1] * c[0];
                        if det.abs() <= 1e-14 {
                            continue;
                        }
                        cand.push(vec![(b * c[1] - a[1] * e) / det, (a[0] * e - b * c[0]) / det]);
                    }
                }
            }
        }
        let mut out: Vec<(Point, Vec<usize>)> = vec![];
        for x in cand {
            if out.iter().any(|(y, _)| linalg::dist(y, &x) <= linalg::TAU_GEOM * (1.0 + linalg::norm(&x))) {
                continue;
            }
            let top = self.eval(&x);
            let tol = 1e-9 * (1.0 + top.abs());
            let active: Vec<usize> = (0..m).filter(|&i| self.pieces[i].eval(&x) >= top - tol).collect();
            let slopes: Vec<Point> = active.iter().map(|&i| self.pieces[i].slope.clone()).collect();
            let full = Polyhedron::from_points(self.dim, &slopes)
                .map(|q| q.affine_dim() == self.dim)
                .unwrap_or(false);
            if full {
                out.push((x, active));
            }
        }
        out
    }

    /// Subdifferential: the hull of the slopes active at `x`.
    pub fn subdifferential(&self, x: &[f64]) -> Result<Polyhedron> {
        let top = self.eval(x);
        let tol = 1e-9 * (1.0 + top.abs());
        let slopes: Vec<Point> = self
            .pieces
            .iter()
            .filter(|p| p.eval(x) >= top - tol)
            .map(|p| p.slope.clone())
            .collect();
        Polyhedron::from_points(self.dim, &slopes)
    }

    /// Pieces sorted lexicographically by (slope, intercept).
    pub fn canonical_pieces(&self) -> Vec<AffineFunction> {
        let mut p = self.pieces.clone();
        p.sort_by(|a, b| lex_cmp(&a.slope, &b.slope).then(a.intercept.total_cmp(&b.intercept)));
        p
    }

    pub fn approx_eq(&self, other: &MaxAffine, tol: f64) -> bool {
        let a = self.canonical_pieces();
        let b = other.canonical_pieces();
        a.len() == b.len() && a.iter().zip(&b).all(|(p, q)| p.approx_eq(q, tol))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// A piece `<a,x> + b` strictly wins somewhere iff the lifted point `(a, -b)`
/// is a vertex of the lower convex hull of all lifted points.
fn prune(dim: usize, pieces: Vec<AffineFunction>) -> Result<Vec<AffineFunction>> {
    if dim > 2 {
        let mut out: Vec<AffineFunction> = vec![];
        for p in pieces {
            match out
                .iter_mut()
                .find(|q| linalg::dist(&q.slope, &p.slope) <= linalg::TAU_GEOM)
            {
                Some(q) => q.intercept = q.intercept.max(p.intercept),
                None => out.push(p),
            }
        }
        return Ok(out);
    }
    let lifted =
        LiftedPointSet::new(dim, pieces.iter().map(|p| (p.slope.clone(), -p.intercept)).collect())?;
    let pts = lifted.points();
    if pts.len() == 1 {
        return Ok(vec![AffineFunction {
            slope: pts[0].site.clone(),
            intercept: -pts[0].height,
        }]);
    }
    let sub = lower_hull(&lifted)?;
    Ok(sub
        .vertex_ids()
        .into_iter()
        .map(|i| AffineFunction {
            slope: pts[i].site.clone(),
            intercept: -pts[i].height,
        })
        .collect())
}
