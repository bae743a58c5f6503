use serde::{Deserialize, Serialize};

use crate::convexfn::{CellPA, MaxAffine};
use crate::error::{Error, Result};
use crate::geometry::{Halfspace, Polyhedron};
use crate::linalg::{self, binomial};

/// A product window `B × C`: `B` in the domain variable, `C` in the gradient variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub b: Polyhedron,
    pub c: Polyhedron,
}

impl Window {
    pub fn new(b: Polyhedron, c: Polyhedron) -> Result<Self> {
        if !b.is_bounded() || !c.is_bounded() {
            return Err(Error::UnboundedWindow);
        }
        if b.dim() != c.dim() {
            return Err(Error::DimensionMismatch {
                expected: b.dim(),
                got: c.dim(),
            });
        }
        Ok(Self { b, c })
    }

    /// Axis-aligned boxes `[-rb, rb]^n × [-rc, rc]^n`.
    pub fn centered(dim: usize, rb: f64, rc: f64) -> Result<Self> {
        Self::new(
            Polyhedron::cuboid(&vec![-rb; dim], &vec![rb; dim])?,
            Polyhedron::cuboid(&vec![-rc; dim], &vec![rc; dim])?,
        )
    }

    /// The reflected window `C × B`.
    pub fn hat(&self) -> Window {
        Window {
            b: self.c.clone(),
            c: self.b.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.b.dim()
    }
}

/// `relint(face) × subdiff` is one stratum of the graph of the subdifferential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphPiece {
    pub face: Polyhedron,
    pub subdiff: Polyhedron,
    pub k: usize,
}

/// `values[i]` is the i-th Hessian measure of the window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HessianMeasureTable {
    pub values: Vec<f64>,
}

impl HessianMeasureTable {
    /// `sum_i binom(n, i) s^i Θ_{n-i}`: the measure of the displaced graph.
    pub fn ps_polynomial(&self, s: f64) -> f64 {
        let n = self.values.len() - 1;
        (0..=n)
            .map(|i| binomial(n, i) * s.powi(i as i32) * self.values[n - i])
            .sum()
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > 2 {
        return Err(Error::DimensionUnsupported(dim));
    }
    Ok(())
}

/// Strata of the subdifferential graph, one per face of the subdivision.
pub fn face_lattice(u: &CellPA) -> Result<Vec<GraphPiece>> {
    check_dim(u.dim())?;
    let mut out = vec![];
    let polys = u
        .cells()
        .iter()
        .map(|c| &c.poly)
        .chain(u.faces().iter().map(|f| &f.poly));
    for face in polys {
        let x = face.vertex_centroid().ok_or(Error::EmptyInput)?;
        out.push(GraphPiece {
            face: face.clone(),
            subdiff: u.subdifferential(&x)?,
            k: face.affine_dim(),
        });
    }
    Ok(out)
}

/// Strata of the subdifferential graph of a finite PA function: activity
/// regions, edges where two pieces tie, and kink vertices.
pub fn finite_face_lattice(v: &MaxAffine) -> Result<Vec<GraphPiece>> {
    let n = v.dim();
    check_dim(n)?;
    let p = v.pieces();
    let mut out = vec![];
    for (i, pi) in p.iter().enumerate() {
        let region = v.region(i)?;
        if region.affine_dim() == n {
            out.push(GraphPiece {
                face: region,
                subdiff: Polyhedron::point(pi.slope.clone()),
                k: n,
            });
        }
    }
    if n == 2 {
        for i in 0..p.len() {
            for j in (i + 1)..p.len() {
                let d = linalg::sub(&p[i].slope, &p[j].slope);
                let e = p[j].intercept - p[i].intercept;
                let mut hs = vec![
                    Halfspace::new(d.clone(), e),
                    Halfspace::new(linalg::scale(&d, -1.0), -e),
                ];
                for (k, pk) in p.iter().enumerate() {
                    if k != i && k != j {
                        hs.push(Halfspace::new(
                            linalg::sub(&pk.slope, &p[i].slope),
                            p[i].intercept - pk.intercept,
                        ));
                    }
                }
                let edge = Polyhedron::from_halfspaces(2, hs)?;
                if edge.is_empty() || edge.affine_dim() != 1 {
                    continue;
                }
                out.push(GraphPiece {
                    face: edge,
                    subdiff: Polyhedron::from_points(2, &[p[i].slope.clone(), p[j].slope.clone()])?,
                    k: 1,
                });
            }
        }
    }
    for (x, active) in v.kink_vertices() {
        let slopes: Vec<_> = active.iter().map(|&i| p[i].slope.clone()).collect();
        out.push(GraphPiece {
            face: Polyhedron::point(x),
            subdiff: Polyhedron::from_points(n, &slopes)?,
            k: 0,
        });
    }
    Ok(out)
}

fn measure_from_pieces(n: usize, pieces: &[GraphPiece], w: &Window) -> Result<HessianMeasureTable> {
    let mut values = vec![0.0; n + 1];
    for piece in pieces {
        let f = piece.face.intersect(&w.b)?;
        if f.is_empty() {
            continue;
        }
        let q = piece.subdiff.intersect(&w.c)?;
        if q.is_empty() {
            continue;
        }
        let a = f.volume_k(piece.k)?;
        let b = q.volume_k(n - piece.k)?;
        values[piece.k] += a * b;
    }
    for (k, v) in values.iter_mut().enumerate() {
        *v /= binomial(n, k);
    }
    Ok(HessianMeasureTable { values })
}

/// `Θ_k(u, B × C) = binom(n, k)^{-1} sum_{dim F = k} vol_k(F ∩ B) vol_{n-k}(Q_F ∩ C)`.
pub fn hessian_measure(u: &CellPA, w: &Window) -> Result<HessianMeasureTable> {
    if w.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            got: w.dim(),
        });
    }
    measure_from_pieces(u.dim(), &face_lattice(u)?, w)
}

/// Hessian measures of a finite PA function from its own face structure.
pub fn hessian_measure_finite(v: &MaxAffine, w: &Window) -> Result<HessianMeasureTable> {
    if w.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            got: w.dim(),
        });
    }
    measure_from_pieces(v.dim(), &finite_face_lattice(v)?, w)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    /// `Θ_i(v, B × C)` from the face structure of `v`.
    pub direct: Vec<f64>,
    /// `Θ_{n-i}(v*, C × B)`, reindexed by `i`.
    pub via_conjugate: Vec<f64>,
    pub max_discrepancy: f64,
}

/// Compares `Θ_i(v, η)` with `Θ_{n-i}(v*, η̂)` for every `i`.
pub fn duality_check(v: &MaxAffine, w: &Window) -> Result<DualityReport> {
    let direct = hessian_measure_finite(v, w)?.values;
    let u = crate::convexfn::conjugate_max_affine(v)?;
    let mut via_conjugate = hessian_measure(&u, &w.hat())?.values;
    via_conjugate.reverse();
    let max_discrepancy = direct
        .iter()
        .zip(&via_conjugate)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(DualityReport {
        direct,
        via_conjugate,
        max_discrepancy,
    })
}
