use serde::{Deserialize, Serialize};

use super::affine::AffineFunction;
use super::cell_pa::CellPA;
use super::max_affine::MaxAffine;
use crate::error::{Error, Result};
use crate::geometry::{hausdorff_distance, Halfspace, Polyhedron};
use crate::linalg::{self, Point, TAU_GEOM};

/// Finite-difference step for gradients of smooth inputs.
pub const H_FD: f64 = 1e-5;

/// Central-difference gradient.
pub fn numeric_gradient(f: &dyn Fn(&[f64]) -> f64, x: &[f64]) -> Point {
    let mut g = vec![0.0; x.len()];
    let mut y = x.to_vec();
    for i in 0..x.len() {
        y[i] = x[i] + H_FD;
        let fp = f(&y);
        y[i] = x[i] - H_FD;
        let fm = f(&y);
        y[i] = x[i];
        g[i] = (fp - fm) / (2.0 * H_FD);
    }
    g
}

/// Maximum of tangent planes at the probes: a PA minorant of a convex `f`
/// that interpolates it at every probe.
pub fn sample_approx(
    f: &dyn Fn(&[f64]) -> f64,
    grad: Option<&dyn Fn(&[f64]) -> Point>,
    probes: &[Point],
) -> Result<MaxAffine> {
    let dim = probes.first().ok_or(Error::EmptyInput)?.len();
    let pieces = probes
        .iter()
        .map(|p| {
            let g = match grad {
                Some(gr) => gr(p),
                None => numeric_gradient(f, p),
            };
            let b = f(p) - linalg::dot(&g, p);
            AffineFunction::new(g, b)
        })
        .collect::<Result<Vec<_>>>()?;
    MaxAffine::new(dim, pieces)
}

/// `{u <= t}`, possibly empty.
pub fn sublevel_set(u: &CellPA, t: f64) -> Result<Polyhedron> {
    let mut pts: Vec<Point> = vec![];
    for (i, c) in u.cells().iter().enumerate() {
        let p = u.piece(i);
        let part = c
            .poly
            .intersect_halfspace(Halfspace::new(p.slope.clone(), t - p.intercept))?;
        if part.is_empty() {
            // the normalized halfspace may drop a degenerate constraint
            continue;
        }
        if c.poly.affine_dim() == 0 && p.intercept > t + TAU_GEOM {
            continue;
        }
        pts.extend(part.vertices().iter().cloned());
    }
    Polyhedron::from_points(u.dim(), &pts)
}

/// `{v <= t}` for a finite PA function; unbounded unless `v` is coercive.
pub fn sublevel_set_max_affine(v: &MaxAffine, t: f64) -> Result<Polyhedron> {
    Polyhedron::from_halfspaces(
        v.dim(),
        v.pieces()
            .iter()
            .map(|p| Halfspace::new(p.slope.clone(), t - p.intercept))
            .collect(),
    )
}

/// Hausdorff distances between sublevel sets of a sequence and of its
/// candidate epi-limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpiDistanceReport {
    pub t_grid: Vec<f64>,
    /// `distances[k][j]` compares level `t_grid[j]` of `seq[k]` and of the limit.
    pub distances: Vec<Vec<f64>>,
    /// Levels within tolerance of the limit's minimum value.
    pub flagged: Vec<bool>,
}

pub fn epi_distance_report(seq: &[CellPA], limit: &CellPA, t_grid: &[f64]) -> Result<EpiDistanceReport> {
    let m = limit.min_value();
    let flagged = t_grid.iter().map(|t| (t - m).abs() <= TAU_GEOM * (1.0 + m.abs())).collect();
    let lim: Vec<Polyhedron> = t_grid
        .iter()
        .map(|&t| sublevel_set(limit, t))
        .collect::<Result<_>>()?;
    let mut distances = Vec::with_capacity(seq.len());
    for u in seq {
        let mut row = Vec::with_capacity(t_grid.len());
        for (j, &t) in t_grid.iter().enumerate() {
            let s = sublevel_set(u, t)?;
            let d = match (s.is_empty(), lim[j].is_empty()) {
                (true, true) => 0.0,
                (false, false) => hausdorff_distance(&s, &lim[j])?,
                _ => f64::INFINITY,
            };
            row.push(d);
        }
        distances.push(row);
    }
    Ok(EpiDistanceReport {
        t_grid: t_grid.to_vec(),
        distances,
        flagged,
    })
}

/// `<y, .> + I_C` for a pointed polyhedral cone `C`: coercive but not
/// super-coercive, so it lies outside the bounded-domain class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeRestriction {
    pub linear: Point,
    pub rays: Vec<Point>,
}

impl ConeRestriction {
    /// Requires `<r, y> > 0` on every generating ray.
    pub fn new(linear: Point, rays: Vec<Point>) -> Result<Self> {
        let dim = linear.len();
        if dim == 0 || dim > 2 {
            return Err(Error::DimensionUnsupported(dim));
        }
        if rays.is_empty() || rays.len() > dim {
            return Err(Error::InvalidInput(format!("a pointed cone in dimension {dim} needs 1..={dim} rays")));
        }
        for r in &rays {
            if r.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: r.len() });
            }
            if linalg::dot(r, &linear) <= TAU_GEOM * linalg::norm(r) {
                return Err(Error::InvalidInput("linear part is not positive on the cone".into()));
            }
        }
        if dim == 2 && rays.len() == 2 && linalg::cross2(&[0.0, 0.0], &rays[0], &rays[1]).abs() <= TAU_GEOM {
            return Err(Error::DegenerateInput("cone rays are parallel".into()));
        }
        Ok(Self { linear, rays })
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    pub fn cone(&self) -> Result<Polyhedron> {
        Polyhedron::from_halfspaces(self.dim(), self.halfspaces())
    }

    fn halfspaces(&self) -> Vec<Halfspace> {
        if self.dim() == 1 {
            return vec![Halfspace::new(vec![-self.rays[0][0]], 0.0)];
        }
        if self.rays.len() == 1 {
            let r = &self.rays[0];
            return vec![
                Halfspace::new(vec![r[1], -r[0]], 0.0),
                Halfspace::new(vec![-r[1], r[0]], 0.0),
                Halfspace::new(vec![-r[0], -r[1]], 0.0),
            ];
        }
        let (mut a, mut b) = (self.rays[0].clone(), self.rays[1].clone());
        if linalg::cross2(&[0.0, 0.0], &a, &b) < 0.0 {
            std::mem::swap(&mut a, &mut b);
        }
        vec![
            Halfspace::new(vec![a[1], -a[0]], 0.0),
            Halfspace::new(vec![-b[1], b[0]], 0.0),
        ]
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let inside = self.halfspaces().iter().all(|h| h.slack(x) >= -TAU_GEOM);
        if inside {
            linalg::dot(&self.linear, x)
        } else {
            f64::INFINITY
        }
    }

    /// `<y, .> + I_{C ∩ R·B}` with the ball replaced by an inscribed regular
    /// polygon with `sides` vertices (a segment in one dimension).
    pub fn truncate(&self, radius: f64, sides: usize) -> Result<CellPA> {
        let dim = self.dim();
        let ball = if dim == 1 {
            Polyhedron::cuboid(&[-radius], &[radius])?
        } else {
            let pts: Vec<Point> = (0..sides.max(3))
                .map(|k| {
                    let th = 2.0 * std::f64::consts::PI * k as f64 / sides.max(3) as f64;
                    vec![radius * th.cos(), radius * th.sin()]
                })
                .collect();
            Polyhedron::from_points(2, &pts)?
        };
        let body = self.cone()?.intersect(&ball)?;
        CellPA::linear_on(&self.linear, &body)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tangent_lines_of_square() {
        let f = |x: &[f64]| x[0] * x[0];
        let v = sample_approx(&f, None, &[vec![-1.0], vec![0.0], vec![1.0]]).unwrap();
        let want = MaxAffine::new(
            1,
            vec![
                AffineFunction::new(vec![-2.0], -1.0).unwrap(),
                AffineFunction::new(vec![0.0], 0.0).unwrap(),
                AffineFunction::new(vec![2.0], -1.0).unwrap(),
            ],
        )
        .unwrap();
        assert!(v.approx_eq(&want, 1e-8));
    }

    #[test]
    fn affine_input_gives_one_piece() {
        let f = |x: &[f64]| 2.0 * x[0] - x[1] + 3.0;
        let probes: Vec<Point> = (0..9).map(|k| vec![k as f64 * 0.3 - 1.0, (k * k) as f64 * 0.1]).collect();
        let v = sample_approx(&f, None, &probes).unwrap();
        assert_eq!(v.pieces().len(), 1);
    }

    #[test]
    fn denser_probes_approximate_better() {
        let f = |x: &[f64]| x[0] * x[0];
        let grad = |x: &[f64]| vec![2.0 * x[0]];
        let mut prev = f64::INFINITY;
        for k in [3usize, 5, 9, 17, 33] {
            let probes: Vec<Point> = (0..k).map(|i| vec![-2.0 + 4.0 * i as f64 / (k - 1) as f64]).collect();
            let v = sample_approx(&f, Some(&grad), &probes).unwrap();
            let err = (0..=400)
                .map(|i| {
                    let x = -1.0 + i as f64 / 200.0;
                    (f(&[x]) - v.eval(&[x])).abs()
                })
                .fold(0.0, f64::max);
            assert!(err < prev);
            prev = err;
        }
    }

    #[test]
    fn sublevel_examples() {
        let k = Polyhedron::cuboid(&[0.0, 0.0], &[1.0, 2.0]).unwrap();
        let u = CellPA::indicator(&k).unwrap();
        assert!(hausdorff_distance(&sublevel_set(&u, 0.0).unwrap(), &k).unwrap() < 1e-12);
        assert!(sublevel_set(&u, -0.5).unwrap().is_empty());
        let abs = MaxAffine::new(1, vec![AffineFunction::linear(vec![1.0]), AffineFunction::linear(vec![-1.0])])
            .unwrap();
        let s = sublevel_set_max_affine(&abs, 2.0).unwrap();
        assert_eq!(s.vertices(), &[vec![-2.0], vec![2.0]]);
    }

    #[test]
    fn sublevel_of_epi_scaled() {
        let u = CellPA::from_vertex_values(
            2,
            vec![(vec![0.0, 0.0], 0.0), (vec![2.0, 0.0], 1.0), (vec![0.0, 1.0], 2.0), (vec![1.0, 1.0], 0.5)],
        )
        .unwrap();
        let lambda = 1.7;
        for t in [0.2, 0.7, 1.5] {
            let lhs = sublevel_set(&u.epi_scale(lambda).unwrap(), lambda * t).unwrap();
            let rhs = sublevel_set(&u, t).unwrap().scale(lambda).unwrap();
            assert!(hausdorff_distance(&lhs, &rhs).unwrap() < 1e-9);
        }
    }

    #[test]
    fn epi_distance_of_scaled_sequence() {
        let u = CellPA::from_vertex_values(1, vec![(vec![-1.0], 1.5), (vec![0.0], 0.5), (vec![2.0], 1.5)]).unwrap();
        let seq: Vec<CellPA> = (1..=8).map(|k| u.epi_scale(1.0 + 1.0 / k as f64).unwrap()).collect();
        let rep = epi_distance_report(&seq, &u, &[0.75, 1.0, 0.5]).unwrap();
        assert_eq!(rep.flagged, vec![false, false, true]);
        for j in 0..2 {
            for k in 1..seq.len() {
                assert!(rep.distances[k][j] < rep.distances[k - 1][j]);
                // O(1/k)
                assert!(rep.distances[k][j] * (k + 1) as f64 <= 3.0);
            }
        }
        let same = epi_distance_report(&[u.clone(), u.clone()], &u, &[0.5, 1.0]).unwrap();
        assert!(same.distances.iter().flatten().all(|d| *d == 0.0));
    }

    #[test]
    fn cone_restriction() {
        let c = ConeRestriction::new(vec![1.0, 1.0], vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(c.eval(&[2.0, 3.0]), 5.0);
        assert_eq!(c.eval(&[-1.0, 3.0]), f64::INFINITY);
        let t = c.truncate(2.0, 256).unwrap();
        let area = t.domain().volume().unwrap();
        assert!((area - std::f64::consts::PI).abs() < 1e-3);
        assert!(ConeRestriction::new(vec![1.0, -1.0], vec![vec![1.0, 0.0], vec![0.0, 1.0]]).is_err());
    }
}
