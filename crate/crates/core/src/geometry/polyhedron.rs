use serde::{Deserialize, Serialize};

use super::hull::{hull_1d, hull_2d};
use crate::error::{Error, Result};
use crate::linalg::{self, cross2, dot, norm, perp, sub, Point, TAU_GEOM};

/// Closed halfspace `normal . x <= offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: Vec<f64>, offset: f64) -> Self {
        Self { normal, offset }
    }

    #[inline]
    pub fn slack(&self, x: &[f64]) -> f64 {
        self.offset - dot(&self.normal, x)
    }

    fn normalized(&self) -> Option<Self> {
        let l = norm(&self.normal);
        if l <= 1e-14 {
            return None;
        }
        Some(Self {
            normal: self.normal.iter().map(|a| a / l).collect(),
            offset: self.offset / l,
        })
    }
}

/// A convex polyhedron in R^n (n = 1 or 2), possibly unbounded or empty.
///
/// Bounded polyhedra always carry both representations; `vertices` are the
/// hull vertices (sorted in 1-d, counter-clockwise in 2-d). Unbounded ones
/// carry the H-representation, the vertices that exist and the extreme rays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyhedronJson", into = "PolyhedronJson")]
pub struct Polyhedron {
    dim: usize,
    vertices: Vec<Point>,
    rays: Vec<Point>,
    halfspaces: Vec<Halfspace>,
    bounded: bool,
    empty: bool,
}

#[derive(Serialize, Deserialize)]
struct PolyhedronJson {
    dim: usize,
    #[serde(default)]
    vertices: Vec<Point>,
    #[serde(default)]
    rays: Vec<Point>,
    #[serde(default)]
    halfspaces: Vec<Halfspace>,
}

impl TryFrom<PolyhedronJson> for Polyhedron {
    type Error = Error;

    fn try_from(j: PolyhedronJson) -> Result<Self> {
        check_dim(j.dim)?;
        for p in j.vertices.iter().chain(&j.rays) {
            if p.len() != j.dim {
                return Err(Error::DimensionMismatch {
                    expected: j.dim,
                    got: p.len(),
                });
            }
        }
        if !j.halfspaces.is_empty() {
            let p = Polyhedron::from_halfspaces(j.dim, j.halfspaces)?;
            for v in &j.vertices {
                if !p.contains(v, 1e-7) {
                    return Err(Error::InvalidInput(
                        "vertex violates the given halfspaces".into(),
                    ));
                }
            }
            return Ok(p);
        }
        if !j.rays.is_empty() {
            return Err(Error::InvalidInput(
                "unbounded polyhedra must be given with halfspaces".into(),
            ));
        }
        if j.vertices.is_empty() {
            return Ok(Polyhedron::empty(j.dim));
        }
        Polyhedron::from_points(j.dim, &j.vertices)
    }
}

impl From<Polyhedron> for PolyhedronJson {
    fn from(p: Polyhedron) -> Self {
        PolyhedronJson {
            dim: p.dim,
            vertices: p.vertices,
            rays: p.rays,
            halfspaces: if p.empty {
                // infeasible pair keeps the empty set distinguishable on reload
                let mut e = vec![0.0; p.dim];
                e[0] = 1.0;
                vec![
                    Halfspace::new(e.clone(), -1.0),
                    Halfspace::new(linalg::scale(&e, -1.0), -1.0),
                ]
            } else {
                p.halfspaces
            },
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 1 || dim == 2 {
        Ok(())
    } else {
        Err(Error::DimensionUnsupported(dim))
    }
}

impl Polyhedron {
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            vertices: vec![],
            rays: vec![],
            halfspaces: vec![],
            bounded: true,
            empty: true,
        }
    }

    /// Convex hull of finitely many points.
    pub fn from_points(dim: usize, points: &[Point]) -> Result<Self> {
        check_dim(dim)?;
        if points.is_empty() {
            return Ok(Self::empty(dim));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.len(),
            });
        }
        let idx = if dim == 1 {
            hull_1d(points)
        } else {
            hull_2d(points)
        };
        let vertices: Vec<Point> = idx.iter().map(|&i| points[i].clone()).collect();
        Ok(Self::from_hull_vertices(dim, vertices))
    }

    /// Builds from vertices already in hull order (as returned by the hull routines).
    pub(crate) fn from_hull_vertices(dim: usize, vertices: Vec<Point>) -> Self {
        let halfspaces = hrep_of_hull(dim, &vertices);
        Self {
            dim,
            vertices,
            rays: vec![],
            halfspaces,
            bounded: true,
            empty: false,
        }
    }

    pub fn point(p: Point) -> Self {
        let dim = p.len();
        Self::from_hull_vertices(dim, vec![p])
    }

    /// Axis-aligned box `[lo, hi]`.
    pub fn cuboid(lo: &[f64], hi: &[f64]) -> Result<Self> {
        let dim = lo.len();
        check_dim(dim)?;
        if hi.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: hi.len(),
            });
        }
        if lo.iter().zip(hi).any(|(a, b)| a > b) {
            return Ok(Self::empty(dim));
        }
        let pts: Vec<Point> = if dim == 1 {
            vec![vec![lo[0]], vec![hi[0]]]
        } else {
            vec![
                vec![lo[0], lo[1]],
                vec![hi[0], lo[1]],
                vec![hi[0], hi[1]],
                vec![lo[0], hi[1]],
            ]
        };
        Self::from_points(dim, &pts)
    }

    /// Intersection of halfspaces; may be unbounded or empty.
    pub fn from_halfspaces(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        check_dim(dim)?;
        let mut hs = Vec::with_capacity(halfspaces.len());
        for h in halfspaces {
            if h.normal.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: h.normal.len(),
                });
            }
            match h.normalized() {
                Some(n) => hs.push(n),
                None => {
                    if h.offset < -TAU_GEOM {
                        return Ok(Self::empty(dim));
                    }
                }
            }
        }
        if dim == 1 {
            Ok(Self::from_halfspaces_1d(hs))
        } else {
            Ok(Self::from_halfspaces_2d(hs))
        }
    }

    fn from_halfspaces_1d(hs: Vec<Halfspace>) -> Self {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for h in &hs {
            let b = h.offset / h.normal[0];
            if h.normal[0] > 0.0 {
                hi = hi.min(b);
            } else {
                lo = lo.max(b);
            }
        }
        if lo > hi + TAU_GEOM {
            return Self::empty(1);
        }
        if lo.is_finite() && hi.is_finite() {
            let hi = hi.max(lo);
            let pts = if hi - lo <= TAU_GEOM {
                vec![vec![0.5 * (lo + hi)]]
            } else {
                vec![vec![lo], vec![hi]]
            };
            return Self::from_hull_vertices(1, pts);
        }
        let mut vertices = vec![];
        let mut rays = vec![];
        if lo.is_finite() {
            vertices.push(vec![lo]);
        } else {
            rays.push(vec![-1.0]);
        }
        if hi.is_finite() {
            vertices.push(vec![hi]);
        } else {
            rays.push(vec![1.0]);
        }
        Self {
            dim: 1,
            vertices,
            rays,
            halfspaces: hs,
            bounded: false,
            empty: false,
        }
    }

    fn from_halfspaces_2d(hs: Vec<Halfspace>) -> Self {
        let feasible = |x: &[f64]| hs.iter().all(|h| h.slack(x) >= -TAU_GEOM * (1.0 + h.offset.abs()));

        // recession cone: extreme rays lie on boundary lines of the cone
        let mut rays: Vec<Point> = vec![];
        if hs.is_empty() {
            rays = vec![
                vec![1.0, 0.0],
                vec![0.0, 1.0],
                vec![-1.0, 0.0],
                vec![0.0, -1.0],
            ];
        } else {
            for h in &hs {
                for sgn in [1.0, -1.0] {
                    let d = linalg::scale(&perp(&h.normal), sgn);
                    if hs.iter().all(|g| dot(&g.normal, &d) <= TAU_GEOM)
                        && !rays.iter().any(|r| linalg::dist(r, &d) <= 1e-9)
                    {
                        rays.push(d);
                    }
                }
            }
        }

        let mut cand: Vec<Point> = vec![];
        for i in 0..hs.len() {
            for j in (i + 1)..hs.len() {
                let (a, b) = (&hs[i], &hs[j]);
                let det = a.normal[0] * b.normal[1] - a.normal[1] * b.normal[0];
                if det.abs() <= 1e-12 {
                    continue;
                }
                let x = (a.offset * b.normal[1] - a.normal[1] * b.offset) / det;
                let y = (a.normal[0] * b.offset - a.offset * b.normal[0]) / det;
                let p = vec![x, y];
                if feasible(&p) {
                    cand.push(p);
                }
            }
        }

        if rays.is_empty() {
            if cand.is_empty() {
                return Self::empty(2);
            }
            let idx = hull_2d(&cand);
            let vertices = idx.iter().map(|&i| cand[i].clone()).collect();
            return Self::from_hull_vertices(2, vertices);
        }

        // unbounded: keep vertices that are extreme
        let idx = hull_2d(&cand);
        let vertices: Vec<Point> = idx.iter().map(|&i| cand[i].clone()).collect();
        if vertices.is_empty() {
            // no vertex: either empty or containing a line; probe with a large box
            let big = 1e6;
            let mut boxed = hs.clone();
            boxed.extend(box_halfspaces(&[-big, -big], &[big, big]));
            let probe = Self::from_halfspaces_2d(boxed);
            if probe.is_empty() {
                return Self::empty(2);
            }
        }
        Self {
            dim: 2,
            vertices,
            rays,
            halfspaces: hs,
            bounded: false,
            empty: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }
    pub fn rays(&self) -> &[Point] {
        &self.rays
    }
    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }
    pub fn is_bounded(&self) -> bool {
        self.bounded
    }
    pub fn is_empty(&self) -> bool {
        self.empty
    }

    /// Dimension of the affine hull (0 for points and for the empty set).
    pub fn affine_dim(&self) -> usize {
        if self.empty {
            return 0;
        }
        if !self.bounded {
            if self.vertices.is_empty() {
                // a line is the only vertex-free set with an implicit equality
                let hs = &self.halfspaces;
                let flat = hs.iter().enumerate().any(|(i, a)| {
                    hs[i + 1..].iter().any(|b| {
                        linalg::dist(&a.normal, &linalg::scale(&b.normal, -1.0)) <= 1e-12
                            && a.offset + b.offset <= TAU_GEOM * (1.0 + a.offset.abs())
                    })
                });
                return if flat { self.dim - 1 } else { self.dim };
            }
            let mut pts = self.vertices.clone();
            for r in &self.rays {
                pts.push(linalg::add(&self.vertices[0], r));
            }
            return affine_dim_of(self.dim, &pts);
        }
        affine_dim_of(self.dim, &self.vertices)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if self.empty {
            return false;
        }
        self.halfspaces.iter().all(|h| h.slack(x) >= -tol)
    }

    /// Average of the vertices; a relative-interior point for bounded input.
    pub fn vertex_centroid(&self) -> Option<Point> {
        if self.vertices.is_empty() {
            return None;
        }
        let mut c = vec![0.0; self.dim];
        for v in &self.vertices {
            for (ci, vi) in c.iter_mut().zip(v) {
                *ci += vi;
            }
        }
        let k = self.vertices.len() as f64;
        Some(c.into_iter().map(|x| x / k).collect())
    }

    /// n-dimensional Lebesgue measure.
    pub fn volume(&self) -> Result<f64> {
        if self.empty {
            return Ok(0.0);
        }
        if !self.bounded {
            return Err(Error::Unbounded);
        }
        Ok(match (self.dim, self.vertices.len()) {
            (1, 2) => self.vertices[1][0] - self.vertices[0][0],
            (1, _) => 0.0,
            (2, k) if k >= 3 => polygon_area(&self.vertices),
            _ => 0.0,
        })
    }

    /// k-dimensional Hausdorff measure: infinite when the set has affine
    /// dimension above k, zero below.
    pub fn volume_k(&self, k: usize) -> Result<f64> {
        if self.empty {
            return Ok(0.0);
        }
        if !self.bounded {
            return Err(Error::Unbounded);
        }
        let d = self.affine_dim();
        if d > k {
            return Ok(f64::INFINITY);
        }
        if d < k {
            return Ok(0.0);
        }
        Ok(match d {
            0 => 1.0,
            1 => linalg::dist(&self.vertices[0], &self.vertices[self.vertices.len() - 1]),
            _ => polygon_area(&self.vertices),
        })
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        if self.empty || other.empty {
            return Ok(Self::empty(self.dim));
        }
        let mut hs = self.halfspaces.clone();
        hs.extend(other.halfspaces.iter().cloned());
        Self::from_halfspaces(self.dim, hs)
    }

    pub fn intersect_halfspace(&self, h: Halfspace) -> Result<Polyhedron> {
        if self.empty {
            return Ok(self.clone());
        }
        let mut hs = self.halfspaces.clone();
        hs.push(h);
        Self::from_halfspaces(self.dim, hs)
    }

    pub fn translate(&self, t: &[f64]) -> Polyhedron {
        if self.empty {
            return self.clone();
        }
        Polyhedron {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| linalg::add(v, t)).collect(),
            rays: self.rays.clone(),
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| Halfspace::new(h.normal.clone(), h.offset + dot(&h.normal, t)))
                .collect(),
            bounded: self.bounded,
            empty: false,
        }
    }

    /// Image under `x -> lambda x` for `lambda >= 0`.
    pub fn scale(&self, lambda: f64) -> Result<Polyhedron> {
        if lambda < 0.0 {
            return Err(Error::NegativeScale(lambda));
        }
        if self.empty {
            return Ok(self.clone());
        }
        if lambda == 0.0 {
            return Ok(Self::point(vec![0.0; self.dim]));
        }
        if !self.bounded {
            let hs = self
                .halfspaces
                .iter()
                .map(|h| Halfspace::new(h.normal.clone(), h.offset * lambda))
                .collect();
            return Self::from_halfspaces(self.dim, hs);
        }
        Ok(Self::from_hull_vertices(
            self.dim,
            self.vertices.iter().map(|v| linalg::scale(v, lambda)).collect(),
        ))
    }

    /// Euclidean distance from `x` to the (bounded, nonempty) set.
    pub fn distance_to(&self, x: &[f64]) -> f64 {
        if self.contains(x, 0.0) {
            return 0.0;
        }
        match self.vertices.len() {
            0 => f64::INFINITY,
            1 => linalg::dist(x, &self.vertices[0]),
            2 => segment_distance(x, &self.vertices[0], &self.vertices[1]),
            k => (0..k)
                .map(|i| segment_distance(x, &self.vertices[i], &self.vertices[(i + 1) % k]))
                .fold(f64::INFINITY, f64::min),
        }
    }
}

fn segment_distance(x: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab = sub(b, a);
    let l2 = dot(&ab, &ab);
    if l2 == 0.0 {
        return linalg::dist(x, a);
    }
    let t = (dot(&sub(x, a), &ab) / l2).clamp(0.0, 1.0);
    linalg::dist(x, &linalg::axpy(a, t, &ab))
}

pub(crate) fn polygon_area(v: &[Point]) -> f64 {
    let k = v.len();
    let mut a = 0.0;
    for i in 0..k {
        let p = &v[i];
        let q = &v[(i + 1) % k];
        a += p[0] * q[1] - p[1] * q[0];
    }
    0.5 * a.abs()
}

pub(crate) fn affine_dim_of(dim: usize, pts: &[Point]) -> usize {
    if pts.len() <= 1 {
        return 0;
    }
    let far = pts
        .iter()
        .map(|p| linalg::dist(p, &pts[0]))
        .enumerate()
        .fold((0, 0.0), |acc, (i, d)| if d > acc.1 { (i, d) } else { acc });
    if far.1 <= TAU_GEOM {
        return 0;
    }
    if dim == 1 {
        return 1;
    }
    let a = &pts[0];
    let b = &pts[far.0];
    let l = far.1;
    if pts.iter().any(|p| cross2(a, b, p).abs() > TAU_GEOM * l.max(1.0)) {
        2
    } else {
        1
    }
}

pub(crate) fn box_halfspaces(lo: &[f64], hi: &[f64]) -> Vec<Halfspace> {
    let n = lo.len();
    let mut hs = vec![];
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        hs.push(Halfspace::new(e.clone(), hi[i]));
        e[i] = -1.0;
        hs.push(Halfspace::new(e, -lo[i]));
    }
    hs
}

fn hrep_of_hull(dim: usize, v: &[Point]) -> Vec<Halfspace> {
    if dim == 1 {
        let lo = v[0][0];
        let hi = v[v.len() - 1][0];
        return vec![Halfspace::new(vec![1.0], hi), Halfspace::new(vec![-1.0], -lo)];
    }
    match v.len() {
        1 => box_halfspaces(&v[0], &v[0]),
        2 => {
            let d = sub(&v[1], &v[0]);
            let l = norm(&d);
            let d: Point = d.iter().map(|x| x / l).collect();
            let nu = perp(&d);
            vec![
                Halfspace::new(nu.clone(), dot(&nu, &v[0])),
                Halfspace::new(linalg::scale(&nu, -1.0), -dot(&nu, &v[0])),
                Halfspace::new(d.clone(), dot(&d, &v[1])),
                Halfspace::new(linalg::scale(&d, -1.0), -dot(&d, &v[0])),
            ]
        }
        k => (0..k)
            .map(|i| {
                let p = &v[i];
                let q = &v[(i + 1) % k];
                let e = sub(q, p);
                let l = norm(&e);
                let n = vec![e[1] / l, -e[0] / l];
                let off = dot(&n, p);
                Halfspace::new(n, off)
            })
            .collect(),
    }
}

/// Volume (n-dimensional Lebesgue measure) of a bounded polyhedron.
pub fn volume(p: &Polyhedron) -> Result<f64> {
    p.volume()
}

/// k-dimensional Hausdorff measure of a bounded polyhedron.
pub fn volume_k(p: &Polyhedron, k: usize) -> Result<f64> {
    p.volume_k(k)
}

pub fn intersect(p: &Polyhedron, q: &Polyhedron) -> Result<Polyhedron> {
    p.intersect(q)
}

/// Hausdorff distance between two nonempty polytopes; the maxima of the
/// directed distances are attained at vertices.
pub fn hausdorff_distance(p: &Polyhedron, q: &Polyhedron) -> Result<f64> {
    if p.is_empty() || q.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !p.is_bounded() || !q.is_bounded() {
        return Err(Error::Unbounded);
    }
    let d1 = p
        .vertices()
        .iter()
        .map(|v| q.distance_to(v))
        .fold(0.0, f64::max);
    let d2 = q
        .vertices()
        .iter()
        .map(|v| p.distance_to(v))
        .fold(0.0, f64::max);
    Ok(d1.max(d2))
}

pub fn minkowski_sum(p: &Polyhedron, q: &Polyhedron) -> Result<Polyhedron> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: q.dim(),
        });
    }
    if !p.is_bounded() || !q.is_bounded() {
        return Err(Error::Unbounded);
    }
    if p.is_empty() || q.is_empty() {
        return Ok(Polyhedron::empty(p.dim()));
    }
    let mut pts = vec![];
    for a in p.vertices() {
        for b in q.vertices() {
            pts.push(linalg::add(a, b));
        }
    }
    Polyhedron::from_points(p.dim(), &pts)
}
