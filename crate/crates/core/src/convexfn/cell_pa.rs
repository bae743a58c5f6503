use serde::{Deserialize, Serialize};

use super::affine::{AffineFunction, VerticalShiftTag};
use super::max_affine::MaxAffine;
use crate::error::{Error, Result};
use crate::geometry::{
    hausdorff_distance, lower_hull, Cell, Face, Halfspace, LiftedPointSet, Polyhedron, Subdivision,
};
use crate::linalg::{self, Point, TAU_GEOM};

/// Piecewise-affine convex function with bounded polytopal domain, stored as
/// the regular subdivision induced by its values at the subdivision vertices.
/// Outside the domain the value is `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellPA {
    sub: Subdivision,
    domain: Polyhedron,
}

fn scale_of(points: &[Point]) -> f64 {
    points
        .iter()
        .flat_map(|p| p.iter().map(|x| x.abs()))
        .fold(1.0, f64::max)
}

impl CellPA {
    /// Convex envelope of the given (site, value) pairs over their convex
    /// hull. When the pairs are vertex values of a convex PA function, this is
    /// that function; extra points lying on or above its graph are harmless.
    pub fn from_vertex_values(dim: usize, values: Vec<(Point, f64)>) -> Result<Self> {
        if dim == 0 || dim > 2 {
            return Err(Error::DimensionUnsupported(dim));
        }
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        let set = LiftedPointSet::new(dim, values)?;
        let sites: Vec<Point> = set.points().iter().map(|p| p.site.clone()).collect();
        let domain = Polyhedron::from_points(dim, &sites)?;
        let sub = if set.len() == 1 {
            let p = &set.points()[0];
            Subdivision::single_point(dim, p.site.clone(), p.height)
        } else {
            lower_hull(&set)?
        };
        Ok(Self { sub, domain })
    }

    /// Indicator function of a nonempty polytope.
    pub fn indicator(k: &Polyhedron) -> Result<Self> {
        Self::linear_on(&vec![0.0; k.dim()], k)
    }

    /// `<y, .> + I_K`.
    pub fn linear_on(y: &[f64], k: &Polyhedron) -> Result<Self> {
        Self::affine_on(&AffineFunction::linear(y.to_vec()), k)
    }

    pub fn affine_on(w: &AffineFunction, k: &Polyhedron) -> Result<Self> {
        check_polytope(k)?;
        if w.dim() != k.dim() {
            return Err(Error::DimensionMismatch {
                expected: k.dim(),
                got: w.dim(),
            });
        }
        let mut u = Self::from_vertex_values(
            k.dim(),
            k.vertices().iter().map(|v| (v.clone(), w.eval(v))).collect(),
        )?;
        // keep the given piece rather than its refit from rounded heights
        if u.cells().len() == 1 && u.domain().affine_dim() == k.dim() {
            u.sub.set_piece(0, w.slope.clone(), w.intercept);
        }
        Ok(u)
    }

    /// `v + I_P` for a finite PA function `v` and a polytope `P`.
    pub fn restrict(v: &MaxAffine, p: &Polyhedron) -> Result<Self> {
        check_polytope(p)?;
        if v.dim() != p.dim() {
            return Err(Error::DimensionMismatch {
                expected: p.dim(),
                got: v.dim(),
            });
        }
        let mut pts: Vec<Point> = p.vertices().to_vec();
        if v.pieces().len() > 1 {
            for i in 0..v.pieces().len() {
                let r = v.region(i)?.intersect(p)?;
                pts.extend(r.vertices().iter().cloned());
            }
        }
        Self::from_vertex_values(p.dim(), pts.into_iter().map(|x| (x.clone(), v.eval(&x))).collect())
    }

    pub fn dim(&self) -> usize {
        self.sub.dim()
    }
    pub fn domain(&self) -> &Polyhedron {
        &self.domain
    }
    pub fn subdivision(&self) -> &Subdivision {
        &self.sub
    }
    pub fn cells(&self) -> &[Cell] {
        self.sub.cells()
    }
    pub fn faces(&self) -> &[Face] {
        self.sub.faces()
    }

    pub fn piece(&self, cell: usize) -> AffineFunction {
        let c = &self.sub.cells()[cell];
        AffineFunction {
            slope: c.slope.clone(),
            intercept: c.intercept,
        }
    }

    pub fn pieces(&self) -> Vec<AffineFunction> {
        (0..self.cells().len()).map(|i| self.piece(i)).collect()
    }

    /// Vertices of the subdivision with their values.
    pub fn vertices(&self) -> Vec<(Point, f64)> {
        let pts = self.sub.points().points();
        self.sub
            .vertex_ids()
            .into_iter()
            .map(|i| (pts[i].site.clone(), pts[i].height))
            .collect()
    }

    fn tol(&self) -> f64 {
        TAU_GEOM * scale_of(self.domain.vertices())
    }

    pub fn in_domain(&self, x: &[f64]) -> bool {
        self.domain.contains(x, self.tol())
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        if x.len() != self.dim() || !self.in_domain(x) {
            return f64::INFINITY;
        }
        // every cell's piece is a supporting minorant on the domain
        self.sub
            .cells()
            .iter()
            .map(|c| linalg::dot(&c.slope, x) + c.intercept)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Indices of cells whose closure contains `x`.
    pub fn incident_cells(&self, x: &[f64]) -> Vec<usize> {
        let tol = self.tol();
        self.sub
            .cells()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.poly.contains(x, tol))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn min_value(&self) -> f64 {
        self.vertices()
            .iter()
            .map(|(_, v)| *v)
            .fold(f64::INFINITY, f64::min)
    }

    /// Epi-scaling `lambda u(x / lambda)`; `lambda = 0` gives the indicator of the origin.
    pub fn epi_scale(&self, lambda: f64) -> Result<Self> {
        if lambda < 0.0 || lambda.is_nan() {
            return Err(Error::NegativeScale(lambda));
        }
        if lambda == 0.0 {
            return Self::from_vertex_values(self.dim(), vec![(vec![0.0; self.dim()], 0.0)]);
        }
        self.map_vertices(|x, v| (linalg::scale(x, lambda), lambda * v))
    }

    /// `x -> lambda u(x)`: multiplies values, keeps the domain.
    pub fn scale_values(&self, lambda: f64) -> Result<Self> {
        if lambda < 0.0 || lambda.is_nan() {
            return Err(Error::NegativeScale(lambda));
        }
        self.map_vertices(|x, v| (x.to_vec(), lambda * v))
    }

    /// `x -> u(x - x0) + alpha`: the epigraph moves by `(x0, alpha)`.
    pub fn translate(&self, tag: &VerticalShiftTag) -> Result<Self> {
        if tag.translation.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: tag.translation.len(),
            });
        }
        self.map_vertices(|x, v| (linalg::add(x, &tag.translation), v + tag.shift))
    }

    /// `u + w` for an affine `w`.
    pub fn add_affine(&self, w: &AffineFunction) -> Result<Self> {
        self.map_vertices(|x, v| (x.to_vec(), v + w.eval(x)))
    }

    fn map_vertices(&self, f: impl Fn(&[f64], f64) -> (Point, f64)) -> Result<Self> {
        Self::from_vertex_values(
            self.dim(),
            self.vertices().iter().map(|(x, v)| f(x, *v)).collect(),
        )
    }

    /// Legendre conjugate: the max of `<x_v, .> - u(x_v)` over subdivision vertices.
    pub fn conjugate(&self) -> Result<MaxAffine> {
        MaxAffine::new(
            self.dim(),
            self.vertices()
                .into_iter()
                .map(|(x, v)| AffineFunction {
                    slope: x,
                    intercept: -v,
                })
                .collect(),
        )
    }

    /// Subdifferential at `x`: intersection over incident cells `C` and their
    /// vertices `v` of `{y : <v - x, y> <= <v - x, slope_C>}`.
    pub fn subdifferential(&self, x: &[f64]) -> Result<Polyhedron> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        if !self.in_domain(x) {
            return Err(Error::OutsideDomain);
        }
        let tol = self.tol();
        let mut hs = vec![];
        for ci in self.incident_cells(x) {
            let c = &self.sub.cells()[ci];
            for v in c.poly.vertices() {
                let d = linalg::sub(v, x);
                if linalg::norm(&d) <= tol {
                    continue;
                }
                let off = linalg::dot(&d, &c.slope);
                hs.push(Halfspace::new(d, off));
            }
        }
        Polyhedron::from_halfspaces(self.dim(), hs)
    }

    /// Per-face convexity certificate: across each interior face, the piece of
    /// one incident cell lies below the other cell's piece on that cell.
    pub fn is_convex(&self, tol: f64) -> bool {
        let cells = self.sub.cells();
        for f in self.sub.faces() {
            for &i in &f.cells {
                for &j in &f.cells {
                    if i == j {
                        continue;
                    }
                    let pi = self.piece(i);
                    let pj = self.piece(j);
                    if cells[j]
                        .poly
                        .vertices()
                        .iter()
                        .any(|v| pi.eval(v) > pj.eval(v) + tol * (1.0 + pj.eval(v).abs()))
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Deterministic probe set: domain vertices, cell centroids, face midpoints.
    pub fn probe_points(&self) -> Vec<Point> {
        let mut pts: Vec<Point> = self.domain.vertices().to_vec();
        pts.extend(self.cells().iter().filter_map(|c| c.poly.vertex_centroid()));
        pts.extend(self.faces().iter().filter_map(|f| f.poly.vertex_centroid()));
        pts
    }

    /// Equality up to `tol`: same domain and same values on both probe sets.
    pub fn approx_eq(&self, other: &CellPA, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        match hausdorff_distance(&self.domain, &other.domain) {
            Ok(d) if d <= tol => {}
            _ => return false,
        }
        let mut probes = self.probe_points();
        probes.extend(other.probe_points());
        probes.iter().all(|x| {
            let a = self.eval(x);
            let b = other.eval(x);
            (a.is_infinite() && b.is_infinite()) || (a - b).abs() <= tol * (1.0 + a.abs())
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

fn check_polytope(k: &Polyhedron) -> Result<()> {
    if k.is_empty() {
        return Err(Error::EmptyDomain);
    }
    if !k.is_bounded() {
        return Err(Error::Unbounded);
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct CellJson {
    poly: Polyhedron,
    piece: AffineFunction,
}

#[derive(Serialize, Deserialize)]
struct CellPAJson {
    dim: usize,
    cells: Vec<CellJson>,
}

impl Serialize for CellPA {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CellPAJson {
            dim: self.dim(),
            cells: self
                .cells()
                .iter()
                .enumerate()
                .map(|(i, c)| CellJson {
                    poly: c.poly.clone(),
                    piece: self.piece(i),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CellPA {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CellPAJson::deserialize(d)?;
        from_cells(raw).map_err(serde::de::Error::custom)
    }
}

fn from_cells(raw: CellPAJson) -> Result<CellPA> {
    let mut values = vec![];
    for c in &raw.cells {
        check_polytope(&c.poly)?;
        if c.poly.dim() != raw.dim || c.piece.dim() != raw.dim {
            return Err(Error::DimensionMismatch {
                expected: raw.dim,
                got: c.poly.dim(),
            });
        }
        for v in c.poly.vertices() {
            values.push((v.clone(), c.piece.eval(v)));
        }
    }
    let u = CellPA::from_vertex_values(raw.dim, values)?;
    // the envelope reproduces every supplied piece only if the input was convex
    for c in &raw.cells {
        let mut probes = c.poly.vertices().to_vec();
        probes.extend(c.poly.vertex_centroid());
        for x in &probes {
            let want = c.piece.eval(x);
            if (u.eval(x) - want).abs() > 1e-7 * (1.0 + want.abs()) {
                return Err(Error::NotConvex("cells do not form a convex function".into()));
            }
        }
    }
    Ok(u)
}
