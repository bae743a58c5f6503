use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::hull::hull_2d;
use super::polyhedron::{polygon_area, Polyhedron};
use crate::error::{Error, Result};
use crate::linalg::{self, cross2, dot, Point, TAU_GEOM, TAU_PRUNE};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftedPoint {
    pub site: Point,
    pub height: f64,
}

/// Sites with heights; coincident sites are merged keeping the lower height.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftedPointSet {
    dim: usize,
    points: Vec<LiftedPoint>,
}

impl LiftedPointSet {
    pub fn new(dim: usize, raw: Vec<(Point, f64)>) -> Result<Self> {
        let mut points: Vec<LiftedPoint> = Vec::with_capacity(raw.len());
        for (site, height) in raw {
            if site.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: site.len(),
                });
            }
            if !height.is_finite() || site.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput("non-finite lifted point".into()));
            }
            match points
                .iter_mut()
                .find(|p| linalg::dist(&p.site, &site) <= TAU_GEOM)
            {
                Some(p) => p.height = p.height.min(height),
                None => points.push(LiftedPoint { site, height }),
            }
        }
        Ok(Self { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn points(&self) -> &[LiftedPoint] {
        &self.points
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A maximal cell of a regular subdivision together with the affine function
/// whose graph is the corresponding lower facet.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub poly: Polyhedron,
    /// Every lifted point lying on the facet.
    pub generators: Vec<usize>,
    /// Lifted points that are vertices of the cell, in hull order.
    pub vertex_ids: Vec<usize>,
    pub slope: Point,
    pub intercept: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub poly: Polyhedron,
    pub cells: Vec<usize>,
    pub vertex_ids: Vec<usize>,
}

/// Regular subdivision of the convex hull of the sites induced by the lower
/// hull of the lifted points.
#[derive(Debug, Clone, PartialEq)]
pub struct Subdivision {
    dim: usize,
    points: LiftedPointSet,
    cells: Vec<Cell>,
    faces: Vec<Face>,
}

impl Subdivision {
    /// Replaces the affine piece of a cell, e.g. by the exact function the
    /// heights were sampled from.
    pub(crate) fn set_piece(&mut self, cell: usize, slope: Point, intercept: f64) {
        self.cells[cell].slope = slope;
        self.cells[cell].intercept = intercept;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn points(&self) -> &LiftedPointSet {
        &self.points
    }
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Indices of lifted points that are vertices of some cell.
    pub fn vertex_ids(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .cells
            .iter()
            .flat_map(|c| c.vertex_ids.iter().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// A subdivision consisting of a single point.
    pub(crate) fn single_point(dim: usize, site: Point, height: f64) -> Self {
        let points = LiftedPointSet {
            dim,
            points: vec![LiftedPoint {
                site: site.clone(),
                height,
            }],
        };
        Self {
            dim,
            points,
            cells: vec![Cell {
                poly: Polyhedron::point(site),
                generators: vec![0],
                vertex_ids: vec![0],
                slope: vec![0.0; dim],
                intercept: height,
            }],
            faces: vec![],
        }
    }
}

fn height_tol(points: &[LiftedPoint]) -> f64 {
    let m = points.iter().map(|p| p.height.abs()).fold(0.0, f64::max);
    TAU_PRUNE * (1.0 + m)
}

/// Regular subdivision induced by the lower convex hull of the lifted points.
/// Ties keep the coarse cell: all points on one supporting hyperplane form a
/// single cell.
pub fn lower_hull(pts: &LiftedPointSet) -> Result<Subdivision> {
    let dim = pts.dim();
    if dim >= 3 || dim == 0 {
        return Err(Error::DimensionUnsupported(dim));
    }
    if pts.len() < 2 {
        return Err(Error::DegenerateInput(
            "lower hull needs at least two distinct sites".into(),
        ));
    }
    let points = pts.points();
    let sites: Vec<Point> = points.iter().map(|p| p.site.clone()).collect();
    if dim == 1 {
        let ts: Vec<f64> = sites.iter().map(|s| s[0]).collect();
        return Ok(along_line(pts.clone(), &ts, &sites[0], &[1.0]));
    }
    let hull = hull_2d(&sites);
    if hull.len() == 2 {
        let o = sites[hull[0]].clone();
        let d = linalg::sub(&sites[hull[1]], &o);
        let l = linalg::norm(&d);
        let d: Point = d.iter().map(|x| x / l).collect();
        let ts: Vec<f64> = sites.iter().map(|s| dot(&linalg::sub(s, &o), &d)).collect();
        return Ok(along_line(pts.clone(), &ts, &o, &d));
    }
    Ok(lower_hull_2d(pts.clone(), &sites))
}

/// 1-d lower hull along the line `origin + t * dir`.
fn along_line(pts: LiftedPointSet, ts: &[f64], origin: &[f64], dir: &[f64]) -> Subdivision {
    let dim = pts.dim();
    let points = pts.points();
    let tol = height_tol(points);
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| ts[a].total_cmp(&ts[b]));
    let h = |i: usize| points[i].height;

    let mut chain: Vec<usize> = vec![];
    for &i in &order {
        while chain.len() >= 2 {
            let a = chain[chain.len() - 2];
            let b = chain[chain.len() - 1];
            let interp = h(a) + (h(i) - h(a)) * (ts[b] - ts[a]) / (ts[i] - ts[a]);
            if h(b) >= interp - tol {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(i);
    }

    let mut cells = vec![];
    for w in chain.windows(2) {
        let (a, b) = (w[0], w[1]);
        let dt = ts[b] - ts[a];
        let rate = (h(b) - h(a)) / dt;
        let generators: Vec<usize> = order
            .iter()
            .copied()
            .filter(|&i| {
                ts[i] >= ts[a] - TAU_GEOM
                    && ts[i] <= ts[b] + TAU_GEOM
                    && (h(i) - (h(a) + rate * (ts[i] - ts[a]))).abs() <= tol
            })
            .collect();
        // affine function along the line, constant across it
        let slope: Point = dir.iter().map(|d| rate * d).collect();
        let intercept = h(a) - dot(&slope, &points[a].site);
        let _ = origin;
        cells.push(Cell {
            poly: Polyhedron::from_hull_vertices(
                dim,
                vec![points[a].site.clone(), points[b].site.clone()],
            ),
            generators,
            vertex_ids: vec![a, b],
            slope,
            intercept,
        });
    }
    let faces = faces_from_cells(dim, points, &cells);
    Subdivision {
        dim,
        points: pts,
        cells,
        faces,
    }
}

fn plane_through(a: &LiftedPoint, b: &LiftedPoint, c: &LiftedPoint) -> (Point, f64) {
    let u = linalg::sub(&b.site, &a.site);
    let v = linalg::sub(&c.site, &a.site);
    let du = b.height - a.height;
    let dv = c.height - a.height;
    let det = u[0] * v[1] - u[1] * v[0];
    let gx = (du * v[1] - dv * u[1]) / det;
    let gy = (u[0] * dv - v[0] * du) / det;
    let g = vec![gx, gy];
    let c0 = a.height - dot(&g, &a.site);
    (g, c0)
}

fn lower_hull_2d(pts: LiftedPointSet, sites: &[Point]) -> Subdivision {
    let points = pts.points();
    let n = points.len();
    let tol = height_tol(points);
    let scale = sites
        .iter()
        .map(|s| s[0].abs().max(s[1].abs()))
        .fold(1.0_f64, f64::max);
    let area_tol = TAU_GEOM * scale * scale;

    let mut member: Vec<Vec<usize>> = vec![vec![]; n];
    let mut facets: Vec<(Vec<usize>, Point, f64)> = vec![];
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                if cross2(&sites[i], &sites[j], &sites[k]).abs() <= area_tol {
                    continue;
                }
                if member[i]
                    .iter()
                    .any(|f| member[j].contains(f) && member[k].contains(f))
                {
                    continue;
                }
                let (g, c0) = plane_through(&points[i], &points[j], &points[k]);
                let mut on = vec![];
                let mut ok = true;
                for (l, p) in points.iter().enumerate() {
                    let r = p.height - (dot(&g, &p.site) + c0);
                    if r < -tol {
                        ok = false;
                        break;
                    }
                    if r <= tol {
                        on.push(l);
                    }
                }
                if !ok {
                    continue;
                }
                let id = facets.len();
                for &l in &on {
                    member[l].push(id);
                }
                facets.push((on, g, c0));
            }
        }
    }

    let mut cells = Vec::with_capacity(facets.len());
    for (on, g, c0) in facets {
        let local: Vec<Point> = on.iter().map(|&l| sites[l].clone()).collect();
        let hull = hull_2d(&local);
        let vertex_ids: Vec<usize> = hull.iter().map(|&h| on[h]).collect();
        let poly =
            Polyhedron::from_hull_vertices(2, vertex_ids.iter().map(|&v| sites[v].clone()).collect());
        cells.push(Cell {
            poly,
            generators: on,
            vertex_ids,
            slope: g,
            intercept: c0,
        });
    }

    debug_assert!({
        let total: f64 = cells.iter().map(|c| polygon_area(c.poly.vertices())).sum();
        let h = hull_2d(sites);
        let hv: Vec<Point> = h.iter().map(|&i| sites[i].clone()).collect();
        let area = polygon_area(&hv);
        (total - area).abs() <= 1e-7 * (1.0 + area)
    }, "cells do not cover the hull");

    let faces = faces_from_cells(2, points, &cells);
    Subdivision {
        dim: 2,
        points: pts,
        cells,
        faces,
    }
}

fn faces_from_cells(dim: usize, points: &[LiftedPoint], cells: &[Cell]) -> Vec<Face> {
    let mut faces = vec![];
    let full = cells.iter().any(|c| c.vertex_ids.len() >= 3);
    if full {
        let mut edges: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (ci, c) in cells.iter().enumerate() {
            let k = c.vertex_ids.len();
            for e in 0..k {
                let a = c.vertex_ids[e];
                let b = c.vertex_ids[(e + 1) % k];
                edges.entry((a.min(b), a.max(b))).or_default().push(ci);
            }
        }
        for ((a, b), inc) in edges {
            faces.push(Face {
                poly: Polyhedron::from_points(
                    dim,
                    &[points[a].site.clone(), points[b].site.clone()],
                )
                .expect("segment"),
                cells: inc,
                vertex_ids: vec![a, b],
            });
        }
    }
    let mut verts: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (ci, c) in cells.iter().enumerate() {
        for &v in &c.vertex_ids {
            verts.entry(v).or_default().push(ci);
        }
    }
    for (v, inc) in verts {
        faces.push(Face {
            poly: Polyhedron::point(points[v].site.clone()),
            cells: inc,
            vertex_ids: vec![v],
        });
    }
    faces
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(dim: usize, raw: &[(&[f64], f64)]) -> LiftedPointSet {
        LiftedPointSet::new(dim, raw.iter().map(|(s, h)| (s.to_vec(), *h)).collect()).unwrap()
    }

    #[test]
    fn two_point_segment() {
        let s = lower_hull(&set(1, &[(&[0.0], 0.0), (&[1.0], 0.0)])).unwrap();
        assert_eq!(s.cells().len(), 1);
        assert_eq!(s.cells()[0].generators, vec![0, 1]);
        assert_eq!(s.cells()[0].poly.vertices(), &[vec![0.0], vec![1.0]]);
    }

    #[test]
    fn three_points_on_line_with_dip() {
        let s = lower_hull(&set(1, &[(&[0.0], 0.0), (&[1.0], -1.0), (&[2.0], 0.0)])).unwrap();
        assert_eq!(s.cells().len(), 2);
        assert_eq!(s.cells()[0].poly.vertices(), &[vec![0.0], vec![1.0]]);
        assert_eq!(s.cells()[1].poly.vertices(), &[vec![1.0], vec![2.0]]);
        assert_eq!(s.cells()[0].slope, vec![-1.0]);
        assert_eq!(s.cells()[1].slope, vec![1.0]);
    }

    #[test]
    fn collinear_tie_keeps_coarse_cell() {
        let s = lower_hull(&set(1, &[(&[0.0], 0.0), (&[1.0], 1.0), (&[2.0], 2.0)])).unwrap();
        assert_eq!(s.cells().len(), 1);
        assert_eq!(s.cells()[0].generators, vec![0, 1, 2]);
    }

    /// Brute force over the two triangulations of the unit square: the lower
    /// hull picks the one whose triangles' planes lie below the fourth point.
    #[test]
    fn square_with_raised_corner_splits_along_antidiagonal() {
        let raw: [(&[f64], f64); 4] = [
            (&[0.0, 0.0], 0.0),
            (&[1.0, 0.0], 0.0),
            (&[0.0, 1.0], 0.0),
            (&[1.0, 1.0], 1.0),
        ];
        let pts = set(2, &raw);
        // oracle: triangulation A uses diagonal (0,0)-(1,1), B uses (1,0)-(0,1)
        let plane_ok = |tri: [usize; 3], other: usize| {
            let p = pts.points();
            let (g, c) = plane_through(&p[tri[0]], &p[tri[1]], &p[tri[2]]);
            p[other].height >= dot(&g, &p[other].site) + c - 1e-12
        };
        let a_ok = plane_ok([0, 1, 3], 2) && plane_ok([0, 2, 3], 1);
        let b_ok = plane_ok([0, 1, 2], 3) && plane_ok([1, 2, 3], 0);
        assert!(!a_ok && b_ok);

        let s = lower_hull(&pts).unwrap();
        assert_eq!(s.cells().len(), 2);
        let mut gens: Vec<Vec<usize>> = s
            .cells()
            .iter()
            .map(|c| {
                let mut g = c.generators.clone();
                g.sort();
                g
            })
            .collect();
        gens.sort();
        assert_eq!(gens, vec![vec![0, 1, 2], vec![1, 2, 3]]);
        // one interior edge shared by both cells
        let shared: Vec<&Face> = s.faces().iter().filter(|f| f.cells.len() == 2 && f.vertex_ids.len() == 2).collect();
        assert_eq!(shared.len(), 1);
        let mut v = shared[0].vertex_ids.clone();
        v.sort();
        assert_eq!(v, vec![1, 2]);
    }

    #[test]
    fn flat_square_is_a_single_coarse_cell() {
        let s = lower_hull(&set(
            2,
            &[
                (&[0.0, 0.0], 0.0),
                (&[1.0, 0.0], 0.0),
                (&[0.0, 1.0], 0.0),
                (&[1.0, 1.0], 0.0),
                (&[0.5, 0.5], 0.0),
            ],
        ))
        .unwrap();
        assert_eq!(s.cells().len(), 1);
        assert_eq!(s.cells()[0].generators.len(), 5);
        assert_eq!(s.cells()[0].vertex_ids.len(), 4);
        // 4 edges + 4 vertices
        assert_eq!(s.faces().len(), 8);
    }

    #[test]
    fn errors() {
        let one = set(1, &[(&[0.0], 0.0), (&[0.0], 1.0)]);
        assert_eq!(one.len(), 1);
        assert_eq!(one.points()[0].height, 0.0);
        assert!(matches!(lower_hull(&one), Err(Error::DegenerateInput(_))));
        let three = LiftedPointSet::new(3, vec![(vec![0.0; 3], 0.0), (vec![1.0; 3], 0.0)]).unwrap();
        assert_eq!(lower_hull(&three), Err(Error::DimensionUnsupported(3)));
    }

    #[test]
    fn collinear_sites_in_the_plane_reduce_to_segments() {
        let s = lower_hull(&set(
            2,
            &[(&[0.0, 0.0], 0.0), (&[1.0, 1.0], -1.0), (&[2.0, 2.0], 0.0)],
        ))
        .unwrap();
        assert_eq!(s.cells().len(), 2);
        assert!(s.cells().iter().all(|c| c.poly.affine_dim() == 1));
    }
}
