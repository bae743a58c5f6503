use super::cell_pa::CellPA;
use super::max_affine::MaxAffine;
use crate::error::{Error, Result};
use crate::geometry::{Halfspace, Polyhedron};
use crate::linalg::{self, Point, TAU_GEOM};

/// Outcome of a pointwise minimum, which need not be convex.
#[derive(Debug, Clone, PartialEq)]
pub enum MinResult<T> {
    Convex(T),
    NotConvex,
}

impl<T> MinResult<T> {
    pub fn convex(self) -> Option<T> {
        match self {
            MinResult::Convex(t) => Some(t),
            MinResult::NotConvex => None,
        }
    }
    pub fn is_convex(&self) -> bool {
        matches!(self, MinResult::Convex(_))
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, got: b });
    }
    Ok(())
}

/// Pieces of the common refinement: each pairwise cell intersection split
/// along the hyperplane where the two pieces agree.
fn refinement(f: &CellPA, g: &CellPA) -> Result<Vec<Polyhedron>> {
    let mut out = vec![];
    for (i, cf) in f.cells().iter().enumerate() {
        for (j, cg) in g.cells().iter().enumerate() {
            let r = cf.poly.intersect(&cg.poly)?;
            if r.is_empty() {
                continue;
            }
            let (pf, pg) = (f.piece(i), g.piece(j));
            let normal = linalg::sub(&pf.slope, &pg.slope);
            let below = Halfspace::new(normal.clone(), pg.intercept - pf.intercept);
            let above = Halfspace::new(linalg::scale(&normal, -1.0), pf.intercept - pg.intercept);
            for h in [below, above] {
                let part = r.intersect_halfspace(h)?;
                if !part.is_empty() {
                    out.push(part);
                }
            }
            out.push(r);
        }
    }
    Ok(out)
}

/// Pointwise maximum on `dom f ∩ dom g`.
pub fn pointwise_max(f: &CellPA, g: &CellPA) -> Result<CellPA> {
    check_dims(f.dim(), g.dim())?;
    if f.domain().intersect(g.domain())?.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let mut pts: Vec<Point> = vec![];
    for r in refinement(f, g)? {
        pts.extend(r.vertices().iter().cloned());
    }
    let values: Vec<(Point, f64)> = pts
        .into_iter()
        .filter_map(|x| {
            let v = f.eval(&x).max(g.eval(&x));
            v.is_finite().then_some((x, v))
        })
        .collect();
    if values.is_empty() {
        return Err(Error::EmptyDomain);
    }
    CellPA::from_vertex_values(f.dim(), values)
}

/// Closures of `cell \ dom`, as a disjoint-interior union of polytopes.
fn outside_parts(cell: &Polyhedron, dom: &Polyhedron) -> Result<Vec<Polyhedron>> {
    let mut out = vec![];
    let mut acc = cell.clone();
    for h in dom.halfspaces() {
        let flipped = Halfspace::new(linalg::scale(&h.normal, -1.0), -h.offset);
        let part = acc.intersect_halfspace(flipped)?;
        if !part.is_empty() {
            out.push(part);
        }
        acc = acc.intersect_halfspace(h.clone())?;
        if acc.is_empty() {
            break;
        }
    }
    Ok(out)
}

/// Pointwise minimum on `dom f ∪ dom g`, returned only when it is convex.
pub fn guarded_min(f: &CellPA, g: &CellPA) -> Result<MinResult<CellPA>> {
    check_dims(f.dim(), g.dim())?;
    let dim = f.dim();
    let min_at = |x: &[f64]| f.eval(x).min(g.eval(x));

    let mut regions = refinement(f, g)?;
    for c in f.cells() {
        regions.extend(outside_parts(&c.poly, g.domain())?);
    }
    for c in g.cells() {
        regions.extend(outside_parts(&c.poly, f.domain())?);
    }
    let mut pts: Vec<Point> = f.vertices().into_iter().map(|(x, _)| x).collect();
    pts.extend(g.vertices().into_iter().map(|(x, _)| x));
    for r in &regions {
        pts.extend(r.vertices().iter().cloned());
    }
    let values: Vec<(Point, f64)> = pts
        .iter()
        .filter_map(|x| {
            let v = min_at(x);
            v.is_finite().then(|| (x.clone(), v))
        })
        .collect();
    let env = CellPA::from_vertex_values(dim, values)?;

    // the union of the domains must be convex
    let d = env.domain().affine_dim();
    let meas = |p: &Polyhedron| p.volume_k(d);
    let union = meas(f.domain())? + meas(g.domain())? - meas(&f.domain().intersect(g.domain())?)?;
    let hull = meas(env.domain())?;
    if !union.is_finite() || (hull - union).abs() > 1e-9 * (1.0 + hull) {
        return Ok(MinResult::NotConvex);
    }

    // the envelope lies below the minimum; equality at every vertex and at an
    // interior point of every region where the minimum is affine forces equality
    let scale = 1.0
        + env
            .vertices()
            .iter()
            .map(|(_, v)| v.abs())
            .fold(0.0, f64::max);
    let tol = 1e-9 * scale;
    let mut probes = pts;
    for r in &regions {
        if r.volume_k(d).map(|v| v > TAU_GEOM).unwrap_or(false) {
            probes.extend(r.vertex_centroid());
        }
    }
    for x in &probes {
        let m = min_at(x);
        if m.is_finite() && (env.eval(x) - m).abs() > tol {
            return Ok(MinResult::NotConvex);
        }
    }
    Ok(MinResult::Convex(env))
}

/// Pointwise minimum of two finite PA functions, returned only when convex.
pub fn guarded_min_max_affine(f: &MaxAffine, g: &MaxAffine) -> Result<MinResult<MaxAffine>> {
    check_dims(f.dim(), g.dim())?;
    let dim = f.dim();
    if dim == 0 || dim > 2 {
        return Err(Error::DimensionUnsupported(dim));
    }
    // a box meeting every face of the arrangement: all crossing points and,
    // for each equality line, its point closest to the origin
    let pieces: Vec<_> = f.pieces().iter().chain(g.pieces()).collect();
    let mut marks: Vec<Point> = vec![vec![0.0; dim]];
    for i in 0..pieces.len() {
        for j in (i + 1)..pieces.len() {
            let a = linalg::sub(&pieces[i].slope, &pieces[j].slope);
            let b = pieces[j].intercept - pieces[i].intercept;
            let n2 = linalg::dot(&a, &a);
            if n2 <= 1e-24 {
                continue;
            }
            marks.push(linalg::scale(&a, b / n2));
            if dim == 2 {
                for k in (j + 1)..pieces.len() {
                    let c = linalg::sub(&pieces[i].slope, &pieces[k].slope);
                    let e = pieces[k].intercept - pieces[i].intercept;
                    let det = a[0] * c[1] - a[1] * c[0];
                    if det.abs() <= 1e-12 {
                        continue;
                    }
                    marks.push(vec![(b * c[1] - a[1] * e) / det, (a[0] * e - b * c[0]) / det]);
                }
            }
        }
    }
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for m in &marks {
        for t in 0..dim {
            lo[t] = lo[t].min(m[t]);
            hi[t] = hi[t].max(m[t]);
        }
    }
    for t in 0..dim {
        let pad = 1.0 + 0.1 * (hi[t] - lo[t]);
        lo[t] -= pad;
        hi[t] += pad;
    }
    let bx = Polyhedron::cuboid(&lo, &hi)?;
    let fr = CellPA::restrict(f, &bx)?;
    let gr = CellPA::restrict(g, &bx)?;
    match guarded_min(&fr, &gr)? {
        MinResult::NotConvex => Ok(MinResult::NotConvex),
        MinResult::Convex(h) => Ok(MinResult::Convex(MaxAffine::new(dim, h.pieces())?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convexfn::AffineFunction;

    fn square(lo: [f64; 2], hi: [f64; 2]) -> Polyhedron {
        Polyhedron::cuboid(&lo, &hi).unwrap()
    }

    #[test]
    fn max_with_itself_is_identity() {
        let u = CellPA::from_vertex_values(1, vec![(vec![0.0], 1.0), (vec![1.0], 0.0), (vec![3.0], 2.0)])
            .unwrap();
        assert!(pointwise_max(&u, &u).unwrap().approx_eq(&u, 1e-12));
        assert!(guarded_min(&u, &u).unwrap().convex().unwrap().approx_eq(&u, 1e-12));
    }

    #[test]
    fn max_and_min_of_linear_on_bodies() {
        let y = [0.7, -0.2];
        let k = square([0.0, 0.0], [2.0, 1.0]);
        let l = square([1.0, 0.0], [3.0, 1.0]);
        let f = CellPA::linear_on(&y, &k).unwrap();
        let g = CellPA::linear_on(&y, &l).unwrap();
        let mx = pointwise_max(&f, &g).unwrap();
        let want = CellPA::linear_on(&y, &k.intersect(&l).unwrap()).unwrap();
        assert!(mx.approx_eq(&want, 1e-12));
        let mn = guarded_min(&f, &g).unwrap().convex().unwrap();
        let want = CellPA::linear_on(&y, &square([0.0, 0.0], [3.0, 1.0])).unwrap();
        assert!(mn.approx_eq(&want, 1e-12));
    }

    #[test]
    fn min_with_nonconvex_union() {
        let f = CellPA::indicator(&square([0.0, 0.0], [1.0, 1.0])).unwrap();
        let g = CellPA::indicator(&square([0.5, 0.5], [2.0, 2.0])).unwrap();
        assert_eq!(guarded_min(&f, &g).unwrap(), MinResult::NotConvex);
    }

    #[test]
    fn min_with_concave_kink_inside() {
        let k = square([-1.0, -1.0], [1.0, 1.0]);
        let f = CellPA::linear_on(&[1.0, 0.0], &k).unwrap();
        let g = CellPA::linear_on(&[-1.0, 0.0], &k).unwrap();
        assert_eq!(guarded_min(&f, &g).unwrap(), MinResult::NotConvex);
        let h = pointwise_max(&f, &g).unwrap();
        assert_eq!(h.cells().len(), 2);
    }

    #[test]
    fn disjoint_max_is_an_error() {
        let f = CellPA::indicator(&square([0.0, 0.0], [1.0, 1.0])).unwrap();
        let g = CellPA::indicator(&square([2.0, 2.0], [3.0, 3.0])).unwrap();
        assert_eq!(pointwise_max(&f, &g), Err(Error::EmptyDomain));
    }

    #[test]
    fn max_affine_min() {
        let x = MaxAffine::linear(vec![1.0]);
        let mx = MaxAffine::linear(vec![-1.0]);
        assert_eq!(guarded_min_max_affine(&x, &mx).unwrap(), MinResult::NotConvex);
        // min(max(x,0), max(-x,0)) = 0
        let a = MaxAffine::new(1, vec![AffineFunction::linear(vec![1.0]), AffineFunction::constant(1, 0.0)])
            .unwrap();
        let b = MaxAffine::new(1, vec![AffineFunction::linear(vec![-1.0]), AffineFunction::constant(1, 0.0)])
            .unwrap();
        let m = guarded_min_max_affine(&a, &b).unwrap().convex().unwrap();
        assert!(m.approx_eq(&MaxAffine::new(1, vec![AffineFunction::constant(1, 0.0)]).unwrap(), 1e-12));
        // one dominates
        let c = a.translate(&[0.0], 1.0);
        assert!(guarded_min_max_affine(&a, &c).unwrap().convex().unwrap().approx_eq(&a, 1e-12));
    }
}
