use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::convexfn::{guarded_min, pointwise_max, AffineFunction, CellPA, Conjugate, MaxAffine};
use crate::error::{Error, Result};
use crate::geometry::Polyhedron;
use crate::linalg::Point;

/// Generator for `seed`; every random object in the harness is drawn from one.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed of case `case` of a suite run with `seed`: the first word of stream `case`.
pub fn case_seed(seed: u64, case: usize) -> u64 {
    let mut r = rng(seed);
    r.set_stream(case as u64);
    r.next_u64()
}

fn in_ball(r: &mut ChaCha8Rng, n: usize, radius: f64) -> Point {
    loop {
        let p: Point = (0..n).map(|_| r.gen_range(-radius..=radius)).collect();
        if p.iter().map(|x| x * x).sum::<f64>() <= radius * radius {
            return p;
        }
    }
}

/// `max_i (<a_i, x> + b_i)` with `m` slopes uniform in the `radius`-ball and
/// intercepts uniform in `[-spread, spread]`.
pub fn gen_max_affine(seed: u64, n: usize, m: usize, radius: f64, spread: f64) -> Result<MaxAffine> {
    gen_max_affine_with(&mut rng(seed), n, m, radius, spread)
}

pub fn gen_max_affine_with(r: &mut ChaCha8Rng, n: usize, m: usize, radius: f64, spread: f64) -> Result<MaxAffine> {
    if m == 0 {
        return Err(Error::EmptyInput);
    }
    let pieces = (0..m)
        .map(|_| {
            let a = in_ball(r, n, radius);
            let b = if spread > 0.0 { r.gen_range(-spread..=spread) } else { 0.0 };
            AffineFunction::new(a, b)
        })
        .collect::<Result<Vec<_>>>()?;
    MaxAffine::new(n, pieces)
}

/// Conjugate of a random max-affine function: a random convex PA function
/// whose domain is the hull of `m` points in the `radius`-ball. Draws are
/// repeated until the domain is full-dimensional.
pub fn gen_cell_pa(seed: u64, n: usize, m: usize, radius: f64, spread: f64) -> Result<CellPA> {
    gen_cell_pa_with(&mut rng(seed), n, m, radius, spread)
}

pub fn gen_cell_pa_with(r: &mut ChaCha8Rng, n: usize, m: usize, radius: f64, spread: f64) -> Result<CellPA> {
    if m < n + 1 {
        return Err(Error::InvalidInput(format!("{m} pieces cannot span dimension {n}")));
    }
    for _ in 0..100 {
        let u = gen_max_affine_with(r, n, m, radius, spread)?.conjugate()?;
        if u.domain().affine_dim() == n && u.domain().volume()? > 1e-3 * radius.powi(n as i32) {
            return Ok(u);
        }
    }
    Err(Error::RetryExhausted("random domains stayed degenerate".into()))
}

/// How a lattice pair was built: `u = w + I_P`, `v = w + I_Q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeConstruction {
    pub p: Polyhedron,
    pub q: Polyhedron,
    pub w: MaxAffine,
}

/// Two functions whose maximum and minimum are both convex.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePair {
    pub u: CellPA,
    pub v: CellPA,
    pub max: CellPA,
    pub min: CellPA,
    pub construction: LatticeConstruction,
}

impl LatticePair {
    pub fn from_construction(c: LatticeConstruction) -> Result<Self> {
        let u = CellPA::restrict(&c.w, &c.p)?;
        let v = CellPA::restrict(&c.w, &c.q)?;
        let max = pointwise_max(&u, &v)?;
        let min = guarded_min(&u, &v)?
            .convex()
            .ok_or_else(|| Error::NotConvex("minimum of a lattice pair".into()))?;
        Ok(Self { u, v, max, min, construction: c })
    }

    /// The conjugate quadruple `(u*, v*, (u ∨ v)*, (u ∧ v)*)`; the conjugate of
    /// the maximum is the minimum of the conjugates and vice versa.
    pub fn conjugates(&self) -> Result<[MaxAffine; 4]> {
        Ok([
            self.u.conjugate()?,
            self.v.conjugate()?,
            self.max.conjugate()?,
            self.min.conjugate()?,
        ])
    }
}

/// Two overlapping intervals along `axis` with shared extents elsewhere, so
/// the union is a box.
fn overlapping_boxes(r: &mut ChaCha8Rng, n: usize) -> (Polyhedron, Polyhedron) {
    let axis = r.gen_range(0..n);
    let mut lo: Point = (0..n).map(|_| r.gen_range(-1.0..0.0)).collect();
    let mut hi: Point = lo.iter().map(|l| l + r.gen_range(0.5..1.5)).collect();
    let mut lo2 = lo.clone();
    let mut hi2 = hi.clone();
    match r.gen_range(0..10) {
        // identical boxes
        0 => {}
        // nested along the axis
        1 => {
            let len = hi[axis] - lo[axis];
            lo2[axis] = lo[axis] + r.gen_range(0.0..0.4) * len;
            hi2[axis] = hi[axis] - r.gen_range(0.0..0.4) * len;
        }
        _ => {
            let start = r.gen_range(lo[axis]..hi[axis]);
            lo2[axis] = start;
            hi2[axis] = hi[axis] + r.gen_range(0.2..1.2);
            if r.gen_bool(0.5) {
                std::mem::swap(&mut lo, &mut lo2);
                std::mem::swap(&mut hi, &mut hi2);
            }
        }
    }
    (
        Polyhedron::cuboid(&lo, &hi).expect("box bounds are ordered"),
        Polyhedron::cuboid(&lo2, &hi2).expect("box bounds are ordered"),
    )
}

/// `u = w + I_P`, `v = w + I_Q` with boxes `P, Q` whose union is convex and a
/// random max-affine `w`.
pub fn gen_lattice_pair(seed: u64, n: usize) -> Result<LatticePair> {
    let mut r = rng(seed);
    for _ in 0..100 {
        let (p, q) = overlapping_boxes(&mut r, n);
        let m = r.gen_range(1..6);
        let w = gen_max_affine_with(&mut r, n, m, 2.0, 1.0)?;
        if let Ok(pair) = LatticePair::from_construction(LatticeConstruction { p, q, w }) {
            return Ok(pair);
        }
    }
    Err(Error::RetryExhausted("lattice pair construction".into()))
}

/// `m` functions `w + I_{P_j}` whose boxes share a common point and differ
/// only along one axis, so every union is a box.
pub fn gen_inclusion_family(seed: u64, n: usize, m: usize) -> Result<(Vec<CellPA>, LatticeConstruction)> {
    let mut r = rng(seed);
    let axis = r.gen_range(0..n);
    let base_lo: Point = (0..n).map(|_| r.gen_range(-1.0..0.0)).collect();
    let base_hi: Point = base_lo.iter().map(|l| l + r.gen_range(0.5..1.5)).collect();
    let c = r.gen_range(base_lo[axis]..base_hi[axis]);
    let wm = r.gen_range(1..6);
    let w = gen_max_affine_with(&mut r, n, wm, 2.0, 1.0)?;
    let mut fs = Vec::with_capacity(m);
    let mut boxes = Vec::with_capacity(m);
    for _ in 0..m {
        let mut lo = base_lo.clone();
        let mut hi = base_hi.clone();
        lo[axis] = c - r.gen_range(0.05..1.5);
        hi[axis] = c + r.gen_range(0.05..1.5);
        let b = Polyhedron::cuboid(&lo, &hi)?;
        fs.push(CellPA::restrict(&w, &b)?);
        boxes.push(b);
    }
    let p = boxes[0].clone();
    let q = boxes[m - 1].clone();
    Ok((fs, LatticeConstruction { p, q, w }))
}
