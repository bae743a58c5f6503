use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::measures::{face_lattice, Window};
use crate::convexfn::CellPA;
use crate::error::{Error, Result};
use crate::geometry::minkowski_sum;
use crate::linalg::Point;

/// Samples per independent task; fixes the task decomposition so results do
/// not depend on the number of worker threads.
const CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: usize,
}

struct Piece {
    lo: Point,
    hi: Point,
    // rows (normal, offset) with normal . z <= offset
    rows: Vec<(Point, f64)>,
}

impl Piece {
    fn contains(&self, z: &[f64]) -> bool {
        for t in 0..z.len() {
            if z[t] < self.lo[t] || z[t] > self.hi[t] {
                return false;
            }
        }
        self.rows
            .iter()
            .all(|(a, b)| a.iter().zip(z).map(|(x, y)| x * y).sum::<f64>() <= *b)
    }
}

/// Monte-Carlo estimate of the n-dimensional measure of
/// `P_s = {x + s y : (x, y) in graph(∂u), x in B, y in C}`.
pub fn ps_volume_mc(u: &CellPA, s: f64, w: &Window, samples: usize, seed: u64) -> Result<McEstimate> {
    let n = u.dim();
    if w.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: w.dim(),
        });
    }
    if !(s > 0.0) {
        return Err(Error::InvalidInput(format!("displacement must be positive, got {s}")));
    }
    if samples == 0 {
        return Err(Error::EmptyInput);
    }
    let mut pieces = vec![];
    for gp in face_lattice(u)? {
        let f = gp.face.intersect(&w.b)?;
        let q = gp.subdiff.intersect(&w.c)?;
        if f.is_empty() || q.is_empty() {
            continue;
        }
        let sum = minkowski_sum(&f, &q.scale(s)?)?;
        if sum.affine_dim() < n {
            continue;
        }
        let mut lo = vec![f64::INFINITY; n];
        let mut hi = vec![f64::NEG_INFINITY; n];
        for v in sum.vertices() {
            for t in 0..n {
                lo[t] = lo[t].min(v[t]);
                hi[t] = hi[t].max(v[t]);
            }
        }
        let rows = sum
            .halfspaces()
            .iter()
            .map(|h| (h.normal.clone(), h.offset))
            .collect();
        pieces.push(Piece { lo, hi, rows });
    }
    if pieces.is_empty() {
        return Ok(McEstimate {
            estimate: 0.0,
            stderr: 0.0,
            samples,
        });
    }
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for p in &pieces {
        for t in 0..n {
            lo[t] = lo[t].min(p.lo[t]);
            hi[t] = hi[t].max(p.hi[t]);
        }
    }
    let box_vol: f64 = (0..n).map(|t| hi[t] - lo[t]).product();

    let tasks = samples.div_ceil(CHUNK);
    let hits: Vec<u64> = (0..tasks)
        .into_par_iter()
        .map(|task| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(task as u64);
            let count = CHUNK.min(samples - task * CHUNK);
            let mut z = vec![0.0; n];
            let mut h = 0u64;
            for _ in 0..count {
                for t in 0..n {
                    z[t] = rng.gen_range(lo[t]..hi[t]);
                }
                if pieces.iter().any(|p| p.contains(&z)) {
                    h += 1;
                }
            }
            h
        })
        .collect();
    let total: u64 = hits.iter().sum();
    let p = total as f64 / samples as f64;
    Ok(McEstimate {
        estimate: box_vol * p,
        stderr: box_vol * (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
    })
}
