use crate::error::{Error, Result};
use crate::linalg::{binomial, det, elementary_symmetric, factorial, sym_eigenvalues, Point};
use crate::valuations::{Slot, TestFunction, TestFunction3};

pub type Matrix = Vec<Vec<f64>>;

/// Uniform cell-centred grid: nodes `lo + (i + 1/2) h`, `i = 0..counts`, so
/// the nodes are midpoints of cells tiling `[lo, lo + counts * h]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub lo: Point,
    pub h: f64,
    pub counts: Vec<usize>,
}

impl Grid {
    pub fn new(lo: &[f64], hi: &[f64], h: f64) -> Result<Self> {
        let dim = lo.len();
        if dim == 0 || dim > 3 {
            return Err(Error::DimensionUnsupported(dim));
        }
        if hi.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: hi.len() });
        }
        if !(h > 0.0) {
            return Err(Error::InvalidInput(format!("grid step must be positive, got {h}")));
        }
        let mut counts = Vec::with_capacity(dim);
        for t in 0..dim {
            let m = (hi[t] - lo[t]) / h;
            let r = m.round();
            if r < 1.0 || (m - r).abs() > 1e-6 {
                return Err(Error::InvalidInput("box side must be a positive multiple of the step".into()));
            }
            counts.push(r as usize);
        }
        Ok(Self { lo: lo.to_vec(), h, counts })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn hi(&self) -> Point {
        self.lo
            .iter()
            .zip(&self.counts)
            .map(|(l, &c)| l + c as f64 * self.h)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Multi-index of the `k`-th node, first axis fastest.
    fn multi(&self, mut k: usize) -> Vec<usize> {
        let mut idx = Vec::with_capacity(self.dim());
        for &c in &self.counts {
            idx.push(k % c);
            k /= c;
        }
        idx
    }

    /// Node position; indices may run one step into the halo.
    fn point(&self, idx: &[isize]) -> Point {
        idx.iter()
            .zip(&self.lo)
            .map(|(&i, l)| l + (i as f64 + 0.5) * self.h)
            .collect()
    }

    pub fn node(&self, k: usize) -> Point {
        let idx: Vec<isize> = self.multi(k).into_iter().map(|i| i as isize).collect();
        self.point(&idx)
    }

    pub fn cell_volume(&self) -> f64 {
        self.h.powi(self.dim() as i32)
    }

    fn covers(&self, lo: &[f64], hi: &[f64]) -> bool {
        let top = self.hi();
        let tol = 1e-9 * (1.0 + self.h);
        (0..self.dim()).all(|t| lo[t] >= self.lo[t] - tol && hi[t] <= top[t] + tol)
    }
}

/// Values of a function at the grid nodes and one halo layer, with
/// central-difference derivatives at the nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothGridFunction {
    grid: Grid,
    // halo-padded, (counts + 2) per axis, first axis fastest
    values: Vec<f64>,
}

/// Value, gradient and Hessian at one node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeData {
    pub x: Point,
    pub value: f64,
    pub gradient: Point,
    pub hessian: Matrix,
}

impl SmoothGridFunction {
    pub fn sample(grid: Grid, f: impl Fn(&[f64]) -> f64) -> Self {
        let padded: Vec<usize> = grid.counts.iter().map(|c| c + 2).collect();
        let total: usize = padded.iter().product();
        let mut values = Vec::with_capacity(total);
        for mut k in 0..total {
            let mut idx = Vec::with_capacity(padded.len());
            for &c in &padded {
                idx.push((k % c) as isize - 1);
                k /= c;
            }
            values.push(f(&grid.point(&idx)));
        }
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    /// `x -> lambda v(x)`.
    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| lambda * v).collect(),
        }
    }

    /// `sum_j w_j f_j` for functions sampled on a common grid.
    pub fn combine(weights: &[f64], fs: &[SmoothGridFunction]) -> Result<Self> {
        if weights.len() != fs.len() || fs.is_empty() {
            return Err(Error::ArityMismatch(format!("{} weights for {} functions", weights.len(), fs.len())));
        }
        if fs.iter().any(|f| f.grid != fs[0].grid) {
            return Err(Error::InvalidInput("functions live on different grids".into()));
        }
        let mut values = vec![0.0; fs[0].values.len()];
        for (w, f) in weights.iter().zip(fs) {
            for (acc, v) in values.iter_mut().zip(&f.values) {
                *acc += w * v;
            }
        }
        Ok(Self { grid: fs[0].grid.clone(), values })
    }

    fn at(&self, idx: &[isize]) -> f64 {
        let mut k = 0usize;
        let mut stride = 1usize;
        for (t, &i) in idx.iter().enumerate() {
            k += (i + 1) as usize * stride;
            stride *= self.grid.counts[t] + 2;
        }
        self.values[k]
    }

    pub fn node(&self, k: usize) -> NodeData {
        let n = self.dim();
        let h = self.grid.h;
        let base: Vec<isize> = self.grid.multi(k).into_iter().map(|i| i as isize).collect();
        let shifted = |moves: &[(usize, isize)]| {
            let mut idx = base.clone();
            for &(t, d) in moves {
                idx[t] += d;
            }
            self.at(&idx)
        };
        let v0 = self.at(&base);
        let mut gradient = vec![0.0; n];
        let mut hessian = vec![vec![0.0; n]; n];
        for a in 0..n {
            let (p, m) = (shifted(&[(a, 1)]), shifted(&[(a, -1)]));
            gradient[a] = (p - m) / (2.0 * h);
            hessian[a][a] = (p - 2.0 * v0 + m) / (h * h);
            for b in 0..a {
                let d = (shifted(&[(a, 1), (b, 1)]) - shifted(&[(a, 1), (b, -1)])
                    - shifted(&[(a, -1), (b, 1)])
                    + shifted(&[(a, -1), (b, -1)]))
                    / (4.0 * h * h);
                hessian[a][b] = d;
                hessian[b][a] = d;
            }
        }
        NodeData {
            x: self.grid.node(k),
            value: v0,
            gradient,
            hessian,
        }
    }

    /// Nodes where the stencil Hessian has an eigenvalue below `-τ_psd`,
    /// `τ_psd = 1e-6 max |v|`.
    pub fn psd_violations(&self) -> usize {
        let tau = 1e-6 * self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let bad = (0..self.grid.len())
            .filter(|&k| {
                let ev = sym_eigenvalues(&self.node(k).hessian);
                ev.iter().any(|&e| e < -tau)
            })
            .count();
        if bad > 0 {
            log::warn!("stencil Hessian is not positive semidefinite at {bad} nodes");
        }
        bad
    }

    fn integrate(&self, integrand: impl Fn(&NodeData) -> f64) -> f64 {
        let w = self.grid.cell_volume();
        (0..self.grid.len()).map(|k| integrand(&self.node(k))).sum::<f64>() * w
    }
}

/// Symmetric-matrix valued field on the nodes of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixField {
    grid: Grid,
    values: Vec<Matrix>,
}

impl MatrixField {
    pub fn sample(grid: Grid, f: impl Fn(&[f64]) -> Matrix) -> Self {
        let values = (0..grid.len()).map(|k| f(&grid.node(k))).collect();
        Self { grid, values }
    }

    pub fn constant(grid: Grid, m: Matrix) -> Self {
        Self::sample(grid, move |_| m.clone())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
}

/// `D(M_1, ..., M_n) = (1/n!) sum_{S != ∅} (-1)^{n-|S|} det(sum_{j in S} M_j)`.
pub fn mixed_discriminant(ms: &[Matrix]) -> Result<f64> {
    let n = ms.len();
    if n == 0 || n > 3 {
        return Err(Error::DimensionUnsupported(n));
    }
    for m in ms {
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: m.len() });
        }
    }
    let mut total = 0.0;
    for mask in 1usize..(1 << n) {
        let mut sum = vec![vec![0.0; n]; n];
        for (j, m) in ms.iter().enumerate() {
            if mask & (1 << j) != 0 {
                for a in 0..n {
                    for b in 0..n {
                        sum[a][b] += m[a][b];
                    }
                }
            }
        }
        let sign = if (n - mask.count_ones() as usize).is_multiple_of(2) { 1.0 } else { -1.0 };
        total += sign * det(&sum);
    }
    Ok(total / factorial(n))
}

/// `[M]_k = e_k(eigenvalues of M) / binom(n, k)`, so that `[I]_k = 1`.
pub fn normalized_symmetric(m: &Matrix, k: usize) -> f64 {
    let n = m.len();
    elementary_symmetric(&sym_eigenvalues(m))[k] / binomial(n, k)
}

fn check_slot(slot: &Slot, grid: &Grid) -> Result<()> {
    match slot.support_box(grid.dim()) {
        Some((lo, hi)) if grid.covers(&lo, &hi) => Ok(()),
        _ => Err(Error::SupportExceedsGrid),
    }
}

/// `∫ ζ(v(x), x, ∇v(x)) [Hess v(x)]_{n-i} dx` by the midpoint rule.
pub fn smooth_valuation_quad(zeta: &TestFunction3, i: usize, v: &SmoothGridFunction) -> Result<f64> {
    let n = v.dim();
    if i > n {
        return Err(Error::ArityMismatch(format!("index {i} exceeds dimension {n}")));
    }
    check_slot(&zeta.point, v.grid())?;
    Ok(v.integrate(|d| {
        let w = zeta.eval(d.value, &d.x, &d.gradient);
        if w == 0.0 {
            0.0
        } else {
            w * normalized_symmetric(&d.hessian, n - i)
        }
    }))
}

/// `∫ ζ(x) D(Hess v(x)[i], A_1(x), ..., A_{n-i}(x)) dx` by the midpoint rule.
pub fn alesker_valuation_quad(
    zeta: &TestFunction,
    i: usize,
    fields: &[MatrixField],
    v: &SmoothGridFunction,
) -> Result<f64> {
    let n = v.dim();
    if i < 1 || i > n || i + fields.len() != n {
        return Err(Error::ArityMismatch(format!(
            "degree {i} with {} matrix fields in dimension {n}",
            fields.len()
        )));
    }
    if zeta.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: zeta.dim() });
    }
    if fields.iter().any(|f| f.grid() != v.grid()) {
        return Err(Error::InvalidInput("matrix fields must live on the grid of v".into()));
    }
    check_slot(&Slot::Bump(zeta.clone()), v.grid())?;
    let mut total = 0.0;
    for k in 0..v.grid().len() {
        let x = v.grid().node(k);
        let w = zeta.eval(&x);
        if w == 0.0 {
            continue;
        }
        let d = v.node(k);
        let mut ms: Vec<Matrix> = vec![d.hessian.clone(); i];
        ms.extend(fields.iter().map(|f| f.values[k].clone()));
        total += w * mixed_discriminant(&ms)?;
    }
    Ok(total * v.grid().cell_volume())
}

/// Orientation of the exponent in the non-vertically-invariant example.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentSign {
    /// `exp(v(x) - <∇v(x), x>)`.
    Literal,
    /// `exp(<∇v(x), x> - v(x))`, the orientation under which the example
    /// grows like `exp(lambda |x|^2 / 2)` on `lambda |x|^2 / 2`.
    Displayed,
}

/// `∫ exp(±(v - <∇v, x>)) η(x) det Hess v(x) dx`.
pub fn counterexample_eval(eta: &TestFunction, v: &SmoothGridFunction, sign: ExponentSign) -> Result<f64> {
    if eta.dim() != v.dim() {
        return Err(Error::DimensionMismatch { expected: v.dim(), got: eta.dim() });
    }
    check_slot(&Slot::Bump(eta.clone()), v.grid())?;
    let s = match sign {
        ExponentSign::Literal => 1.0,
        ExponentSign::Displayed => -1.0,
    };
    Ok(v.integrate(|d| {
        let w = eta.eval(&d.x);
        if w == 0.0 {
            return 0.0;
        }
        let legendre: f64 = d.value - d.gradient.iter().zip(&d.x).map(|(g, x)| g * x).sum::<f64>();
        (s * legendre).exp() * w * det(&d.hessian)
    }))
}
