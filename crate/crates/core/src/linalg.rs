//! Small dense helpers for points in R^n with n <= 3.

pub type Point = Vec<f64>;

/// Coincidence / coplanarity tolerance for unit-scaled inputs.
pub const TAU_GEOM: f64 = 1e-9;
/// Tolerance used when deciding whether an affine piece is essential.
pub const TAU_PRUNE: f64 = 1e-10;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn sub(a: &[f64], b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[inline]
pub fn add(a: &[f64], b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

#[inline]
pub fn scale(a: &[f64], s: f64) -> Point {
    a.iter().map(|x| x * s).collect()
}

/// `a + s * b`
#[inline]
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// z-component of (b - o) x (c - o).
#[inline]
pub fn cross2(o: &[f64], b: &[f64], c: &[f64]) -> f64 {
    (b[0] - o[0]) * (c[1] - o[1]) - (b[1] - o[1]) * (c[0] - o[0])
}

/// Counter-clockwise perpendicular of a planar vector.
#[inline]
pub fn perp(a: &[f64]) -> Point {
    vec![-a[1], a[0]]
}

pub fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(std::cmp::Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// Determinant of a square matrix given row-major, n <= 3.
pub fn det(m: &[Vec<f64>]) -> f64 {
    match m.len() {
        0 => 1.0,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        n => {
            let a = nalgebra::DMatrix::from_fn(n, n, |i, j| m[i][j]);
            a.determinant()
        }
    }
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r.round()
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Volume of the unit ball in R^k.
pub fn unit_ball_volume(k: usize) -> f64 {
    match k {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / k as f64 * unit_ball_volume(k - 2),
    }
}

/// Elementary symmetric functions e_0..e_n of the given values.
pub fn elementary_symmetric(values: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; values.len() + 1];
    e[0] = 1.0;
    for (i, &v) in values.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            e[k] += v * e[k - 1];
        }
    }
    e
}

/// Eigenvalues of a symmetric matrix of size <= 3 in closed form.
pub fn sym_eigenvalues(m: &[Vec<f64>]) -> Vec<f64> {
    match m.len() {
        0 => vec![],
        1 => vec![m[0][0]],
        2 => {
            let (a, b, d) = (m[0][0], 0.5 * (m[0][1] + m[1][0]), m[1][1]);
            let mean = 0.5 * (a + d);
            let r = (0.25 * (a - d) * (a - d) + b * b).sqrt();
            vec![mean - r, mean + r]
        }
        3 => {
            // trigonometric solution of the characteristic cubic
            let s = |i: usize, j: usize| 0.5 * (m[i][j] + m[j][i]);
            let p1 = s(0, 1).powi(2) + s(0, 2).powi(2) + s(1, 2).powi(2);
            let q = (s(0, 0) + s(1, 1) + s(2, 2)) / 3.0;
            if p1 == 0.0 {
                let mut v = vec![s(0, 0), s(1, 1), s(2, 2)];
                v.sort_by(|a, b| a.total_cmp(b));
                return v;
            }
            let p2 = (s(0, 0) - q).powi(2) + (s(1, 1) - q).powi(2) + (s(2, 2) - q).powi(2)
                + 2.0 * p1;
            let p = (p2 / 6.0).sqrt();
            let b: Vec<Vec<f64>> = (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| (s(i, j) - if i == j { q } else { 0.0 }) / p)
                        .collect()
                })
                .collect();
            let r = (det(&b) / 2.0).clamp(-1.0, 1.0);
            let phi = r.acos() / 3.0;
            let e1 = q + 2.0 * p * phi.cos();
            let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
            let e2 = 3.0 * q - e1 - e3;
            let mut v = vec![e1, e2, e3];
            v.sort_by(|a, b| a.total_cmp(b));
            v
        }
        n => {
            let a = nalgebra::DMatrix::from_fn(n, n, |i, j| 0.5 * (m[i][j] + m[j][i]));
            let mut v: Vec<f64> = a.symmetric_eigenvalues().iter().copied().collect();
            v.sort_by(|a, b| a.total_cmp(b));
            v
        }
    }
}
