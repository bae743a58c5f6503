use crate::linalg::{cross2, Point, TAU_GEOM};

/// Convex hull of planar points. Returns indices of the hull vertices in
/// counter-clockwise order, collinear boundary points dropped. For collinear
/// input the two extreme points are returned; for coincident input one index.
pub fn hull_2d(points: &[Point]) -> Vec<usize> {
    if points.is_empty() {
        return vec![];
    }
    let scale = points
        .iter()
        .map(|p| p[0].abs().max(p[1].abs()))
        .fold(1.0_f64, f64::max);
    let snap = TAU_GEOM * scale;
    let mut idx: Vec<usize> = (0..points.len()).collect();
    // x within tolerance counts as equal so near-vertical edges sort by y
    idx.sort_by(|&a, &b| {
        let (p, q) = (&points[a], &points[b]);
        if (p[0] - q[0]).abs() <= snap {
            p[1].total_cmp(&q[1])
        } else {
            p[0].total_cmp(&q[0])
        }
    });
    idx.dedup_by(|a, b| {
        (points[*a][0] - points[*b][0]).abs() <= TAU_GEOM
            && (points[*a][1] - points[*b][1]).abs() <= TAU_GEOM
    });
    if idx.len() == 1 {
        return idx;
    }
    let tol = TAU_GEOM * scale * scale;

    let mut lower: Vec<usize> = Vec::with_capacity(idx.len());
    for &i in &idx {
        while lower.len() >= 2
            && cross2(
                &points[lower[lower.len() - 2]],
                &points[lower[lower.len() - 1]],
                &points[i],
            ) <= tol
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::with_capacity(idx.len());
    for &i in idx.iter().rev() {
        while upper.len() >= 2
            && cross2(
                &points[upper[upper.len() - 2]],
                &points[upper[upper.len() - 1]],
                &points[i],
            ) <= tol
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    lower
}

/// Extreme points of a 1-d point set: (index of min, index of max).
pub fn hull_1d(points: &[Point]) -> Vec<usize> {
    if points.is_empty() {
        return vec![];
    }
    let mut lo = 0;
    let mut hi = 0;
    for (i, p) in points.iter().enumerate() {
        if p[0] < points[lo][0] {
            lo = i;
        }
        if p[0] > points[hi][0] {
            hi = i;
        }
    }
    if (points[hi][0] - points[lo][0]).abs() <= TAU_GEOM {
        vec![lo]
    } else {
        vec![lo, hi]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_with_interior_and_edge_points() {
        let pts = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.5, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![0.5, 0.5],
        ];
        let h = hull_2d(&pts);
        assert_eq!(h, vec![0, 1, 3, 4]);
    }

    #[test]
    fn collinear_points_give_segment() {
        let pts = vec![vec![0.0, 0.0], vec![2.0, 2.0], vec![1.0, 1.0]];
        assert_eq!(hull_2d(&pts), vec![0, 1]);
    }

    #[test]
    fn coincident_points_give_single_index() {
        let pts = vec![vec![0.3, 0.3], vec![0.3, 0.3]];
        assert_eq!(hull_2d(&pts).len(), 1);
    }

    #[test]
    fn near_vertical_edge_with_rounding_noise() {
        let pts = vec![
            vec![-0.2, -1.0],
            vec![1.5, -1.0],
            vec![1.5, 1.0],
            vec![-0.2, 1.0],
            vec![1.5000000000000002, 0.84],
        ];
        let h = hull_2d(&pts);
        let mut h2 = h.clone();
        h2.sort();
        assert_eq!(h2, vec![0, 1, 2, 3]);
    }
}
