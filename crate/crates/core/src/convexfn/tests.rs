use proptest::prelude::*;

use super::*;
use crate::geometry::{hausdorff_distance, minkowski_sum, Polyhedron};
use crate::linalg::{self, Point};

fn ma(pieces: &[(&[f64], f64)]) -> MaxAffine {
    let dim = pieces[0].0.len();
    MaxAffine::new(
        dim,
        pieces
            .iter()
            .map(|(a, b)| AffineFunction::new(a.to_vec(), *b).unwrap())
            .collect(),
    )
    .unwrap()
}

/// sup_x <x, y> - f(x) over a dense grid on [-r, r].
fn grid_sup_1d(f: impl Fn(f64) -> f64, y: f64, r: f64) -> f64 {
    let n = 40_000;
    (0..=n)
        .map(|i| {
            let x = -r + 2.0 * r * i as f64 / n as f64;
            x * y - f(x)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn conjugate_of_linear_is_point_indicator() {
    let u = conjugate_max_affine(&MaxAffine::linear(vec![0.5, -2.0])).unwrap();
    assert_eq!(u.domain().vertices(), &[vec![0.5, -2.0]]);
    assert_eq!(u.eval(&[0.5, -2.0]), 0.0);
    assert_eq!(u.eval(&[0.5, -1.9]), f64::INFINITY);
}

#[test]
fn conjugate_of_hinge_against_grid_sup() {
    let v = ma(&[(&[0.0], 0.0), (&[1.0], 0.0)]);
    let u = v.conjugate().unwrap();
    for k in -10..=20 {
        let y = k as f64 / 10.0;
        let s = grid_sup_1d(|x| v.eval(&[x]), y, 200.0);
        // outside [0,1] the grid sup grows with the grid radius
        if (0.0..=1.0).contains(&y) {
            assert!((u.eval(&[y]) - s).abs() < 1e-9, "y={y}");
        } else {
            assert!(u.eval(&[y]).is_infinite() && s > 10.0);
        }
    }
}

#[test]
fn conjugate_of_two_slopes_against_grid_sup() {
    let v = ma(&[(&[-1.0], 0.0), (&[1.0], -1.0)]);
    let u = v.conjugate().unwrap();
    assert_eq!(u.eval(&[-1.0]), 0.0);
    assert_eq!(u.eval(&[1.0]), 1.0);
    for k in -10..=10 {
        let y = k as f64 / 10.0;
        let s = grid_sup_1d(|x| v.eval(&[x]), y, 50.0);
        assert!((u.eval(&[y]) - s).abs() < 1e-6, "y={y}");
    }
}

#[test]
fn conjugate_of_indicator_is_support_function() {
    let k = Polyhedron::from_points(2, &[vec![0.0, 0.0], vec![2.0, 0.0], vec![0.5, 1.5]]).unwrap();
    let h = CellPA::indicator(&k).unwrap().conjugate().unwrap();
    assert_eq!(h.pieces().len(), 3);
    let y0 = vec![0.3, -0.4];
    let shifted = CellPA::linear_on(&y0, &k).unwrap().conjugate().unwrap();
    for i in -5..=5 {
        for j in -5..=5 {
            let y = [i as f64 * 0.7, j as f64 * 0.6];
            let hk = k
                .vertices()
                .iter()
                .map(|p| linalg::dot(p, &y))
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((h.eval(&y) - hk).abs() < 1e-12);
            // brute force over a fine grid of the triangle
            let mut best = f64::NEG_INFINITY;
            for a in 0..=60 {
                for b in 0..=(60 - a) {
                    let (s, t) = (a as f64 / 60.0, b as f64 / 60.0);
                    let x = [2.0 * s + 0.5 * t, 1.5 * t];
                    best = best.max(linalg::dot(&x, &linalg::sub(&y, &y0)));
                }
            }
            assert!((shifted.eval(&y) - best).abs() < 1e-9);
        }
    }
}

#[test]
fn inf_convolution_of_indicators_is_minkowski_sum() {
    let k = Polyhedron::from_points(2, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let l = Polyhedron::cuboid(&[-1.0, 0.0], &[0.0, 0.5]).unwrap();
    let y = vec![0.4, 1.3];
    let r = inf_convolve(
        &[1.0, 1.0],
        &[CellPA::linear_on(&y, &k).unwrap(), CellPA::linear_on(&y, &l).unwrap()],
    )
    .unwrap();
    let sum = minkowski_sum(&k, &l).unwrap();
    assert!(hausdorff_distance(r.domain(), &sum).unwrap() < 1e-12);
    // grid oracle: z is reachable iff some x in K has z - x in L; value is <y, z>
    for i in 0..=12 {
        for j in 0..=12 {
            let z = [-1.2 + i as f64 * 0.2, -0.2 + j as f64 * 0.15];
            let mut inf = f64::INFINITY;
            for a in 0..=80 {
                for b in 0..=(80 - a) {
                    let x = [a as f64 / 80.0, b as f64 / 80.0];
                    let rest = linalg::sub(&z, &x);
                    if l.contains(&rest, 1e-12) {
                        inf = inf.min(linalg::dot(&y, &x) + linalg::dot(&y, &rest));
                    }
                }
            }
            let got = r.eval(&z);
            if inf.is_finite() {
                assert!((got - inf).abs() < 1e-9);
            } else {
                // grid misses only points very close to the boundary
                assert!(got.is_infinite() || sum.distance_to(&z) < 1e-9 || !sum.contains(&z, -0.02));
            }
        }
    }
}

#[test]
fn inf_convolution_with_weights_adds_scales() {
    let k = Polyhedron::cuboid(&[0.0, -1.0], &[1.0, 1.0]).unwrap();
    let u = CellPA::linear_on(&[1.0, 2.0], &k).unwrap();
    let r = inf_convolve(&[0.5, 1.5], &[u.clone(), u.clone()]).unwrap();
    assert!(r.approx_eq(&u.epi_scale(2.0).unwrap(), 1e-12));
    // 1-d grid oracle on a non-linear function
    let f = CellPA::from_vertex_values(1, vec![(vec![0.0], 1.0), (vec![1.0], 0.0), (vec![2.0], 2.0)]).unwrap();
    let g = CellPA::from_vertex_values(1, vec![(vec![-1.0], 0.0), (vec![0.5], -1.0)]).unwrap();
    let (a, b) = (0.5, 2.0);
    let h = inf_convolve(&[a, b], &[f.clone(), g.clone()]).unwrap();
    let fs = f.epi_scale(a).unwrap();
    let gs = g.epi_scale(b).unwrap();
    for i in 0..=40 {
        let z = -2.0 + 4.0 * i as f64 / 40.0;
        let n = 20_000;
        let inf = (0..=n)
            .map(|k| {
                let x = -3.0 + 6.0 * k as f64 / n as f64;
                fs.eval(&[x]) + gs.eval(&[z - x])
            })
            .fold(f64::INFINITY, f64::min);
        let got = h.eval(&[z]);
        if inf.is_finite() {
            assert!((got - inf).abs() < 1e-3, "z={z} got={got} inf={inf}");
        }
    }
}

#[test]
fn inf_convolve_argument_errors() {
    let u = CellPA::indicator(&Polyhedron::cuboid(&[0.0], &[1.0]).unwrap()).unwrap();
    assert!(matches!(inf_convolve(&[1.0], &[]), Err(Error::ArityMismatch(_))));
    assert!(matches!(inf_convolve(&[-1.0], std::slice::from_ref(&u)), Err(Error::NegativeScale(_))));
    assert_eq!(inf_convolve(&[0.0], &[u]), Err(Error::ZeroWeight));
}

fn arb_max_affine(dim: usize) -> impl Strategy<Value = MaxAffine> {
    prop::collection::vec(
        (prop::collection::vec(-3.0f64..3.0, dim), -2.0f64..2.0),
        1..9,
    )
    .prop_map(move |raw| {
        MaxAffine::new(
            dim,
            raw.into_iter()
                .map(|(a, b)| AffineFunction::new(a, b).unwrap())
                .collect(),
        )
        .unwrap()
    })
}

fn arb_cell_pa(dim: usize) -> impl Strategy<Value = CellPA> {
    prop::collection::vec(
        (prop::collection::vec(-2.0f64..2.0, dim), -1.0f64..1.0),
        dim + 1..8,
    )
    .prop_filter_map("degenerate domain", move |raw| {
        let u = CellPA::from_vertex_values(dim, raw).ok()?;
        (u.domain().affine_dim() == dim && u.domain().volume().ok()? > 1e-3).then_some(u)
    })
}

fn probe_grid(dim: usize, r: f64, n: usize) -> Vec<Point> {
    let axis: Vec<f64> = (0..=n).map(|i| -r + 2.0 * r * i as f64 / n as f64).collect();
    if dim == 1 {
        axis.iter().map(|&x| vec![x]).collect()
    } else {
        axis.iter()
            .flat_map(|&x| axis.iter().map(move |&y| vec![x, y]))
            .collect()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn conjugation_round_trip_1d(v in arb_max_affine(1)) {
        let back = v.conjugate().unwrap().conjugate().unwrap();
        prop_assert!(back.approx_eq(&v, 1e-9), "{:?} vs {:?}", back, v);
    }

    #[test]
    fn conjugation_round_trip_2d(v in arb_max_affine(2)) {
        let back = v.conjugate().unwrap().conjugate().unwrap();
        prop_assert!(back.approx_eq(&v, 1e-9), "{:?} vs {:?}", back, v);
    }

    #[test]
    fn pruning_keeps_exactly_the_winners(raw in prop::collection::vec(
        (prop::collection::vec(-3.0f64..3.0, 2), -2.0f64..2.0), 1..12)) {
        let pieces: Vec<AffineFunction> =
            raw.into_iter().map(|(a, b)| AffineFunction::new(a, b).unwrap()).collect();
        let v = MaxAffine::new(2, pieces.clone()).unwrap();
        let full = |x: &[f64]| pieces.iter().map(|p| p.eval(x)).fold(f64::NEG_INFINITY, f64::max);
        let mut won = vec![false; v.pieces().len()];
        for x in probe_grid(2, 8.0, 80) {
            prop_assert!((v.eval(&x) - full(&x)).abs() < 1e-9);
            let vals: Vec<f64> = v.pieces().iter().map(|p| p.eval(&x)).collect();
            let i = v.active_piece(&x);
            if vals.iter().enumerate().all(|(j, &w)| j == i || w < vals[i] - 1e-9) {
                won[i] = true;
            }
        }
        // every kept piece wins somewhere; far probes along its region's interior
        for (i, w) in won.iter().enumerate() {
            if !w {
                let r = v.region(i).unwrap();
                prop_assert!(!r.is_empty() && r.affine_dim() == 2);
            }
        }
    }

    #[test]
    fn epi_scale_conjugates_to_value_scale(u in arb_cell_pa(2), lambda in 0.1f64..3.0) {
        let lhs = u.epi_scale(lambda).unwrap().conjugate().unwrap();
        let rhs = u.conjugate().unwrap().scale_values(lambda).unwrap();
        for y in probe_grid(2, 3.0, 8) {
            prop_assert!((lhs.eval(&y) - rhs.eval(&y)).abs() < 1e-9 * (1.0 + rhs.eval(&y).abs()));
        }
    }

    #[test]
    fn inf_convolution_domain_is_minkowski_sum(u in arb_cell_pa(2), v in arb_cell_pa(2)) {
        let w = inf_convolve(&[1.0, 1.0], &[u.clone(), v.clone()]).unwrap();
        let s = minkowski_sum(u.domain(), v.domain()).unwrap();
        prop_assert!(hausdorff_distance(w.domain(), &s).unwrap() < 1e-9);
        prop_assert!(w.is_convex(1e-9));
    }

    #[test]
    fn sublevel_sets_scale_with_epi_scaling(u in arb_cell_pa(2), lambda in 0.2f64..3.0, t in -0.5f64..1.0) {
        let lhs = sublevel_set(&u.epi_scale(lambda).unwrap(), lambda * t).unwrap();
        let rhs = sublevel_set(&u, t).unwrap().scale(lambda).unwrap();
        prop_assert_eq!(lhs.is_empty(), rhs.is_empty());
        if !lhs.is_empty() {
            prop_assert!(hausdorff_distance(&lhs, &rhs).unwrap() < 1e-7);
        }
    }

    #[test]
    fn min_conjugates_to_max(u in arb_cell_pa(1), v in arb_cell_pa(1)) {
        if let MinResult::Convex(m) = guarded_min(&u, &v).unwrap() {
            let lhs = m.conjugate().unwrap();
            let rhs = u.conjugate().unwrap().pointwise_max(&v.conjugate().unwrap()).unwrap();
            prop_assert!(lhs.approx_eq(&rhs, 1e-8), "{:?} {:?}", lhs, rhs);
        }
    }

    #[test]
    fn cell_operations_preserve_convexity(u in arb_cell_pa(2), v in arb_cell_pa(2)) {
        prop_assert!(u.is_convex(1e-9));
        if let Ok(m) = pointwise_max(&u, &v) {
            prop_assert!(m.is_convex(1e-9));
            for x in m.probe_points() {
                prop_assert!((m.eval(&x) - u.eval(&x).max(v.eval(&x))).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn min_conjugates_to_max_on_2d_pairs() {
    let y = [0.5, 0.25];
    let k = Polyhedron::cuboid(&[0.0, 0.0], &[2.0, 1.0]).unwrap();
    let l = Polyhedron::cuboid(&[1.0, 0.0], &[3.0, 1.0]).unwrap();
    let u = CellPA::linear_on(&y, &k).unwrap();
    let v = CellPA::linear_on(&y, &l).unwrap();
    let m = guarded_min(&u, &v).unwrap().convex().unwrap();
    let lhs = m.conjugate().unwrap();
    let rhs = u.conjugate().unwrap().pointwise_max(&v.conjugate().unwrap()).unwrap();
    assert!(lhs.approx_eq(&rhs, 1e-12));
}
