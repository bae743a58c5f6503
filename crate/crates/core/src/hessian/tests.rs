use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use super::*;
use crate::convexfn::{AffineFunction, CellPA, MaxAffine};
use crate::geometry::{minkowski_sum, Polyhedron};
use crate::valuations::{Slot, TestFunction, TestFunction3};

fn ma(dim: usize, pieces: Vec<(Vec<f64>, f64)>) -> MaxAffine {
    let pieces = pieces.into_iter().map(|(a, b)| AffineFunction::new(a, b).unwrap()).collect();
    MaxAffine::new(dim, pieces).unwrap()
}

fn unit_square() -> Polyhedron {
    Polyhedron::cuboid(&[0.0, 0.0], &[1.0, 1.0]).unwrap()
}

fn square_window() -> Window {
    Window::new(
        Polyhedron::cuboid(&[-2.0, -2.0], &[2.0, 2.0]).unwrap(),
        Polyhedron::cuboid(&[-1.0, -1.0], &[1.0, 1.0]).unwrap(),
    )
    .unwrap()
}

#[test]
fn indicator_of_square_has_known_measures() {
    let u = CellPA::indicator(&unit_square()).unwrap();
    let t = hessian_measure(&u, &square_window()).unwrap();
    assert_abs_diff_eq!(t.values[2], 1.0, epsilon = 1e-9);
    assert_abs_diff_eq!(t.values[1], 2.0, epsilon = 1e-9);
    assert_abs_diff_eq!(t.values[0], 4.0, epsilon = 1e-9);
    // square + s [-1,1]^2
    for s in [0.0, 0.3, 1.0, 2.5] {
        assert_abs_diff_eq!(t.ps_polynomial(s), (1.0 + 2.0 * s).powi(2), epsilon = 1e-9);
    }
}

#[test]
fn kink_in_one_dimension() {
    // |x| on [-1, 1]; the kink carries the gradient jump [-1, 1]
    let u = CellPA::from_vertex_values(1, vec![(vec![-1.0], 1.0), (vec![0.0], 0.0), (vec![1.0], 1.0)]).unwrap();
    let w = Window::new(
        Polyhedron::cuboid(&[-0.5], &[0.5]).unwrap(),
        Polyhedron::cuboid(&[-0.5], &[2.0]).unwrap(),
    )
    .unwrap();
    let t = hessian_measure(&u, &w).unwrap();
    // Θ_1: length of B ∩ {x : u'(x) in C} = 0.5 (x > 0 side only)
    assert_abs_diff_eq!(t.values[1], 0.5, epsilon = 1e-9);
    // Θ_0: length of [-1, 1] ∩ C at the kink
    assert_abs_diff_eq!(t.values[0], 1.5, epsilon = 1e-9);
}

#[test]
fn affine_piece_has_only_top_measure() {
    let u = CellPA::linear_on(&[0.25, -0.5], &unit_square()).unwrap();
    let w = Window::new(
        Polyhedron::cuboid(&[0.2, 0.2], &[0.8, 0.8]).unwrap(),
        Polyhedron::cuboid(&[-1.0, -1.0], &[1.0, 1.0]).unwrap(),
    )
    .unwrap();
    let t = hessian_measure(&u, &w).unwrap();
    assert_abs_diff_eq!(t.values[2], 0.36, epsilon = 1e-9);
    assert_abs_diff_eq!(t.values[1], 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(t.values[0], 0.0, epsilon = 1e-12);
}

#[test]
fn window_must_be_bounded() {
    let half = Polyhedron::from_halfspaces(1, vec![crate::geometry::Halfspace::new(vec![1.0], 0.0)]).unwrap();
    let seg = Polyhedron::cuboid(&[0.0], &[1.0]).unwrap();
    assert!(matches!(Window::new(half, seg), Err(crate::Error::UnboundedWindow)));
}

#[test]
fn monte_carlo_matches_square_polynomial() {
    let u = CellPA::indicator(&unit_square()).unwrap();
    let w = square_window();
    let s = 0.5;
    let exact = hessian_measure(&u, &w).unwrap().ps_polynomial(s);
    let mc = ps_volume_mc(&u, s, &w, 200_000, 7).unwrap();
    assert!(
        (mc.estimate - exact).abs() <= 3.0 * mc.stderr + 1e-9,
        "mc {} ± {} vs {}",
        mc.estimate,
        mc.stderr,
        exact
    );
}

#[test]
fn monte_carlo_is_seed_deterministic() {
    let u = CellPA::from_vertex_values(
        2,
        vec![
            (vec![0.0, 0.0], 0.0),
            (vec![1.0, 0.0], 0.5),
            (vec![0.0, 1.0], 0.2),
            (vec![1.0, 1.0], 1.5),
        ],
    )
    .unwrap();
    let w = Window::centered(2, 2.0, 2.0).unwrap();
    let a = ps_volume_mc(&u, 0.7, &w, 100_000, 11).unwrap();
    let b = ps_volume_mc(&u, 0.7, &w, 100_000, 11).unwrap();
    assert_eq!(a, b);
    let exact = hessian_measure(&u, &w).unwrap().ps_polynomial(0.7);
    assert!((a.estimate - exact).abs() <= 3.0 * a.stderr + 1e-9);
}

#[test]
fn displaced_graph_pieces_for_square_match_polynomial() {
    // independent assembly: union of F + s Q_F for the square, C = [-1,1]^2
    let s = 0.4;
    let sq = unit_square();
    let c = Polyhedron::cuboid(&[-1.0, -1.0], &[1.0, 1.0]).unwrap();
    let grown = minkowski_sum(&sq, &c.scale(s).unwrap()).unwrap();
    let u = CellPA::indicator(&sq).unwrap();
    let t = hessian_measure(&u, &square_window()).unwrap();
    assert_abs_diff_eq!(t.ps_polynomial(s), grown.volume().unwrap(), epsilon = 1e-9);
}

#[test]
fn finite_lattice_of_abs_value() {
    let v = ma(1, vec![(vec![-1.0], 0.0), (vec![1.0], 0.0)]);
    let w = Window::new(
        Polyhedron::cuboid(&[-2.0], &[1.0]).unwrap(),
        Polyhedron::cuboid(&[-0.5], &[2.0]).unwrap(),
    )
    .unwrap();
    let t = hessian_measure_finite(&v, &w).unwrap();
    assert_abs_diff_eq!(t.values[1], 1.0, epsilon = 1e-9);
    assert_abs_diff_eq!(t.values[0], 1.5, epsilon = 1e-9);
}

#[test]
fn duality_on_two_dimensional_example() {
    let v = ma(
        2,
        vec![(vec![1.0, 0.0], 0.0), (vec![-1.0, 0.5], -0.2), (vec![0.0, -1.0], 0.1)],
    );
    let r = duality_check(&v, &Window::centered(2, 1.5, 1.2).unwrap()).unwrap();
    assert!(r.max_discrepancy < 1e-8, "{r:?}");
}

fn piece_strategy(dim: usize) -> impl Strategy<Value = Vec<(Vec<f64>, f64)>> {
    prop::collection::vec(
        (prop::collection::vec(-2.0f64..2.0, dim), -1.0f64..1.0),
        2..6,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conjugate_swaps_measures_1d(pieces in piece_strategy(1), rb in 0.3f64..2.0, rc in 0.3f64..2.5) {
        let v = ma(1, pieces);
        let r = duality_check(&v, &Window::centered(1, rb, rc).unwrap()).unwrap();
        prop_assert!(r.max_discrepancy < 1e-7, "{:?}", r);
    }

    #[test]
    fn conjugate_swaps_measures_2d(pieces in piece_strategy(2), rb in 0.3f64..2.0, rc in 0.3f64..2.5) {
        let v = ma(2, pieces);
        let r = duality_check(&v, &Window::centered(2, rb, rc).unwrap()).unwrap();
        prop_assert!(r.max_discrepancy < 1e-7, "{:?}", r);
    }

    #[test]
    fn mixed_discriminant_of_equal_arguments_is_determinant(
        a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0,
        d in -2.0f64..2.0, e in -2.0f64..2.0, f in -2.0f64..2.0,
    ) {
        let m = vec![vec![a, b, c], vec![b, d, e], vec![c, e, f]];
        let md = mixed_discriminant(&[m.clone(), m.clone(), m.clone()]).unwrap();
        prop_assert!((md - crate::linalg::det(&m)).abs() < 1e-9 * (1.0 + md.abs()));
    }

    #[test]
    fn mixed_discriminant_with_identity_is_normalized_symmetric(
        a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0,
        d in -2.0f64..2.0, e in -2.0f64..2.0, f in -2.0f64..2.0,
        i in 0usize..=3,
    ) {
        let m = vec![vec![a, b, c], vec![b, d, e], vec![c, e, f]];
        let id = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        let mut args = vec![m.clone(); i];
        args.extend(std::iter::repeat_n(id, 3 - i));
        let md = mixed_discriminant(&args).unwrap();
        let expect = normalized_symmetric(&m, i);
        prop_assert!((md - expect).abs() < 1e-8 * (1.0 + expect.abs()));
    }

    #[test]
    fn mixed_discriminant_is_symmetric_and_multilinear(
        xs in prop::collection::vec(-2.0f64..2.0, 9), t in -3.0f64..3.0,
    ) {
        let m1 = vec![vec![xs[0], xs[1]], vec![xs[1], xs[2]]];
        let m2 = vec![vec![xs[3], xs[4]], vec![xs[4], xs[5]]];
        let m3 = vec![vec![xs[6], xs[7]], vec![xs[7], xs[8]]];
        let d12 = mixed_discriminant(&[m1.clone(), m2.clone()]).unwrap();
        let d21 = mixed_discriminant(&[m2.clone(), m1.clone()]).unwrap();
        prop_assert!((d12 - d21).abs() < 1e-10);
        let comb: Vec<Vec<f64>> = (0..2).map(|r| (0..2).map(|c| m2[r][c] + t * m3[r][c]).collect()).collect();
        let lhs = mixed_discriminant(&[m1.clone(), comb]).unwrap();
        let rhs = d12 + t * mixed_discriminant(&[m1, m3]).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()));
    }
}

#[test]
fn mixed_discriminant_rejects_bad_arity() {
    assert!(mixed_discriminant(&[]).is_err());
    let m = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
    assert!(mixed_discriminant(&[m]).is_err());
}

#[test]
fn grid_rejects_misaligned_box() {
    assert!(Grid::new(&[0.0], &[1.0], 0.3).is_err());
    assert!(Grid::new(&[0.0, 0.0], &[1.0, 1.0], 0.25).is_ok());
}

#[test]
fn stencils_are_exact_on_quadratics() {
    let g = Grid::new(&[-1.0, -1.0], &[1.0, 1.0], 0.25).unwrap();
    let v = SmoothGridFunction::sample(g, |x| x[0] * x[0] + x[0] * x[1] + 2.0 * x[1] * x[1] + x[0]);
    for k in [0, 5, 17, 63] {
        let d = v.node(k);
        assert_abs_diff_eq!(d.gradient[0], 2.0 * d.x[0] + d.x[1] + 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(d.gradient[1], d.x[0] + 4.0 * d.x[1], epsilon = 1e-10);
        assert_abs_diff_eq!(d.hessian[0][0], 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(d.hessian[0][1], 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(d.hessian[1][1], 4.0, epsilon = 1e-9);
    }
    assert_eq!(v.psd_violations(), 0);
}

#[test]
fn concave_sample_is_flagged() {
    let g = Grid::new(&[-1.0], &[1.0], 0.125).unwrap();
    let v = SmoothGridFunction::sample(g, |x| -x[0] * x[0]);
    assert_eq!(v.psd_violations(), 16);
}

#[test]
fn half_square_norm_with_box_slot_gives_box_volume() {
    // v = |x|^2 / 2 has Hess v = I, so [Hess v]_{n-i} = 1
    let n = 2;
    let g = Grid::new(&[-2.0, -2.0], &[2.0, 2.0], 0.125).unwrap();
    let v = SmoothGridFunction::sample(g, |x| 0.5 * (x[0] * x[0] + x[1] * x[1]));
    let z = TestFunction3::new(
        Slot::One,
        Slot::Box { lo: vec![-0.5, 0.0], hi: vec![1.0, 1.0] },
        Slot::One,
    );
    for i in 0..=n {
        let q = smooth_valuation_quad(&z, i, &v).unwrap();
        assert_abs_diff_eq!(q, 1.5, epsilon = 1e-9);
    }
}

#[test]
fn point_slot_outside_grid_is_rejected() {
    let g = Grid::new(&[-1.0], &[1.0], 0.25).unwrap();
    let v = SmoothGridFunction::sample(g, |x| x[0] * x[0]);
    let outside = TestFunction3::new(Slot::One, Slot::Box { lo: vec![-2.0], hi: vec![0.0] }, Slot::One);
    assert!(matches!(smooth_valuation_quad(&outside, 1, &v), Err(crate::Error::SupportExceedsGrid)));
    let unknown = TestFunction3::new(Slot::One, Slot::One, Slot::One);
    assert!(matches!(smooth_valuation_quad(&unknown, 1, &v), Err(crate::Error::SupportExceedsGrid)));
}

#[test]
fn alesker_with_identity_fields_matches_smooth_quadrature() {
    let g = Grid::new(&[-3.0, -3.0], &[3.0, 3.0], 0.125).unwrap();
    let v = SmoothGridFunction::sample(g.clone(), |x| (1.0 + x[0] * x[0] + 2.0 * x[1] * x[1]).sqrt() + 0.3 * x[0] * x[0]);
    let zeta = TestFunction::bump(2, 1.8, 2.5, 1).unwrap();
    let id = MatrixField::constant(g, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    let i = 1;
    let a = alesker_valuation_quad(&zeta, i, &[id], &v).unwrap();
    let z3 = TestFunction3::new(Slot::One, Slot::Bump(zeta), Slot::One);
    let s = smooth_valuation_quad(&z3, i, &v).unwrap();
    assert_abs_diff_eq!(a, s, epsilon = 1e-9 * (1.0 + s.abs()));
}

#[test]
fn alesker_arity_is_checked() {
    let g = Grid::new(&[-1.0, -1.0], &[1.0, 1.0], 0.25).unwrap();
    let v = SmoothGridFunction::sample(g.clone(), |x| x[0] * x[0] + x[1] * x[1]);
    let zeta = TestFunction::bump(2, 1.0, 0.5, 1).unwrap();
    let id = MatrixField::constant(g, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    assert!(matches!(
        alesker_valuation_quad(&zeta, 2, std::slice::from_ref(&id), &v),
        Err(crate::Error::ArityMismatch(_))
    ));
    assert!(matches!(alesker_valuation_quad(&zeta, 0, &[id.clone(), id], &v), Err(crate::Error::ArityMismatch(_))));
}

#[test]
fn counterexample_on_quadratic_is_finite_and_sign_dependent() {
    let g = Grid::new(&[-3.0], &[3.0], 1.0 / 32.0).unwrap();
    let eta = TestFunction::bump(1, 1.8, 3.0, 1).unwrap();
    let v = SmoothGridFunction::sample(g, |x| 0.5 * x[0] * x[0]);
    let lit = counterexample_eval(&eta, &v, ExponentSign::Literal).unwrap();
    let disp = counterexample_eval(&eta, &v, ExponentSign::Displayed).unwrap();
    assert!(lit.is_finite() && disp.is_finite());
    assert!(disp > lit);
}
