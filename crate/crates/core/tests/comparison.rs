use lorentz_lab::chains::LineDescriptor;
use lorentz_lab::comparison::*;
use lorentz_lab::model::{EuclideanSegment, MetricGraph, MinkowskiPoint, TimeGrid};
use lorentz_lab::{Error, FiniteSpace, LorentzSpace, Minkowski, PointId, ProductPoint, ProductSpace};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FRACTIONS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Independent oracle: put x2 at the origin, x1 and x3 on rays at rapidities
/// 0 and `omega`, and read `a13` off the coordinates.
fn oracle_side(a12: f64, a23: f64, omega: f64, sigma: Sigma) -> f64 {
    let x1 = match sigma {
        Sigma::Plus => MinkowskiPoint::new(-a12, 0.0),
        Sigma::Minus => MinkowskiPoint::new(a12, 0.0),
    };
    let x3 = MinkowskiPoint::new(a23 * omega.cosh(), a23 * omega.sinh());
    tau_bar(x1, x3)
}

#[test]
fn law_matches_coordinate_oracle() {
    let w = 1.5f64.acosh();
    let a = law_of_cosines_side(1.0, 1.0, w, Sigma::Plus).unwrap();
    assert!((a - oracle_side(1.0, 1.0, w, Sigma::Plus)).abs() < 1e-14);
    for (b, c, w) in [(2.0, 0.5, 0.3), (1.5, 0.7, 0.5), (0.6, 0.9, 0.2)] {
        let s = law_of_cosines_side(b, c, w, Sigma::Minus).unwrap();
        assert!((s - oracle_side(b, c, w, Sigma::Minus)).abs() < 1e-12);
    }
}

fn endpoint_sides(a12: f64, a23: f64, a13: f64) -> SideTriple {
    // x2 earliest, the longer adjacent side ends at the latest vertex
    let order = if a12 >= a23 { [1, 2, 0] } else { [1, 0, 2] };
    SideTriple::with_order(a12, a23, a13, order).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn chain_round_trip(a in 0.5f64..2.0, b in 0.5f64..2.0, w in 0.01f64..4.0) {
        let c = law_of_cosines_side(a, b, w, Sigma::Plus).unwrap();
        let back = solve_angle(&SideTriple::chain(a, b, c)).unwrap();
        prop_assert!((back.omega - w).abs() <= 1e-12, "{} vs {}", back.omega, w);
    }

    #[test]
    fn endpoint_round_trip(a in 0.5f64..2.0, b in 0.5f64..2.0, f in 0.01f64..0.99) {
        let wmax = 2.0 * ((a - b).abs() / (2.0 * (a * b).sqrt())).asinh();
        let w = f * wmax;
        prop_assume!(w >= 0.01);
        let c = law_of_cosines_side(a, b, w, Sigma::Minus).unwrap();
        let back = solve_angle(&endpoint_sides(a, b, c)).unwrap();
        prop_assert_eq!(back.sigma, Sigma::Minus);
        prop_assert!((back.omega - w).abs() <= 1e-12, "{} vs {}", back.omega, w);
    }

    #[test]
    fn planting_reproduces_sides(a in 0.3f64..2.0, b in 0.3f64..2.0, w in 0.05f64..2.5, rot in 0usize..3) {
        let c = law_of_cosines_side(a, b, w, Sigma::Plus).unwrap();
        let tri = realize_triangle(&SideTriple::chain(a, b, c)).unwrap();
        let [p, q, r] = tri.vertices;
        prop_assert!((tau_bar(p, q) - a).abs() <= 1e-12 * (1.0 + a));
        prop_assert!((tau_bar(q, r) - b).abs() <= 1e-12 * (1.0 + b));
        prop_assert!((tau_bar(p, r) - c).abs() <= 1e-12 * (1.0 + c));
        prop_assert!(q.x >= 0.0);
        // relabel by rotation: vertex k of the new triangle is vertex (k + rot) % 3
        let perm = |k: usize| (k + rot) % 3;
        let old = [[0.0, a, c], [a, 0.0, b], [c, b, 0.0]];
        let inv = |v: usize| (v + 3 - rot) % 3;
        let order = [inv(0), inv(1), inv(2)];
        let rotated = SideTriple::with_order(old[perm(0)][perm(1)], old[perm(1)][perm(2)], old[perm(0)][perm(2)], order).unwrap();
        let t2 = realize_triangle(&rotated).unwrap();
        let mut m1 = [a, b, c];
        let v = t2.vertices;
        let mut m2 = [tau_bar(v[0], v[1]), tau_bar(v[1], v[2]), tau_bar(v[0], v[2])];
        m1.sort_by(f64::total_cmp);
        m2.sort_by(f64::total_cmp);
        for k in 0..3 {
            prop_assert!((m1[k] - m2[k]).abs() <= 1e-12 * (1.0 + m1[k]));
        }
    }

    #[test]
    fn finite_difference_signs(a in 0.5f64..2.0, b in 0.5f64..2.0, w in 0.2f64..3.0) {
        let h = 1e-6;
        let c = law_of_cosines_side(a, b, w, Sigma::Plus).unwrap();
        let angle = |s: SideTriple| solve_angle(&s).unwrap().omega;
        let d_long = (angle(SideTriple::chain(a, b, c + h)) - angle(SideTriple::chain(a, b, c - h))) / (2.0 * h);
        let d_short = (angle(SideTriple::chain(a + h, b, c)) - angle(SideTriple::chain(a - h, b, c))) / (2.0 * h);
        // analytic: cosh w = (c^2 - a^2 - b^2) / (2ab)
        let sh = w.sinh();
        let exact_long = c / (a * b * sh);
        let exact_short = -(c * c - b * b + a * a) / (2.0 * a * a * b * sh);
        prop_assert!(d_long > 0.0 && d_short < 0.0);
        prop_assert!((d_long - exact_long).abs() <= 1e-4 * exact_long.abs());
        prop_assert!((d_short - exact_short).abs() <= 1e-4 * exact_short.abs());
    }
}

fn minkowski_triangles(seed: u64, n: usize) -> Vec<SampledTriangle<MinkowskiPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| SampledTriangle::from_realizers(&Minkowski, random_minkowski_triangle(&mut rng), &FRACTIONS).unwrap())
        .collect()
}

fn all_hinges<P: Clone + std::fmt::Debug>(tris: &[SampledTriangle<P>]) -> Vec<Hinge<P>> {
    tris.iter().flat_map(|t| (0..3).map(move |v| Hinge::from_triangle(t, v).unwrap())).collect()
}

#[test]
fn minkowski_is_flat_in_both_modes() {
    let tris = minkowski_triangles(7, 200);
    let lo = test_curvature_lower0(&Minkowski, &tris, 1e-9).unwrap();
    let up = test_curvature_upper0(&Minkowski, &tris, 1e-9).unwrap();
    assert!(lo.pass && up.pass);
    assert!(lo.worst_defect.abs() <= 1e-9 && up.worst_defect.abs() <= 1e-9);
    let hinges = all_hinges(&tris);
    let m = test_monotonicity_comparison(&Minkowski, &hinges, BoundMode::Lower, 1e-9).unwrap();
    assert!(m.pass, "{m:?}");
    assert!(test_monotonicity_comparison(&Minkowski, &hinges, BoundMode::Upper, 1e-9).unwrap().pass);
}

fn segment_product() -> ProductSpace<EuclideanSegment> {
    ProductSpace::new(EuclideanSegment::new(0.0, 1.0, 0.05).unwrap(), Some(TimeGrid::new(0.0, 4.0, 0.05).unwrap()))
}

#[test]
fn segment_product_passes_lower_bound() {
    let space = segment_product();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let tris: Vec<_> = (0..100)
        .map(|_| SampledTriangle::from_realizers(&space, random_product_triangle(&space, &mut rng), &FRACTIONS).unwrap())
        .collect();
    let lo = test_curvature_lower0(&space, &tris, 1e-9).unwrap();
    assert!(lo.pass, "{lo:?}");
    let m = test_monotonicity_comparison(&space, &all_hinges(&tris), BoundMode::Lower, 1e-9).unwrap();
    assert_eq!(lo.pass, m.pass);
}

/// Six points of a flat triangle (vertices and side midpoints) with the
/// separation between two midpoints inflated; closure keeps the axioms.
fn inflated_six() -> (FiniteSpace, [usize; 2]) {
    let pts = [
        MinkowskiPoint::new(0.0, 0.0),
        MinkowskiPoint::new(1.0, 0.3),
        MinkowskiPoint::new(2.0, 0.0),
        MinkowskiPoint::new(0.5, 0.15),
        MinkowskiPoint::new(1.5, 0.15),
        MinkowskiPoint::new(1.0, 0.0),
    ];
    let n = pts.len();
    let mut d = vec![0.0; n * n];
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            d[i * n + j] = Minkowski.dist(&pts[i], &pts[j]);
            if Minkowski.ll(&pts[i], &pts[j]) {
                let t = Minkowski.tau(&pts[i], &pts[j]);
                edges.push((i, j, if (i, j) == (3, 4) { t + 0.04 } else { t }));
            }
        }
    }
    (FiniteSpace::closure(d, n, &edges).unwrap(), [3, 4])
}

#[test]
fn inflated_table_fails_at_planted_pair() {
    let (space, planted) = inflated_six();
    assert!(lorentz_lab::space::validate_axioms(&space).passed());
    let chains = [
        vec![PointId(0), PointId(3), PointId(1)],
        vec![PointId(1), PointId(4), PointId(2)],
        vec![PointId(0), PointId(5), PointId(2)],
    ];
    let tri = SampledTriangle::from_chains(&space, [PointId(0), PointId(1), PointId(2)], chains).unwrap();
    let r = test_curvature_lower0(&space, &[tri.clone()], 1e-9).unwrap();
    assert!(!r.pass);
    let w = r.witness.unwrap();
    let pair = [tri.knots[w.knots.0].point.0, tri.knots[w.knots.1].point.0];
    assert_eq!(pair, planted);
    assert!((w.defect - 0.04).abs() < 1e-12);
    let m = test_monotonicity_comparison(&space, &all_hinges(&[tri]), BoundMode::Lower, 1e-9).unwrap();
    assert!(!m.pass);
}

#[test]
fn explicit_side_must_maximize() {
    let (space, _) = inflated_six();
    let chains = [
        vec![PointId(0), PointId(3), PointId(1)],
        vec![PointId(1), PointId(4), PointId(2)],
        vec![PointId(0), PointId(2)],
    ];
    let r = SampledTriangle::from_chains(&space, [PointId(0), PointId(1), PointId(2)], chains);
    assert!(r.is_ok());
    let flat = FiniteSpace::from_model(&Minkowski, &[
        MinkowskiPoint::new(0.0, 0.0),
        MinkowskiPoint::new(1.0, 0.5),
        MinkowskiPoint::new(2.0, 0.0),
        MinkowskiPoint::new(1.0, 0.0),
    ]);
    let bad = [vec![PointId(0), PointId(1)], vec![PointId(1), PointId(2)], vec![PointId(0), PointId(1), PointId(2)]];
    let r = SampledTriangle::from_chains(&flat, [PointId(0), PointId(1), PointId(2)], bad);
    assert!(matches!(r, Err(Error::Precondition(_))));
}

#[test]
fn tripod_verdicts_agree() {
    let space = ProductSpace::new(MetricGraph::tripod(1.0, 0.25), None);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let tris: Vec<_> = (0..200)
        .map(|_| SampledTriangle::from_realizers(&space, random_product_triangle(&space, &mut rng), &FRACTIONS).unwrap())
        .collect();
    let hinges = all_hinges(&tris);
    for mode in [BoundMode::Lower, BoundMode::Upper] {
        let c = test_curvature(&space, &tris, mode, 1e-9).unwrap();
        let m = test_monotonicity_comparison(&space, &hinges, mode, 1e-9).unwrap();
        eprintln!("{mode:?}: curvature {} ({}), monotonicity {} ({})", c.pass, c.worst_defect, m.pass, m.max_violation);
        assert_eq!(c.pass, m.pass);
    }
}

#[test]
fn spacelike_hinge_has_empty_domain() {
    let apex = MinkowskiPoint::new(0.0, 0.0);
    let h = Hinge {
        apex,
        alpha: vec![(MinkowskiPoint::new(1.0, 0.9), 0.43)],
        beta: vec![(MinkowskiPoint::new(1.0, -0.9), 0.43)],
        alpha_future: true,
        beta_future: true,
    };
    assert!(matches!(test_monotonicity_comparison(&Minkowski, &[h], BoundMode::Lower, 1e-9), Err(Error::Precondition(_))));
}

fn vertical(x: f64, ts: &[f64]) -> LineDescriptor<MinkowskiPoint> {
    LineDescriptor::from_chain(&Minkowski, ts.iter().map(|&t| MinkowskiPoint::new(t, x)).collect(), 0).unwrap()
}

#[test]
fn stacking_on_minkowski_and_product() {
    let ts: Vec<f64> = (0..=20).map(|k| k as f64 * 0.5).collect();
    let line = vertical(0.0, &ts);
    for (p, ts) in [(MinkowskiPoint::new(5.0, 1.3), [0.0, 2.5, 10.0]), (MinkowskiPoint::new(3.0, -0.7), [0.0, 1.0, 10.0])] {
        let r = verify_stacking(&Minkowski, &line, &p, ts).unwrap();
        assert!(r.collinear_defect <= 1e-12, "{r:?}");
    }
    let space = segment_product();
    let pts: Vec<_> = (0..=80).map(|k| ProductPoint::new(k as f64 * 0.05, 0.0)).collect();
    let line = LineDescriptor::from_chain(&space, pts, 0).unwrap();
    let p = ProductPoint::new(2.0, 0.65);
    let r = verify_stacking(&space, &line, &p, [0.0, 1.0, 4.0]).unwrap();
    assert!(r.collinear_defect <= 5.0 * 0.05, "{r:?}");
}

#[test]
fn broken_line_is_rejected() {
    let pts = vec![MinkowskiPoint::new(0.0, 0.0), MinkowskiPoint::new(1.0, 0.5), MinkowskiPoint::new(2.0, 0.0)];
    assert!(matches!(LineDescriptor::from_chain(&Minkowski, pts, 0), Err(Error::Precondition(_))));
}

#[test]
fn comparison_angle_is_constant() {
    let ts: Vec<f64> = (0..=40).map(|k| k as f64 * 0.25).collect();
    let line = vertical(0.0, &ts);
    let p = MinkowskiPoint::new(7.5, 1.2);
    let r = angle_equals_comparison_angle(&Minkowski, &line, 5.0, &p, &[0.3, 0.9, 1.5, 2.0]).unwrap();
    assert!(r.max_spread <= 1e-12, "{r:?}");
    assert!(r.evaluated > 10);
    let on = MinkowskiPoint::new(7.5, 0.0);
    assert!(matches!(angle_equals_comparison_angle(&Minkowski, &line, 5.0, &on, &[0.5]), Err(Error::Degenerate(_))));

    let space = segment_product();
    let pts: Vec<_> = (0..=80).map(|k| ProductPoint::new(k as f64 * 0.05, 0.0)).collect();
    let line = LineDescriptor::from_chain(&space, pts, 0).unwrap();
    let p = ProductPoint::new(3.5, 0.6);
    let r = angle_equals_comparison_angle(&space, &line, 2.0, &p, &[0.3, 0.6, 0.9, 1.1]).unwrap();
    assert!(r.max_spread <= 5.0 * 0.05, "{r:?}");
}

#[test]
fn sides_equal_on_line_triangles() {
    let ts: Vec<f64> = (0..=8).map(|k| k as f64 * 0.5).collect();
    let line = vertical(0.0, &ts);
    let p = MinkowskiPoint::new(2.4, 0.8);
    let r = sides_equal_check(&Minkowski, &line, 0.0, 4.0, &p, &FRACTIONS, 1e-9).unwrap();
    assert!(r.holds && r.max_tau_gap <= 1e-12, "{r:?}");

    let space = segment_product();
    let pts: Vec<_> = (0..=80).map(|k| ProductPoint::new(k as f64 * 0.05, 0.2)).collect();
    let line = LineDescriptor::from_chain(&space, pts, 0).unwrap();
    let r = sides_equal_check(&space, &line, 0.0, 4.0, &ProductPoint::new(2.0, 0.9), &FRACTIONS, 1e-9).unwrap();
    assert!(r.holds, "{r:?}");
}

#[test]
fn sides_equal_detects_injected_violation() {
    // line x = 0 at t = 0, 1, 2; p = (1, 0.6) with index 5 so that maximizers
    // through the side midpoints are the lexicographically first ones
    let pts = [
        MinkowskiPoint::new(0.0, 0.0),
        MinkowskiPoint::new(1.0, 0.0),
        MinkowskiPoint::new(2.0, 0.0),
        MinkowskiPoint::new(0.5, 0.3),
        MinkowskiPoint::new(1.5, 0.3),
        MinkowskiPoint::new(1.0, 0.6),
    ];
    let fractions = [0.0, 0.49, 1.0];
    let flat = FiniteSpace::from_model(&Minkowski, &pts);
    let line = LineDescriptor::from_chain(&flat, vec![PointId(0), PointId(1), PointId(2)], 0).unwrap();
    let r = sides_equal_check(&flat, &line, 0.0, 2.0, &PointId(5), &fractions, 1e-9).unwrap();
    assert!(r.holds, "{r:?}");
    let mut bent = flat.clone();
    bent.set_tau(3, 2, flat.tau_at(3, 2) + 0.03);
    let r = sides_equal_check(&bent, &line, 0.0, 2.0, &PointId(5), &fractions, 1e-9).unwrap();
    assert!(!r.holds);
    assert!((r.max_tau_gap - 0.03).abs() < 1e-12, "{r:?}");
}

#[test]
fn randomized_alexandrov_configurations() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for convex in [true, false] {
        for _ in 0..50 {
            let a = random_across_data(&mut rng, convex);
            let r = verify_alexandrov_across(&a, 1e-12).unwrap();
            assert!(r.confirmed() && r.tau_condition == convex && !r.degenerate, "{a:?} {r:?}");
            let f = random_future_data(&mut rng, convex);
            let r = verify_alexandrov_future(&f, 1e-12).unwrap();
            assert!(r.confirmed() && r.tau_condition == convex && !r.degenerate, "{f:?} {r:?}");
        }
    }
}
