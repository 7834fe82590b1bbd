use lorentz_lab::asymptotics::*;
use lorentz_lab::chains::{Direction, LineDescriptor};
use lorentz_lab::model::EuclideanSegment;
use lorentz_lab::{Error, FiniteSpace, LorentzSpace, Minkowski, MinkowskiPoint, PointId, ProductPoint, ProductSpace};
use proptest::prelude::*;

type Seg = ProductSpace<EuclideanSegment>;

fn segment_space() -> Seg {
    ProductSpace::new(EuclideanSegment::new(0.0, 1.0, 0.05).unwrap(), None)
}

fn vertical_line(space: &Seg, x0: f64, reach: i32) -> LineDescriptor<ProductPoint<f64>> {
    let pts = (-reach..=reach).map(|t| ProductPoint::new(t as f64, x0)).collect();
    LineDescriptor::from_chain(space, pts, reach as usize).unwrap()
}

fn t_axis(reach: i32) -> LineDescriptor<MinkowskiPoint> {
    let pts = (-reach..=reach).map(|t| MinkowskiPoint::new(t as f64, 0.0)).collect();
    LineDescriptor::from_chain(&Minkowski, pts, reach as usize).unwrap()
}

fn horizons() -> Vec<f64> {
    geometric_horizons(2.0, 8)
}

/// Straight segments are the maximizers of a flat product, so knot `k` of the
/// maximizer from `(s, q)` to `(T, x0)` sits at `x = q + (x0 - q) k / tau`.
fn knot_oracle(s: f64, q: f64, x0: f64, big_t: f64, k: f64) -> f64 {
    let tau = ((big_t - s).powi(2) - (q - x0).powi(2)).sqrt();
    q + (x0 - q) * k / tau
}

#[test]
fn product_asymptote_is_vertical() {
    let space = segment_space();
    let line = vertical_line(&space, 0.2, 256);
    let p = ProductPoint::new(0.3, 0.9);
    let a = build_asymptote(&space, &line, &p, Direction::Future, &horizons(), &Default::default()).unwrap();
    assert!(a.is_timelike && a.stabilized);
    for (k, q) in a.limit.iter().enumerate() {
        assert!((q.x - knot_oracle(0.3, 0.9, 0.2, 256.0, k as f64)).abs() < 1e-12);
        // limit within one knot drift of the vertical through q
        assert!((q.x - 0.9).abs() <= 0.7 * 8.0 / 255.0 + 1e-12);
    }
    let exact = build_asymptote(&space, &line, &p, Direction::Past, &horizons(), &AsymptoteOptions::default().analytic())
        .unwrap();
    assert_eq!(exact.mode, LimitMode::Analytic);
    assert!(exact.limit.iter().enumerate().all(|(k, q)| q.x == 0.9 && q.t == 0.3 - k as f64));
}

#[test]
fn minkowski_asymptote_is_vertical() {
    let line = t_axis(256);
    let p = MinkowskiPoint::new(0.0, 1.0);
    let a = build_asymptote(&Minkowski, &line, &p, Direction::Future, &horizons(), &Default::default()).unwrap();
    // the family tilts toward the vertical: knot 8 drifts less with every horizon
    let drift: Vec<f64> = a.family.iter().filter(|m| m.points.len() > 8).map(|m| 1.0 - m.points[8].x).collect();
    assert!(drift.len() >= 2 && drift.windows(2).all(|w| w[1] < w[0]));
    assert!(a.is_timelike && a.stabilized);
}

#[test]
fn tcrc_on_models() {
    let space = segment_space();
    let line = vertical_line(&space, 0.5, 256);
    let probes: Vec<_> = [(0.0, 0.0), (1.5, 1.0), (-2.0, 0.7)].iter().map(|&(t, x)| ProductPoint::new(t, x)).collect();
    let r = check_tcrc(&space, &line, &probes, &horizons(), &Default::default()).unwrap();
    assert!(r.all_timelike && r.witnesses.is_empty());
    assert!(r.min_step_tau > 0.99);

    let mline = t_axis(256);
    let mprobes = vec![MinkowskiPoint::new(0.0, 1.0), MinkowskiPoint::new(3.0, -2.5)];
    let opts = AsymptoteOptions::default().analytic();
    let r = check_tcrc(&Minkowski, &mline, &mprobes, &horizons(), &opts).unwrap();
    assert!(r.all_timelike);
    assert_eq!(r.min_step_tau, 1.0);
}

/// A line `g_0..g_16` with a probe `p` whose longest chains to the far line
/// points may start with two null steps `p -> q1 -> q2`. The closure makes
/// those chains tie with direct timelike jumps; `q1, q2` get the smallest
/// indices so the lexicographic tie-break takes the null branch.
fn null_corner() -> (FiniteSpace, LineDescriptor<PointId>, PointId) {
    let n = 20;
    let (q1, q2, p) = (0, 1, 2);
    let g = |k: usize| 3 + k;
    let mut coords: Vec<(f64, f64)> = vec![(8.2, 0.6), (8.3, 0.7), (8.1, 0.5)];
    coords.extend((0..17).map(|k| (k as f64, 0.0)));
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            d[i * n + j] = ((coords[i].0 - coords[j].0).powi(2) + (coords[i].1 - coords[j].1).powi(2)).sqrt();
        }
    }
    let mut edges: Vec<(usize, usize, f64)> = (0..16).map(|k| (g(k), g(k + 1), 1.0)).collect();
    edges.extend([(g(8), p, 0.1), (p, q1, 0.0), (q1, q2, 0.0)]);
    for k in 9..17 {
        edges.push((p, g(k), (k - 8) as f64 - 0.6));
        edges.push((q2, g(k), (k - 8) as f64 - 0.3));
    }
    let space = FiniteSpace::closure(d, n, &edges).unwrap();
    let line = LineDescriptor::from_chain(&space, (0..17).map(|k| PointId(g(k))).collect(), 8).unwrap();
    (space, line, PointId(p))
}

#[test]
fn tcrc_reports_null_co_ray() {
    let (space, line, p) = null_corner();
    let hs = [2.0, 4.0, 8.0];
    let a = build_asymptote(&space, &line, &p, Direction::Future, &hs, &Default::default()).unwrap();
    assert_eq!(a.mode, LimitMode::Raw);
    assert_eq!(&a.limit[..3], &[p, PointId(0), PointId(1)]);
    assert!(!a.is_timelike);
    let r = check_tcrc(&space, &line, &[p], &hs, &Default::default()).unwrap();
    assert!(!r.all_timelike);
    let steps: Vec<(Direction, usize)> = r.witnesses.iter().map(|w| (w.direction, w.step)).collect();
    assert_eq!(steps, vec![(Direction::Future, 0), (Direction::Future, 1)]);
    assert!(r.witnesses.iter().all(|w| w.tau == 0.0));
}

#[test]
fn completeness_certificates() {
    let line = t_axis(256);
    let p = MinkowskiPoint::new(0.5, -1.0);
    let a = build_asymptote(&Minkowski, &line, &p, Direction::Future, &horizons(), &AsymptoteOptions::default().analytic())
        .unwrap();
    assert!(check_asymptote_complete(&Minkowski, &a, 4.0).unwrap());
    assert!(!check_asymptote_complete(&Minkowski, &a, 4.5).unwrap());

    let space = segment_space();
    let pline = vertical_line(&space, 0.0, 256);
    let pa = build_asymptote(&space, &pline, &ProductPoint::new(0.0, 0.5), Direction::Past, &horizons(), &Default::default())
        .unwrap();
    assert!(check_asymptote_complete(&space, &pa, 4.0).unwrap());

    let (fs, fline, fp) = null_corner();
    let null = build_asymptote(&fs, &fline, &fp, Direction::Future, &[2.0, 4.0], &Default::default()).unwrap();
    assert!(matches!(check_asymptote_complete(&fs, &null, 1.0), Err(Error::Precondition(_))));
}

#[test]
fn joined_lines_are_vertical() {
    let space = segment_space();
    let line = vertical_line(&space, 0.0, 256);
    let p = ProductPoint::new(0.0, 0.6);
    let opts = AsymptoteOptions::default();
    let f = build_asymptote(&space, &line, &p, Direction::Future, &horizons(), &opts).unwrap();
    let b = build_asymptote(&space, &line, &p, Direction::Past, &horizons(), &opts).unwrap();
    let joined = join_asymptotic_line(&space, &p, &f, &b, 1e-3).unwrap();
    assert_eq!(joined.len(), 17);
    assert_eq!(joined.anchor_point(), &p);
    assert!(joined.points.iter().all(|q| (q.x - 0.6).abs() < 0.02));
    assert!(matches!(join_asymptotic_line(&space, &p, &f, &b, 1e-6), Err(Error::InvalidChain(_))));

    let mline = t_axis(256);
    let mp = MinkowskiPoint::new(0.0, 3.0);
    let opts = opts.analytic();
    let f = build_asymptote(&Minkowski, &mline, &mp, Direction::Future, &horizons(), &opts).unwrap();
    let b = build_asymptote(&Minkowski, &mline, &mp, Direction::Past, &horizons(), &opts).unwrap();
    let joined = join_asymptotic_line(&Minkowski, &mp, &f, &b, 1e-12).unwrap();
    assert!(joined.points.iter().all(|q| q.x == 3.0));
}

#[test]
fn busemann_oracle_on_product() {
    let space = segment_space();
    let line = vertical_line(&space, 0.1, 256);
    for (s, q) in [(0.0, 0.1), (0.4, 0.5), (-1.25, 0.95), (2.0, 0.0)] {
        let p = ProductPoint::new(s, q);
        let est = busemann_value(&space, &line, &p, &horizons(), 1e-2).unwrap();
        let d: f64 = q - 0.1;
        let bound = d * d / (2.0 * (256.0 - s));
        assert!((est.value - s).abs() <= bound + 1e-12, "{s} {q}: {}", est.value);
        assert!(est.samples.windows(2).all(|w| w[1].1 <= w[0].1));
        assert!(est.converged);
    }
}

#[test]
fn increasing_samples_are_rejected() {
    // tau between line points grows faster than the parameter: not a Busemann-compatible table
    let n = 4;
    let d: Vec<f64> = (0..n * n).map(|k| if k / n == k % n { 0.0 } else { 1.0 }).collect();
    let mut tau = vec![0.0; n * n];
    let mut leq = vec![false; n * n];
    let set = |tau: &mut Vec<f64>, leq: &mut Vec<bool>, i: usize, j: usize, t: f64| {
        tau[i * n + j] = t;
        leq[i * n + j] = true;
    };
    for i in 0..n {
        leq[i * n + i] = true;
    }
    // line 0 < 1 < 2 with unit steps, probe 3 before 0
    for (i, j, t) in [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 2.0), (3, 0, 0.5), (3, 1, 1.5), (3, 2, 1.6)] {
        set(&mut tau, &mut leq, i, j, t);
    }
    let ll = tau.iter().map(|&t| t > 0.0).collect();
    let space = FiniteSpace::new(n, d, leq, ll, tau).unwrap();
    let line = LineDescriptor::from_chain(&space, vec![PointId(0), PointId(1), PointId(2)], 0).unwrap();
    assert!(space.ll(&PointId(3), &PointId(2)));
    let r = busemann_value(&space, &line, &PointId(3), &[1.0, 2.0], 1e-3);
    assert!(matches!(r, Err(Error::Precondition(_))));
}

#[test]
fn verticality_of_comparison_images() {
    let space = segment_space();
    let line = vertical_line(&space, 0.0, 512);
    let a = ProductPoint::new(0.0, 0.3);
    let b = ProductPoint::new(2.0, 0.7);
    let hs = geometric_horizons(4.0, 8);
    let r = check_verticality(&space, &line, &a, &b, &hs, 0.05, 0.0).unwrap();
    assert!(r.monotone);
    assert!(r.bound_ok && r.bound_checked >= 2);
    // the product is flat, so the planted image of gamma(T) is (T, -0.3)
    assert!((r.b_bar.x - 0.4).abs() < 1e-9);
    for s in &r.samples {
        assert!((s.ratio + 0.3 / s.horizon).abs() < 1e-6, "{s:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shift_covariance(s in -3.0f64..3.0, q in 0.0f64..1.0, k in 1usize..6) {
        let space = segment_space();
        let line = vertical_line(&space, 0.5, 256);
        let p = ProductPoint::new(s, q);
        let opts = AsymptoteOptions::default();
        let alpha = build_asymptote(&space, &line, &p, Direction::Future, &horizons(), &opts).unwrap();
        let shifted = build_asymptote(&space, &line, &alpha.limit[k], Direction::Future, &horizons(), &opts).unwrap();
        for (j, x) in shifted.limit.iter().enumerate().take(alpha.limit.len() - k) {
            prop_assert!(space.dist(x, &alpha.limit[j + k]) <= opts.stab_tol);
            prop_assert!((x.t - alpha.limit[j + k].t).abs() <= opts.stab_tol);
        }
    }

    #[test]
    fn asymptotes_stay_in_the_hull(s in -3.0f64..3.0, q in 0.0f64..1.0, future in any::<bool>()) {
        let space = segment_space();
        let line = vertical_line(&space, 0.0, 256);
        let dir = if future { Direction::Future } else { Direction::Past };
        let a = build_asymptote(&space, &line, &ProductPoint::new(s, q), dir, &horizons(), &Default::default()).unwrap();
        prop_assert!(a.limit.iter().all(|x| in_timelike_hull(&space, &line, x)));
    }

    #[test]
    fn busemann_along_asymptote(s in -3.0f64..3.0, q in 0.0f64..1.0) {
        let space = segment_space();
        let line = vertical_line(&space, 0.0, 256);
        let p = ProductPoint::new(s, q);
        let a = build_asymptote(&space, &line, &p, Direction::Future, &horizons(), &Default::default()).unwrap();
        let b0 = busemann_value(&space, &line, &p, &horizons(), 1.0).unwrap().value;
        for (x, u) in a.limit.iter().zip(&a.params) {
            let est = busemann_value(&space, &line, x, &horizons(), 1.0).unwrap();
            prop_assert!((est.value - (b0 + u)).abs() <= est.error_bound + a.movement + 1e-9);
        }
    }

    #[test]
    fn busemann_values_match_expansion(s in -4.0f64..4.0, q in 0.0f64..1.0) {
        let space = segment_space();
        let line = vertical_line(&space, 0.0, 256);
        let est = busemann_value(&space, &line, &ProductPoint::new(s, q), &horizons(), 1.0).unwrap();
        let bound = q * q / (2.0 * (256.0 - s));
        prop_assert!((est.value - s).abs() <= bound);
        // the raw last sample overshoots by at least half the bound
        prop_assert!(est.samples.last().unwrap().1 - s >= 0.5 * bound - 1e-12);
    }
}
