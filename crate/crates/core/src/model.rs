//! Analytic model spaces: Minkowski `R^{1,1}` and Lorentzian products `R x X`
//! over a metric factor, with the product-specific checks.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::LorentzSpace;
use crate::tol::EPS;

/// `tau` of a product pair with time difference `dt` and factor distance `dist`.
///
/// Minkowski space and every product route through this function.
#[inline]
pub fn product_tau(dt: f64, dist: f64) -> f64 {
    if dt > dist {
        ((dt - dist) * (dt + dist)).sqrt()
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinkowskiPoint {
    pub t: f64,
    pub x: f64,
}

impl MinkowskiPoint {
    pub const ORIGIN: MinkowskiPoint = MinkowskiPoint { t: 0.0, x: 0.0 };

    pub fn new(t: f64, x: f64) -> Self {
        MinkowskiPoint { t, x }
    }
}

impl fmt::Display for MinkowskiPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.t, self.x)
    }
}

/// `dt >= dist`, with null pairs accepted up to rounding.
fn causal(dt: f64, dist: f64) -> bool {
    dt >= dist || crate::tol::close(dt, dist)
}

pub fn tau_minkowski(p: MinkowskiPoint, q: MinkowskiPoint) -> f64 {
    product_tau(q.t - p.t, (q.x - p.x).abs())
}

/// Two-dimensional Minkowski space.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Minkowski;

impl LorentzSpace for Minkowski {
    type Point = MinkowskiPoint;

    fn dist(&self, p: &MinkowskiPoint, q: &MinkowskiPoint) -> f64 {
        (q.t - p.t).hypot(q.x - p.x)
    }

    fn leq(&self, p: &MinkowskiPoint, q: &MinkowskiPoint) -> bool {
        causal(q.t - p.t, (q.x - p.x).abs())
    }

    fn ll(&self, p: &MinkowskiPoint, q: &MinkowskiPoint) -> bool {
        q.t - p.t > (q.x - p.x).abs()
    }

    fn tau(&self, p: &MinkowskiPoint, q: &MinkowskiPoint) -> f64 {
        tau_minkowski(*p, *q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorKind {
    EuclideanSegment,
    EuclideanPlaneSample,
    MetricGraph,
    ExplicitTable,
}

/// A metric space `(X, d)` with a finite sample.
pub trait MetricFactor {
    type Point: Clone + fmt::Debug + PartialEq;

    fn kind(&self) -> FactorKind;
    fn dist(&self, a: &Self::Point, b: &Self::Point) -> f64;
    fn sample(&self) -> Vec<Self::Point>;

    /// Declared net resolution: the sample is an `eta`-net of every closed ball
    /// within the declared bounds.
    fn eta(&self) -> f64;

    /// Point at fraction `lambda` of a minimizing geodesic from `a` to `b`.
    fn geodesic(&self, a: &Self::Point, b: &Self::Point, lambda: f64) -> Option<Self::Point> {
        let _ = (a, b, lambda);
        None
    }
}

/// The interval `[lo, hi]` sampled with spacing `mesh`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EuclideanSegment {
    pub lo: f64,
    pub hi: f64,
    pub mesh: f64,
}

impl EuclideanSegment {
    pub fn new(lo: f64, hi: f64, mesh: f64) -> Result<Self> {
        if !(hi > lo) || !(mesh > 0.0) {
            return Err(Error::Structural(format!("segment [{lo}, {hi}] with mesh {mesh}")));
        }
        Ok(EuclideanSegment { lo, hi, mesh })
    }

    /// Number of sample points.
    pub fn count(&self) -> usize {
        ((self.hi - self.lo) / self.mesh).round() as usize + 1
    }

    pub fn point(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.mesh
    }
}

impl MetricFactor for EuclideanSegment {
    type Point = f64;

    fn kind(&self) -> FactorKind {
        FactorKind::EuclideanSegment
    }

    fn dist(&self, a: &f64, b: &f64) -> f64 {
        (a - b).abs()
    }

    fn sample(&self) -> Vec<f64> {
        (0..self.count()).map(|i| self.point(i)).collect()
    }

    fn eta(&self) -> f64 {
        self.mesh
    }

    fn geodesic(&self, a: &f64, b: &f64, lambda: f64) -> Option<f64> {
        Some(a + lambda * (b - a))
    }
}

/// A finite sample of the Euclidean plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EuclideanPlane {
    pub points: Vec<[f64; 2]>,
    pub eta: f64,
}

impl MetricFactor for EuclideanPlane {
    type Point = [f64; 2];

    fn kind(&self) -> FactorKind {
        FactorKind::EuclideanPlaneSample
    }

    fn dist(&self, a: &[f64; 2], b: &[f64; 2]) -> f64 {
        (a[0] - b[0]).hypot(a[1] - b[1])
    }

    fn sample(&self) -> Vec<[f64; 2]> {
        self.points.clone()
    }

    fn eta(&self) -> f64 {
        self.eta
    }

    fn geodesic(&self, a: &[f64; 2], b: &[f64; 2], lambda: f64) -> Option<[f64; 2]> {
        Some([a[0] + lambda * (b[0] - a[0]), a[1] + lambda * (b[1] - a[1])])
    }
}

/// Point on a star graph: distance `r` from the centre along `leg`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphPoint {
    pub leg: usize,
    pub r: f64,
}

/// A star-shaped metric graph: `legs.len()` edges of the given lengths glued at a
/// common centre. Three legs give the tripod.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricGraph {
    pub legs: Vec<f64>,
    pub mesh: f64,
}

impl MetricGraph {
    pub fn tripod(length: f64, mesh: f64) -> Self {
        MetricGraph { legs: vec![length; 3], mesh }
    }

    pub fn point(&self, leg: usize, r: f64) -> GraphPoint {
        if r <= 0.0 {
            GraphPoint { leg: 0, r: 0.0 }
        } else {
            GraphPoint { leg, r }
        }
    }
}

impl MetricFactor for MetricGraph {
    type Point = GraphPoint;

    fn kind(&self) -> FactorKind {
        FactorKind::MetricGraph
    }

    fn dist(&self, a: &GraphPoint, b: &GraphPoint) -> f64 {
        if a.leg == b.leg {
            (a.r - b.r).abs()
        } else {
            a.r + b.r
        }
    }

    fn sample(&self) -> Vec<GraphPoint> {
        let mut out = vec![GraphPoint { leg: 0, r: 0.0 }];
        for (leg, &len) in self.legs.iter().enumerate() {
            let k = (len / self.mesh).round() as usize;
            out.extend((1..=k).map(|i| GraphPoint { leg, r: i as f64 * self.mesh }));
        }
        out
    }

    fn eta(&self) -> f64 {
        self.mesh
    }

    fn geodesic(&self, a: &GraphPoint, b: &GraphPoint, lambda: f64) -> Option<GraphPoint> {
        if a.leg == b.leg || a.r == 0.0 || b.r == 0.0 {
            let leg = if a.r == 0.0 { b.leg } else { a.leg };
            let ra = if a.leg == leg { a.r } else { 0.0 };
            let rb = if b.leg == leg { b.r } else { 0.0 };
            return Some(self.point(leg, ra + lambda * (rb - ra)));
        }
        let s = lambda * (a.r + b.r);
        Some(if s <= a.r { self.point(a.leg, a.r - s) } else { self.point(b.leg, s - a.r) })
    }
}

/// A metric given by an explicit distance table; points are indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableMetric {
    pub n: usize,
    pub d: Vec<f64>,
    pub eta: f64,
}

impl TableMetric {
    pub fn new(n: usize, d: Vec<f64>, eta: f64) -> Result<Self> {
        if d.len() != n * n {
            return Err(Error::Structural(format!("distance table has {} entries, expected {}", d.len(), n * n)));
        }
        Ok(TableMetric { n, d, eta })
    }

    /// Distance table of a point cloud on the real line.
    pub fn from_line(xs: &[f64], eta: f64) -> Self {
        let n = xs.len();
        let d = xs.iter().flat_map(|a| xs.iter().map(move |b| (a - b).abs())).collect();
        TableMetric { n, d, eta }
    }
}

impl MetricFactor for TableMetric {
    type Point = usize;

    fn kind(&self) -> FactorKind {
        FactorKind::ExplicitTable
    }

    fn dist(&self, a: &usize, b: &usize) -> f64 {
        self.d[a * self.n + b]
    }

    fn sample(&self) -> Vec<usize> {
        (0..self.n).collect()
    }

    fn eta(&self) -> f64 {
        self.eta
    }
}

/// Looks for a Cauchy sequence in `points` whose limit is missing.
///
/// Greedy nearest-neighbour walks whose gaps shrink at least geometrically
/// (ratio 1/2) below `eta` are candidates; such a walk is a witness unless some
/// sample point lies within the last gap of its final point.
pub fn cauchy_scan<P>(points: &[P], dist: impl Fn(&P, &P) -> f64, eta: f64) -> Option<Vec<usize>> {
    let n = points.len();
    for start in 0..n {
        let mut walk = vec![start];
        let mut gaps: Vec<f64> = Vec::new();
        loop {
            let cur = *walk.last().unwrap();
            let next = (0..n)
                .filter(|j| !walk.contains(j))
                .map(|j| (j, dist(&points[cur], &points[j])))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            let Some((j, g)) = next else { break };
            if let Some(&last) = gaps.last() {
                if g > 0.5 * last + EPS {
                    break;
                }
            }
            walk.push(j);
            gaps.push(g);
        }
        if walk.len() < 4 || *gaps.last().unwrap() >= eta {
            continue;
        }
        let end = *walk.last().unwrap();
        let last_gap = *gaps.last().unwrap();
        let has_limit = (0..n)
            .filter(|j| !walk.contains(j))
            .any(|j| dist(&points[end], &points[j]) <= last_gap + EPS);
        if !has_limit {
            return Some(walk);
        }
    }
    None
}

/// Uniform time grid `t_min, t_min + t_step, ..., t_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub t_step: f64,
}

impl TimeGrid {
    pub fn new(t_min: f64, t_max: f64, t_step: f64) -> Result<Self> {
        if !(t_max >= t_min) || !(t_step > 0.0) {
            return Err(Error::Structural(format!("time grid [{t_min}, {t_max}] step {t_step}")));
        }
        Ok(TimeGrid { t_min, t_max, t_step })
    }

    pub fn count(&self) -> usize {
        ((self.t_max - self.t_min) / self.t_step).round() as usize + 1
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count()).map(|k| self.t_min + k as f64 * self.t_step).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductPoint<X> {
    pub t: f64,
    pub x: X,
}

impl<X> ProductPoint<X> {
    pub fn new(t: f64, x: X) -> Self {
        ProductPoint { t, x }
    }
}

/// The Lorentzian product `R x X` with `tau = sqrt(dt^2 - d^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSpace<F> {
    pub factor: F,
    pub grid: Option<TimeGrid>,
}

impl<F: MetricFactor> ProductSpace<F> {
    pub fn new(factor: F, grid: Option<TimeGrid>) -> Self {
        ProductSpace { factor, grid }
    }

    /// Time grid times factor sample, time-major.
    pub fn sample(&self) -> Result<Vec<ProductPoint<F::Point>>> {
        let grid = self.grid.ok_or_else(|| Error::Precondition("product has no time grid".into()))?;
        let xs = self.factor.sample();
        Ok(grid
            .values()
            .into_iter()
            .flat_map(|t| xs.iter().cloned().map(move |x| ProductPoint { t, x }))
            .collect())
    }

    /// Point at fraction `lambda` of the straight product segment from `a` to `b`.
    pub fn segment_point(
        &self,
        a: &ProductPoint<F::Point>,
        b: &ProductPoint<F::Point>,
        lambda: f64,
    ) -> Option<ProductPoint<F::Point>> {
        let x = self.factor.geodesic(&a.x, &b.x, lambda)?;
        Some(ProductPoint { t: a.t + lambda * (b.t - a.t), x })
    }
}

impl<F: MetricFactor> LorentzSpace for ProductSpace<F> {
    type Point = ProductPoint<F::Point>;

    fn dist(&self, p: &Self::Point, q: &Self::Point) -> f64 {
        (q.t - p.t).hypot(self.factor.dist(&p.x, &q.x))
    }

    fn leq(&self, p: &Self::Point, q: &Self::Point) -> bool {
        causal(q.t - p.t, self.factor.dist(&p.x, &q.x))
    }

    fn ll(&self, p: &Self::Point, q: &Self::Point) -> bool {
        q.t - p.t > self.factor.dist(&p.x, &q.x)
    }

    fn tau(&self, p: &Self::Point, q: &Self::Point) -> f64 {
        product_tau(q.t - p.t, self.factor.dist(&p.x, &q.x))
    }
}

pub fn tau_product<F: MetricFactor>(
    space: &ProductSpace<F>,
    p: &ProductPoint<F::Point>,
    q: &ProductPoint<F::Point>,
) -> f64 {
    space.tau(p, q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CausalCharacter {
    /// Constant factor component, the degenerate `c = inf` branch.
    Vertical,
    Timelike,
    Null,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizerDiagnosis {
    pub is_realizer: bool,
    pub factor_is_minimizer: bool,
    pub time_component_affine: bool,
    /// Slope of time against factor arclength; infinite for vertical chains.
    pub speed_c: f64,
    pub character: Option<CausalCharacter>,
    /// Largest deviation of the time component from the affine fit.
    pub affine_deviation: f64,
    /// `tau` of the endpoints recomputed from `c` and the factor length.
    pub tau_closed_form: f64,
    /// `is_realizer == (factor_is_minimizer && time_component_affine)`.
    pub consistent: bool,
}

/// Tests a product chain against the characterization of distance realizers:
/// realizer iff the factor path is minimizing and time is affine in factor arclength.
///
/// `affine_tol` bounds the time deviation and the factor length excess; the
/// default is `2 (t_step + mesh)`.
pub fn check_realizer_characterization<F: MetricFactor>(
    space: &ProductSpace<F>,
    chain: &[ProductPoint<F::Point>],
    affine_tol: f64,
) -> Result<RealizerDiagnosis> {
    if chain.len() < 2 {
        return Err(Error::InvalidChain("need at least two points".into()));
    }
    for (i, w) in chain.windows(2).enumerate() {
        if !space.leq(&w[0], &w[1]) {
            return Err(Error::InvalidChain(format!("step {i} is not causal")));
        }
    }
    let first = &chain[0];
    let last = &chain[chain.len() - 1];
    let tau_sum: f64 = chain.windows(2).map(|w| space.tau(&w[0], &w[1])).sum();
    let tau_ends = space.tau(first, last);
    let is_realizer = (tau_ends - tau_sum).abs() <= EPS * (1.0 + tau_ends);

    let mut arclength = vec![0.0];
    for w in chain.windows(2) {
        let l = arclength.last().unwrap() + space.factor.dist(&w[0].x, &w[1].x);
        arclength.push(l);
    }
    let factor_len = *arclength.last().unwrap();
    let factor_ends = space.factor.dist(&first.x, &last.x);
    let factor_is_minimizer = factor_len - factor_ends <= affine_tol;
    let dt = last.t - first.t;

    let (speed_c, affine_deviation) = if factor_len <= EPS {
        (f64::INFINITY, 0.0)
    } else {
        let c = dt / factor_len;
        let dev = chain
            .iter()
            .zip(&arclength)
            .map(|(p, l)| (p.t - (first.t + c * l)).abs())
            .fold(0.0, f64::max);
        (c, dev)
    };
    let time_component_affine = affine_deviation <= affine_tol && speed_c >= 1.0 - EPS;
    let character = if !(factor_is_minimizer && time_component_affine) {
        None
    } else if speed_c.is_infinite() {
        Some(CausalCharacter::Vertical)
    } else if (speed_c - 1.0).abs() <= EPS {
        Some(CausalCharacter::Null)
    } else {
        Some(CausalCharacter::Timelike)
    };
    let tau_closed_form = if speed_c.is_infinite() {
        dt
    } else {
        dt * (1.0 - 1.0 / (speed_c * speed_c)).max(0.0).sqrt()
    };
    Ok(RealizerDiagnosis {
        is_realizer,
        factor_is_minimizer,
        time_component_affine,
        speed_c,
        character,
        affine_deviation,
        tau_closed_form,
        consistent: is_realizer == (factor_is_minimizer && time_component_affine),
    })
}

/// Non-total imprisonment in products: the `D`-length of a causal chain is at
/// most `sqrt(2)` times its time extent.
pub fn d_length_bound_holds<F: MetricFactor>(space: &ProductSpace<F>, chain: &[ProductPoint<F::Point>]) -> bool {
    if chain.len() < 2 {
        return true;
    }
    let len: f64 = chain.windows(2).map(|w| space.dist(&w[0], &w[1])).sum();
    let dt = chain[chain.len() - 1].t - chain[0].t;
    len <= std::f64::consts::SQRT_2 * dt + EPS * (1.0 + len)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobHypReport {
    pub proper_factor: bool,
    /// Every sampled diamond lies in `[r, t] x B_R(x)` with `R = 2|r| + 2|t|`.
    pub diamonds_bounded: bool,
    /// No sampled diamond has a factor projection with a missing Cauchy limit.
    pub diamonds_complete: bool,
    pub verdict_consistent: bool,
    /// Factor sample indices of a Cauchy walk without limit, if any.
    pub cauchy_witness: Option<Vec<usize>>,
    pub diamonds_checked: usize,
}

/// Checks that global hyperbolicity of the product (bounded and complete
/// causal diamonds) agrees with properness of the factor.
pub fn check_product_glob_hyp<F: MetricFactor>(
    space: &ProductSpace<F>,
    diamonds: &[(ProductPoint<F::Point>, ProductPoint<F::Point>)],
) -> Result<GlobHypReport> {
    let xs = space.factor.sample();
    let eta = space.factor.eta();
    let dist = |a: &F::Point, b: &F::Point| space.factor.dist(a, b);
    let cauchy_witness = cauchy_scan(&xs, dist, eta);
    let proper_factor = cauchy_witness.is_none();
    let sample = space.sample()?;
    let mut bounded = true;
    let mut complete = true;
    for (p, q) in diamonds {
        if !space.leq(p, q) {
            return Err(Error::NotRelated(format!("{p:?}"), format!("{q:?}")));
        }
        let r_bound = 2.0 * p.t.abs() + 2.0 * q.t.abs();
        let members: Vec<&ProductPoint<F::Point>> =
            sample.iter().filter(|m| space.leq(p, m) && space.leq(m, q)).collect();
        for m in &members {
            let inside = m.t >= p.t - EPS && m.t <= q.t + EPS && dist(&p.x, &m.x) <= r_bound + EPS;
            bounded &= inside;
        }
        let mut proj: Vec<F::Point> = Vec::new();
        for m in &members {
            if !proj.contains(&m.x) {
                proj.push(m.x.clone());
            }
        }
        if cauchy_scan(&proj, dist, eta).is_some() {
            complete = false;
        }
    }
    Ok(GlobHypReport {
        proper_factor,
        diamonds_bounded: bounded,
        diamonds_complete: complete,
        verdict_consistent: proper_factor == (bounded && complete),
        cauchy_witness,
        diamonds_checked: diamonds.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiamondBasisReport {
    pub epsilon: f64,
    pub members: usize,
    pub contained: bool,
}

/// The diamond basis construction: for `(b, y)` in `O = (a, c) x B_R(x)` the
/// diamond `I((b - e, y), (b + e, y))` with `e = min(b - a, c - b, R - d(x, y))`
/// lies in `O`. Containment is scanned over the product sample.
pub fn check_diamond_basis<F: MetricFactor>(
    space: &ProductSpace<F>,
    (a, c): (f64, f64),
    centre: &F::Point,
    radius: f64,
    witness: &ProductPoint<F::Point>,
) -> Result<DiamondBasisReport> {
    let b = witness.t;
    let dy = space.factor.dist(centre, &witness.x);
    if !(a < b && b < c) {
        return Err(Error::Precondition(format!("witness time {b} not inside ({a}, {c})")));
    }
    if dy > radius {
        return Err(Error::Precondition(format!("witness at distance {dy} outside ball of radius {radius}")));
    }
    let epsilon = (b - a).min(c - b).min(radius - dy);
    if epsilon <= 0.0 {
        return Err(Error::Degenerate("epsilon = 0 gives an empty diamond".into()));
    }
    let p = ProductPoint::new(b - epsilon, witness.x.clone());
    let q = ProductPoint::new(b + epsilon, witness.x.clone());
    let mut members = 0;
    let mut contained = true;
    for m in space.sample()? {
        if space.ll(&p, &m) && space.ll(&m, &q) {
            members += 1;
            contained &= a < m.t && m.t < c && space.factor.dist(centre, &m.x) < radius;
        }
    }
    Ok(DiamondBasisReport { epsilon, members, contained })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg() -> ProductSpace<EuclideanSegment> {
        ProductSpace::new(EuclideanSegment::new(0.0, 1.0, 0.05).unwrap(), Some(TimeGrid::new(0.0, 2.0, 0.05).unwrap()))
    }

    #[test]
    fn minkowski_values() {
        let o = MinkowskiPoint::ORIGIN;
        assert_eq!(tau_minkowski(o, MinkowskiPoint::new(2.0, 0.0)), 2.0);
        assert!((tau_minkowski(o, MinkowskiPoint::new(2.0, 1.0)) - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(tau_minkowski(o, MinkowskiPoint::new(1.0, 2.0)), 0.0);
    }

    #[test]
    fn product_values() {
        let s = seg();
        let p = ProductPoint::new(0.0, 0.0);
        let q = ProductPoint::new(2.0, 1.0);
        assert_eq!(tau_product(&s, &p, &q), tau_minkowski(MinkowskiPoint::new(0.0, 0.0), MinkowskiPoint::new(2.0, 1.0)));
        let a = ProductPoint::new(0.0, 0.0);
        let b = ProductPoint::new(1.0, 1.0);
        assert_eq!(s.tau(&a, &b), 0.0);
        assert!(s.leq(&a, &b) && !s.ll(&a, &b));
    }

    #[test]
    fn realizer_examples() {
        let s = seg();
        let tol = 2.0 * (0.05 + 0.05);
        let v: Vec<_> = (0..3).map(|k| ProductPoint::new(k as f64, 0.5)).collect();
        let r = check_realizer_characterization(&s, &v, tol).unwrap();
        assert!(r.is_realizer && r.factor_is_minimizer && r.time_component_affine);
        assert_eq!(r.character, Some(CausalCharacter::Vertical));

        let tilted = [ProductPoint::new(0.0, 0.0), ProductPoint::new(1.0, 0.5), ProductPoint::new(2.0, 1.0)];
        let r = check_realizer_characterization(&s, &tilted, tol).unwrap();
        assert!(r.is_realizer && r.consistent);
        assert!((r.speed_c - 2.0).abs() < 1e-12);
        assert!((r.tau_closed_form - s.tau(&tilted[0], &tilted[2])).abs() < 1e-12);

        let bent = [ProductPoint::new(0.0, 0.0), ProductPoint::new(1.0, 0.9), ProductPoint::new(2.0, 1.0)];
        let r = check_realizer_characterization(&s, &bent, tol).unwrap();
        assert!(!r.is_realizer && r.factor_is_minimizer && !r.time_component_affine && r.consistent);

        let spacelike = [ProductPoint::new(0.0, 0.0), ProductPoint::new(0.1, 1.0)];
        assert!(check_realizer_characterization(&s, &spacelike, tol).is_err());
    }

    #[test]
    fn tripod_geodesics_pass_through_centre() {
        let g = MetricGraph::tripod(1.0, 0.1);
        let a = g.point(0, 0.5);
        let b = g.point(1, 0.5);
        assert_eq!(g.dist(&a, &b), 1.0);
        let m = g.geodesic(&a, &b, 0.5).unwrap();
        assert_eq!(m.r, 0.0);
        let q = g.geodesic(&a, &b, 0.75).unwrap();
        assert_eq!((q.leg, q.r), (1, 0.25));
        assert_eq!(g.sample().len(), 31);
    }

    #[test]
    fn glob_hyp_on_segment() {
        let s = seg();
        let d = [(ProductPoint::new(0.0, 0.5), ProductPoint::new(2.0, 0.5))];
        let r = check_product_glob_hyp(&s, &d).unwrap();
        assert!(r.proper_factor && r.diamonds_bounded && r.diamonds_complete && r.verdict_consistent);
    }

    #[test]
    fn glob_hyp_detects_missing_limit() {
        let mut xs: Vec<f64> = (0..=8).map(|i| i as f64 * 0.05).collect();
        for k in 2..9 {
            xs.push(0.5 - 0.1 * 0.5f64.powi(k));
            xs.push(0.5 + 0.1 * 0.5f64.powi(k));
        }
        xs.extend((12..=20).map(|i| i as f64 * 0.05));
        let factor = TableMetric::from_line(&xs, 0.05);
        let centre = xs.len() - 9;
        let s = ProductSpace::new(factor, Some(TimeGrid::new(0.0, 2.0, 0.1).unwrap()));
        let d = [(ProductPoint::new(0.0, centre), ProductPoint::new(2.0, centre))];
        let r = check_product_glob_hyp(&s, &d).unwrap();
        assert!(!r.proper_factor);
        assert!(r.diamonds_bounded && !r.diamonds_complete && r.verdict_consistent);
    }

    #[test]
    fn diamond_basis_examples() {
        let s = seg();
        let r = check_diamond_basis(&s, (0.0, 2.0), &0.5, 1.0, &ProductPoint::new(1.0, 0.5)).unwrap();
        assert_eq!(r.epsilon, 1.0);
        assert!(r.contained && r.members > 0);
        assert!(matches!(
            check_diamond_basis(&s, (0.0, 2.0), &0.5, 1.0, &ProductPoint::new(2.0, 0.5)),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            check_diamond_basis(&s, (0.0, 2.0), &0.0, 0.5, &ProductPoint::new(1.0, 0.5)),
            Err(Error::Degenerate(_))
        ));
    }
}
