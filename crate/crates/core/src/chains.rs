//! Causal chains as discrete causal curves, the longest-chain maximizer and
//! line verification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{MetricFactor, Minkowski, MinkowskiPoint, ProductPoint, ProductSpace};
use crate::space::{FiniteSpace, LorentzSpace, PointId};
use crate::tol::EPS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Future,
    Past,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Future => 1.0,
            Direction::Past => -1.0,
        }
    }
}

/// Ordered points, consecutive ones causally related in `direction`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CausalChain<P> {
    pub points: Vec<P>,
    pub direction: Direction,
}

impl<P: Clone + std::fmt::Debug> CausalChain<P> {
    pub fn new<S: LorentzSpace<Point = P>>(space: &S, points: Vec<P>, direction: Direction) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidChain("a chain needs at least two points".into()));
        }
        let mut moves = false;
        for (i, w) in points.windows(2).enumerate() {
            let (a, b) = step(&w[0], &w[1], direction);
            if !space.leq(a, b) {
                return Err(Error::InvalidChain(format!("step {i} -> {} is not causal", i + 1)));
            }
            moves |= space.dist(a, b) > 0.0;
        }
        if !moves {
            return Err(Error::InvalidChain("chain is constant".into()));
        }
        Ok(CausalChain { points, direction })
    }

    pub fn future<S: LorentzSpace<Point = P>>(space: &S, points: Vec<P>) -> Result<Self> {
        Self::new(space, points, Direction::Future)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> &P {
        &self.points[0]
    }

    pub fn last(&self) -> &P {
        &self.points[self.points.len() - 1]
    }

    /// Same point set traversed the other way.
    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        let direction = match self.direction {
            Direction::Future => Direction::Past,
            Direction::Past => Direction::Future,
        };
        CausalChain { points, direction }
    }
}

/// Orders a pair so that the first element is in the causal past.
fn step<'a, P>(a: &'a P, b: &'a P, direction: Direction) -> (&'a P, &'a P) {
    match direction {
        Direction::Future => (a, b),
        Direction::Past => (b, a),
    }
}

fn step_tau<S: LorentzSpace>(space: &S, a: &S::Point, b: &S::Point, direction: Direction) -> f64 {
    let (p, q) = step(a, b, direction);
    space.tau(p, q)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainLengths {
    pub tau_length: f64,
    pub d_length: f64,
    /// `tau_length <= tau(first, last)`, the reverse triangle inequality.
    pub bounded_by_endpoints: bool,
}

pub fn chain_lengths<S: LorentzSpace>(space: &S, chain: &CausalChain<S::Point>) -> ChainLengths {
    let mut tau_length = 0.0;
    let mut d_length = 0.0;
    for w in chain.points.windows(2) {
        tau_length += step_tau(space, &w[0], &w[1], chain.direction);
        d_length += space.dist(&w[0], &w[1]);
    }
    let ends = step_tau(space, chain.first(), chain.last(), chain.direction);
    ChainLengths { tau_length, d_length, bounded_by_endpoints: tau_length <= ends + EPS * (1.0 + ends) }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximizerResult {
    pub value: f64,
    pub chain: Vec<PointId>,
    /// Number of chains attaining the value (within `EPS`).
    pub tie_count: u64,
    /// `value - tau(source, target)`; zero in a length space.
    pub intrinsic_defect: f64,
}

/// Points between `s` and `t` in a linear extension of `<=`.
fn interval_order(space: &FiniteSpace, s: usize, t: usize) -> Result<Vec<usize>> {
    let n = space.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if space.leq_at(i, j) && space.leq_at(j, i) {
                return Err(Error::NonCausal(i, j));
            }
        }
    }
    let mut v: Vec<usize> = (0..n).filter(|&v| space.leq_at(s, v) && space.leq_at(v, t)).collect();
    let below = |v: usize| v_count(space, v);
    v.sort_by_key(|&x| (below(x), x));
    Ok(v)
}

fn v_count(space: &FiniteSpace, v: usize) -> usize {
    (0..space.len()).filter(|&u| space.leq_at(u, v)).count()
}

fn check_related(space: &FiniteSpace, s: PointId, t: PointId) -> Result<()> {
    let n = space.len();
    if s.0 >= n || t.0 >= n {
        return Err(Error::Structural(format!("point id out of range 0..{n}")));
    }
    if !space.leq_at(s.0, t.0) {
        return Err(Error::NotRelated(s.to_string(), t.to_string()));
    }
    Ok(())
}

/// Longest causal chain from `source` to `target` by dynamic programming over
/// the `<=`-DAG. Ties go to the lexicographically smallest chain.
pub fn maximize_tau(space: &FiniteSpace, source: PointId, target: PointId) -> Result<MaximizerResult> {
    check_related(space, source, target)?;
    let (s, t) = (source.0, target.0);
    if s == t {
        return Ok(MaximizerResult { value: 0.0, chain: vec![source], tie_count: 1, intrinsic_defect: 0.0 });
    }
    let order = interval_order(space, s, t)?;
    let m = order.len();
    let tau = |a: usize, b: usize| space.tau_at(order[a], order[b]);
    let rel = |a: usize, b: usize| space.leq_at(order[a], order[b]);

    let mut f = vec![f64::NEG_INFINITY; m];
    f[0] = 0.0;
    for b in 1..m {
        for a in 0..b {
            if rel(a, b) && f[a] + tau(a, b) > f[b] {
                f[b] = f[a] + tau(a, b);
            }
        }
    }
    let mut g = vec![f64::NEG_INFINITY; m];
    g[m - 1] = 0.0;
    for a in (0..m - 1).rev() {
        for b in (a + 1)..m {
            if rel(a, b) && tau(a, b) + g[b] > g[a] {
                g[a] = tau(a, b) + g[b];
            }
        }
    }
    let value = f[m - 1];
    let slack = EPS * (1.0 + value.abs());
    let tight = |a: usize, b: usize| rel(a, b) && f[a] + tau(a, b) + g[b] >= value - slack;

    let mut count = vec![0u64; m];
    count[0] = 1;
    for b in 1..m {
        for a in 0..b {
            if count[a] > 0 && tight(a, b) {
                count[b] = count[b].saturating_add(count[a]);
            }
        }
    }
    let mut reaches = vec![false; m];
    reaches[m - 1] = true;
    for a in (0..m - 1).rev() {
        reaches[a] = ((a + 1)..m).any(|b| reaches[b] && tight(a, b));
    }
    let mut chain = vec![source];
    let mut cur = 0;
    while cur != m - 1 {
        let next = ((cur + 1)..m)
            .filter(|&b| reaches[b] && tight(cur, b))
            .min_by_key(|&b| order[b])
            .expect("a tight path to the target exists");
        chain.push(PointId(order[next]));
        cur = next;
    }
    Ok(MaximizerResult { value, chain, tie_count: count[m - 1], intrinsic_defect: value - space.tau_at(s, t) })
}

/// Exhaustive longest-chain search; the oracle for [`maximize_tau`].
pub fn brute_force_tau(space: &FiniteSpace, source: PointId, target: PointId) -> Result<f64> {
    const LIMIT: usize = 20;
    if space.len() > LIMIT {
        return Err(Error::TooLarge { n: space.len(), limit: LIMIT });
    }
    check_related(space, source, target)?;
    let (s, t) = (source.0, target.0);
    if s == t {
        return Ok(0.0);
    }
    fn walk(space: &FiniteSpace, cur: usize, t: usize, acc: f64, used: u32, best: &mut f64) {
        if cur == t {
            if acc > *best {
                *best = acc;
            }
            return;
        }
        for v in 0..space.len() {
            if used & (1 << v) != 0 || v == cur {
                continue;
            }
            if space.leq_at(cur, v) && space.leq_at(v, t) && !space.leq_at(v, cur) {
                walk(space, v, t, acc + space.tau_at(cur, v), used | (1 << v), best);
            }
        }
    }
    let mut best = f64::NEG_INFINITY;
    walk(space, s, t, 0.0, 1 << s, &mut best);
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineCheck {
    pub is_ray: bool,
    pub is_line: bool,
    /// First index pair `(i, j)` where `tau` is not additive.
    pub first_failure: Option<(usize, usize)>,
    pub tau_length: f64,
}

impl LineCheck {
    /// Completeness at desk scale: the chain reaches the declared horizon.
    pub fn reaches(&self, horizon: f64) -> bool {
        self.tau_length >= horizon
    }
}

fn additive(sum: f64, direct: f64) -> bool {
    (sum - direct).abs() <= EPS * (1.0 + sum.abs())
}

/// Verifies `tau`-additivity between every pair of chain points.
pub fn is_line<S: LorentzSpace>(space: &S, chain: &CausalChain<S::Point>) -> LineCheck {
    let pts = &chain.points;
    let n = pts.len();
    let mut prefix = vec![0.0; n];
    for i in 1..n {
        prefix[i] = prefix[i - 1] + step_tau(space, &pts[i - 1], &pts[i], chain.direction);
    }
    let is_ray = (1..n).all(|j| additive(prefix[j], step_tau(space, &pts[0], &pts[j], chain.direction)));
    let mut first_failure = None;
    'outer: for i in 0..n {
        for j in (i + 2)..n {
            if !additive(prefix[j] - prefix[i], step_tau(space, &pts[i], &pts[j], chain.direction)) {
                first_failure = Some((i, j));
                break 'outer;
            }
        }
    }
    LineCheck { is_ray, is_line: first_failure.is_none(), first_failure, tau_length: prefix[n - 1] }
}

/// Cumulative `tau`-arclength parameters of a timelike chain.
pub fn reparametrize_tau_arclength<S: LorentzSpace>(space: &S, chain: &CausalChain<S::Point>) -> Result<Vec<f64>> {
    let mut params = Vec::with_capacity(chain.len());
    params.push(0.0);
    for (i, w) in chain.points.windows(2).enumerate() {
        let (a, b) = step(&w[0], &w[1], chain.direction);
        if !space.ll(a, b) {
            return Err(Error::InvalidChain(format!("step {i} -> {} is null", i + 1)));
        }
        params.push(params[i] + space.tau(a, b));
    }
    Ok(params)
}

/// A verified timelike line, sampled at points with `tau`-arclength
/// parameters measured from the anchor point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineDescriptor<P> {
    pub points: Vec<P>,
    pub params: Vec<f64>,
    pub anchor: usize,
}

impl<P: Clone + std::fmt::Debug> LineDescriptor<P> {
    /// Checks that the future-directed sample is a line and parametrizes it.
    pub fn from_chain<S: LorentzSpace<Point = P>>(space: &S, points: Vec<P>, anchor: usize) -> Result<Self> {
        if anchor >= points.len() {
            return Err(Error::Structural(format!("anchor {anchor} outside 0..{}", points.len())));
        }
        let chain = CausalChain::future(space, points)?;
        let check = is_line(space, &chain);
        if let Some((i, j)) = check.first_failure {
            return Err(Error::Precondition(format!("not a line: tau is not additive between {i} and {j}")));
        }
        let cum = reparametrize_tau_arclength(space, &chain)?;
        let params = cum.iter().map(|c| c - cum[anchor]).collect();
        Ok(LineDescriptor { points: chain.points, params, anchor })
    }

    /// Assembles a line whose additivity was checked by the caller.
    pub(crate) fn from_parts(points: Vec<P>, params: Vec<f64>, anchor: usize) -> Self {
        LineDescriptor { points, params, anchor }
    }

    /// Same line with every parameter moved by `offset`.
    pub fn shifted(&self, offset: f64) -> Self {
        LineDescriptor {
            points: self.points.clone(),
            params: self.params.iter().map(|u| u + offset).collect(),
            anchor: self.anchor,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn anchor_point(&self) -> &P {
        &self.points[self.anchor]
    }

    /// Smallest and largest sampled parameter.
    pub fn extent(&self) -> (f64, f64) {
        (self.params[0], self.params[self.params.len() - 1])
    }

    /// Index of the sample at parameter `t`.
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let (lo, hi) = self.extent();
        let slack = EPS * (1.0 + t.abs());
        if t < lo - slack || t > hi + slack {
            return Err(Error::Precondition(format!("parameter {t} beyond the sampled line [{lo}, {hi}]")));
        }
        self.params
            .iter()
            .position(|&s| (s - t).abs() <= 1e-6 * (1.0 + t.abs()))
            .ok_or_else(|| Error::OutOfRange { value: t, lo, hi })
    }

    pub fn point_at(&self, t: f64) -> Result<&P> {
        Ok(&self.points[self.index_of(t)?])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchingViolation {
    pub source: PointId,
    pub target: PointId,
    /// Last shared point of the two maximizers.
    pub shared: PointId,
    /// Causally unrelated points on the two branches.
    pub branches: (PointId, PointId),
}

/// Looks for maximizers that share an initial segment and then separate.
///
/// For each pair the points on some maximizer are collected; two of them that
/// are causally unrelated but both timelike after a common interior maximizer
/// point witness branching.
pub fn check_nonbranching(space: &FiniteSpace, pairs: &[(PointId, PointId)]) -> Result<Vec<BranchingViolation>> {
    let mut out = Vec::new();
    for &(source, target) in pairs {
        check_related(space, source, target)?;
        let (s, t) = (source.0, target.0);
        let order = interval_order(space, s, t)?;
        let m = order.len();
        if m < 4 {
            continue;
        }
        let tau = |a: usize, b: usize| space.tau_at(order[a], order[b]);
        let mut f = vec![f64::NEG_INFINITY; m];
        f[0] = 0.0;
        let mut g = vec![f64::NEG_INFINITY; m];
        g[m - 1] = 0.0;
        for b in 1..m {
            for a in 0..b {
                if space.leq_at(order[a], order[b]) {
                    f[b] = f[b].max(f[a] + tau(a, b));
                }
            }
        }
        for a in (0..m - 1).rev() {
            for b in (a + 1)..m {
                if space.leq_at(order[a], order[b]) {
                    g[a] = g[a].max(tau(a, b) + g[b]);
                }
            }
        }
        let value = f[m - 1];
        let on_max: Vec<usize> =
            (1..m - 1).filter(|&v| (f[v] + g[v] - value).abs() <= EPS * (1.0 + value)).map(|v| order[v]).collect();
        'pair: for &w in &on_max {
            for &x in &on_max {
                if x == w || !space.ll_at(w, x) {
                    continue;
                }
                for &y in &on_max {
                    if y <= x || y == w || !space.ll_at(w, y) {
                        continue;
                    }
                    if !space.leq_at(x, y) && !space.leq_at(y, x) {
                        out.push(BranchingViolation {
                            source,
                            target,
                            shared: PointId(w),
                            branches: (PointId(x), PointId(y)),
                        });
                        break 'pair;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Access to maximizers between timelike related points.
pub trait Realizers: LorentzSpace {
    /// Point at `tau`-arclength fraction `lambda` in `[0, 1]` of a maximizer
    /// from `from` to `to`.
    fn realizer_point(&self, from: &Self::Point, to: &Self::Point, lambda: f64) -> Result<Self::Point>;

    /// Points at the given `tau`-arclength parameters along one maximizer.
    fn realizer_knots(&self, from: &Self::Point, to: &Self::Point, params: &[f64]) -> Result<Vec<Self::Point>> {
        let len = self.tau(from, to);
        params
            .iter()
            .map(|&u| self.realizer_point(from, to, if len > 0.0 { u / len } else { 0.0 }))
            .collect()
    }

    /// Closed-form asymptote to `line` through `p`, at signed `tau`-parameter `u`.
    fn asymptote_closed_form(&self, line: &[Self::Point], p: &Self::Point, u: f64) -> Option<Self::Point> {
        let _ = (line, p, u);
        None
    }

    /// Whether maximizers are sampled chains of the space itself.
    fn is_discrete(&self) -> bool {
        false
    }

    /// The whole maximizer from `from` to `to` when the space stores one
    /// explicitly.
    fn maximizer_chain(&self, from: &Self::Point, to: &Self::Point) -> Option<Result<Vec<Self::Point>>> {
        let _ = (from, to);
        None
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if (-EPS..=1.0 + EPS).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::OutOfRange { value: lambda, lo: 0.0, hi: 1.0 })
    }
}

impl Realizers for Minkowski {
    fn realizer_point(&self, from: &MinkowskiPoint, to: &MinkowskiPoint, lambda: f64) -> Result<MinkowskiPoint> {
        check_lambda(lambda)?;
        if !self.leq(from, to) {
            return Err(Error::NotRelated(from.to_string(), to.to_string()));
        }
        Ok(MinkowskiPoint::new(from.t + lambda * (to.t - from.t), from.x + lambda * (to.x - from.x)))
    }

    fn asymptote_closed_form(&self, line: &[MinkowskiPoint], p: &MinkowskiPoint, u: f64) -> Option<MinkowskiPoint> {
        let x0 = line.first()?.x;
        line.iter().all(|q| q.x == x0).then(|| MinkowskiPoint::new(p.t + u, p.x))
    }
}

impl<F: MetricFactor> Realizers for ProductSpace<F> {
    fn realizer_point(
        &self,
        from: &ProductPoint<F::Point>,
        to: &ProductPoint<F::Point>,
        lambda: f64,
    ) -> Result<ProductPoint<F::Point>> {
        check_lambda(lambda)?;
        if !self.leq(from, to) {
            return Err(Error::NotRelated(format!("{from:?}"), format!("{to:?}")));
        }
        self.segment_point(from, to, lambda)
            .ok_or_else(|| Error::Unsupported("factor has no geodesic evaluator".into()))
    }

    fn asymptote_closed_form(
        &self,
        line: &[ProductPoint<F::Point>],
        p: &ProductPoint<F::Point>,
        u: f64,
    ) -> Option<ProductPoint<F::Point>> {
        let x0 = &line.first()?.x;
        line.iter().all(|q| &q.x == x0).then(|| ProductPoint::new(p.t + u, p.x.clone()))
    }
}

impl Realizers for FiniteSpace {
    fn realizer_point(&self, from: &PointId, to: &PointId, lambda: f64) -> Result<PointId> {
        check_lambda(lambda)?;
        let len = self.tau(from, to);
        Ok(self.realizer_knots(from, to, &[lambda * len])?[0])
    }

    /// Picks, for each parameter, the first maximizer point whose cumulative
    /// `tau` reaches it.
    fn realizer_knots(&self, from: &PointId, to: &PointId, params: &[f64]) -> Result<Vec<PointId>> {
        let m = maximize_tau(self, *from, *to)?;
        let mut cum = vec![0.0];
        for w in m.chain.windows(2) {
            cum.push(cum.last().unwrap() + self.tau_at(w[0].0, w[1].0));
        }
        Ok(params
            .iter()
            .map(|&u| {
                let k = cum.iter().position(|&c| c >= u - EPS * (1.0 + u.abs())).unwrap_or(cum.len() - 1);
                m.chain[k]
            })
            .collect())
    }

    fn is_discrete(&self) -> bool {
        true
    }

    fn maximizer_chain(&self, from: &PointId, to: &PointId) -> Option<Result<Vec<PointId>>> {
        Some(maximize_tau(self, *from, *to).map(|m| m.chain))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{EuclideanSegment, MinkowskiPoint as M};

    fn mk(points: &[(f64, f64)]) -> CausalChain<M> {
        CausalChain::future(&Minkowski, points.iter().map(|&(t, x)| M::new(t, x)).collect()).unwrap()
    }

    fn table(n: usize, edges: &[(usize, usize, f64)]) -> FiniteSpace {
        let d = (0..n * n).map(|k| if k / n == k % n { 0.0 } else { 1.0 }).collect();
        let mut leq = vec![false; n * n];
        let mut ll = vec![false; n * n];
        let mut tau = vec![0.0; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(i, j, t) in edges {
            leq[i * n + j] = true;
            ll[i * n + j] = t > 0.0;
            tau[i * n + j] = t;
        }
        FiniteSpace::new(n, d, leq, ll, tau).unwrap()
    }

    #[test]
    fn lengths_of_minkowski_chains() {
        let l = chain_lengths(&Minkowski, &mk(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]));
        assert_eq!(l.tau_length, 2.0);
        let l = chain_lengths(&Minkowski, &mk(&[(0.0, 0.0), (1.0, 0.9), (2.0, 0.0)]));
        assert!((l.tau_length - 2.0 * 0.19f64.sqrt()).abs() < 1e-12);
        assert!(l.bounded_by_endpoints);
        let l = chain_lengths(&Minkowski, &mk(&[(0.0, 0.0), (2.0, 1.0)]));
        assert_eq!(l.tau_length, 3f64.sqrt());
    }

    #[test]
    fn constant_and_acausal_chains_are_rejected() {
        assert!(CausalChain::future(&Minkowski, vec![M::ORIGIN, M::ORIGIN]).is_err());
        assert!(CausalChain::future(&Minkowski, vec![M::ORIGIN, M::new(1.0, 2.0)]).is_err());
    }

    #[test]
    fn three_chain_tie() {
        let s = table(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 2.0)]);
        let r = maximize_tau(&s, PointId(0), PointId(2)).unwrap();
        assert_eq!(r.value, 2.0);
        assert_eq!(r.chain, vec![PointId(0), PointId(1), PointId(2)]);
        assert!(r.tie_count >= 2);
        assert_eq!(r.intrinsic_defect, 0.0);
        assert_eq!(brute_force_tau(&s, PointId(0), PointId(2)).unwrap(), 2.0);
    }

    #[test]
    fn diamond_prefers_longer_branch() {
        // a=0, b=1, b'=2, c=3
        let s = table(4, &[(0, 1, 1.0), (1, 3, 1.0), (0, 2, 0.5), (2, 3, 0.5), (0, 3, 2.0)]);
        let r = maximize_tau(&s, PointId(0), PointId(3)).unwrap();
        assert_eq!(r.value, 2.0);
        assert_eq!(r.chain, vec![PointId(0), PointId(1), PointId(3)]);
        assert_eq!(r.tie_count, 2);
    }

    #[test]
    fn maximizer_errors() {
        let s = table(3, &[(0, 1, 1.0)]);
        assert!(matches!(maximize_tau(&s, PointId(1), PointId(0)), Err(Error::NotRelated(..))));
        let c = table(2, &[(0, 1, 1.0), (1, 0, 1.0)]);
        assert!(matches!(maximize_tau(&c, PointId(0), PointId(1)), Err(Error::NonCausal(0, 1))));
        let big = table(21, &[]);
        assert!(matches!(brute_force_tau(&big, PointId(0), PointId(0)), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn line_checks() {
        let v = mk(&[(0.0, 0.3), (1.0, 0.3), (2.0, 0.3), (3.0, 0.3)]);
        let r = is_line(&Minkowski, &v);
        assert!(r.is_line && r.is_ray && r.first_failure.is_none());
        let kink = mk(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.5), (3.0, 0.5)]);
        let r = is_line(&Minkowski, &kink);
        assert_eq!(r.first_failure, Some((0, 2)));
        assert!(is_line(&Minkowski, &mk(&[(0.0, 0.0), (1.0, 0.5)])).is_line);
        let seg = ProductSpace::new(EuclideanSegment::new(0.0, 1.0, 0.05).unwrap(), None);
        let vert = CausalChain::future(&seg, (0..5).map(|k| ProductPoint::new(k as f64, 0.5)).collect()).unwrap();
        assert!(is_line(&seg, &vert).is_line);
    }

    #[test]
    fn tau_parameters() {
        let p = reparametrize_tau_arclength(&Minkowski, &mk(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)])).unwrap();
        assert_eq!(p, vec![0.0, 1.0, 2.0]);
        let p = reparametrize_tau_arclength(&Minkowski, &mk(&[(0.0, 0.0), (1.0, 0.5), (2.0, 1.0)])).unwrap();
        assert!((p[1] - 0.75f64.sqrt()).abs() < 1e-15 && (p[2] - 2.0 * 0.75f64.sqrt()).abs() < 1e-15);
        assert!(reparametrize_tau_arclength(&Minkowski, &mk(&[(0.0, 0.0), (1.0, 1.0), (3.0, 1.0)])).is_err());
    }

    #[test]
    fn hand_built_branching_is_reported() {
        // s=0, m=1, u=2, v=3, t=4; u and v unrelated
        let s = table(
            5,
            &[
                (0, 1, 1.0),
                (1, 2, 1.0),
                (1, 3, 1.0),
                (2, 4, 1.0),
                (3, 4, 1.0),
                (0, 2, 2.0),
                (0, 3, 2.0),
                (1, 4, 2.0),
                (0, 4, 3.0),
            ],
        );
        let v = check_nonbranching(&s, &[(PointId(0), PointId(4))]).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].shared, PointId(1));
        assert_eq!(v[0].branches, (PointId(2), PointId(3)));
        let single = table(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 2.0)]);
        assert!(check_nonbranching(&single, &[(PointId(0), PointId(2))]).unwrap().is_empty());
    }

    #[test]
    fn finite_realizer_knots_follow_the_maximizer() {
        let s = table(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 2.0)]);
        let k = s.realizer_knots(&PointId(0), &PointId(2), &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(k, vec![PointId(0), PointId(1), PointId(2)]);
    }
}
