//! Asymptotes to a timelike line, the timelike co-ray condition, asymptotic
//! lines and Busemann values.
//!
//! An asymptote through `p` is the limit of maximizers from `p` to `gamma(t_n)`
//! for growing horizons `t_n`. At desk scale the limit is read off the
//! highest-horizon maximizer at fixed `tau`-parameter knots `0, h, 2h, ...`,
//! and the last two horizons certify that the knots have stopped moving.

use serde::{Deserialize, Serialize};

use crate::chains::{Direction, LineDescriptor, Realizers};
use crate::comparison::{locate_third, Oriented};
use crate::error::{Error, Result};
use crate::model::MinkowskiPoint;
use crate::tol::{Tolerances, EPS};

/// Geometric horizon schedule `t_1 * 2^(n-1)`, `n = 1..=count`.
pub fn geometric_horizons(t1: f64, count: usize) -> Vec<f64> {
    (0..count).map(|n| t1 * 2f64.powi(n as i32)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoteOptions {
    /// Knot spacing `h` in `tau`-arclength.
    pub step: f64,
    /// Parameter range of the limit chain; `None` means a 32nd of the highest horizon.
    pub extent: Option<f64>,
    /// Largest knot movement between the last two horizons that counts as stable.
    pub stab_tol: f64,
    /// Knot steps with `tau / step` at or below this are null-leaning.
    pub null_tol: f64,
    /// Use the closed-form asymptote when the space has one.
    pub analytic: bool,
}

impl AsymptoteOptions {
    pub fn for_tolerances(tol: &Tolerances) -> Self {
        AsymptoteOptions { step: 1.0, extent: None, stab_tol: tol.mesh, null_tol: tol.null, analytic: false }
    }

    pub fn analytic(mut self) -> Self {
        self.analytic = true;
        self
    }

    pub fn with_extent(mut self, extent: f64) -> Self {
        self.extent = Some(extent);
        self
    }
}

impl Default for AsymptoteOptions {
    fn default() -> Self {
        Self::for_tolerances(&Tolerances::default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitMode {
    Analytic,
    Knots,
    Raw,
}

/// One maximizer of the family, oriented away from the footpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyMember<P> {
    pub horizon: f64,
    pub target: P,
    pub points: Vec<P>,
    pub params: Vec<f64>,
    pub tau_length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoteResult<P> {
    pub footpoint: P,
    pub direction: Direction,
    pub family: Vec<FamilyMember<P>>,
    /// Horizons whose line point is not timelike related to the footpoint.
    pub skipped: Vec<f64>,
    /// Limit chain starting at the footpoint, oriented away from it.
    pub limit: Vec<P>,
    /// `tau`-parameters of the limit points, measured from the footpoint.
    pub params: Vec<f64>,
    pub mode: LimitMode,
    /// Largest knot movement between the two highest horizons.
    pub movement: f64,
    pub stabilized: bool,
    pub min_step_tau: f64,
    /// Indices `k` of limit steps `k -> k+1` that are null-leaning.
    pub null_steps: Vec<usize>,
    pub is_timelike: bool,
}

impl<P> AsymptoteResult<P> {
    pub fn highest(&self) -> &FamilyMember<P> {
        &self.family[self.family.len() - 1]
    }
}

/// Orders a pair so that the first element is in the causal past.
fn ordered<'a, P>(a: &'a P, b: &'a P, direction: Direction) -> (&'a P, &'a P) {
    match direction {
        Direction::Future => (a, b),
        Direction::Past => (b, a),
    }
}

/// `p` is timelike related to some past and some future point of the sample.
pub fn in_timelike_hull<S: Realizers>(space: &S, line: &LineDescriptor<S::Point>, p: &S::Point) -> bool {
    line.points.iter().any(|g| space.ll(g, p)) && line.points.iter().any(|g| space.ll(p, g))
}

fn check_horizons(horizons: &[f64]) -> Result<()> {
    if horizons.is_empty() {
        return Err(Error::Precondition("no horizons given".into()));
    }
    if horizons.iter().any(|&t| !(t > 0.0)) || horizons.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition("horizons must be positive and strictly increasing".into()));
    }
    Ok(())
}

fn member<S: Realizers>(
    space: &S,
    line: &LineDescriptor<S::Point>,
    p: &S::Point,
    direction: Direction,
    horizon: f64,
    reach: f64,
    step: f64,
) -> Result<FamilyMember<S::Point>> {
    let target = line.point_at(direction.sign() * horizon)?.clone();
    let (from, to) = ordered(p, &target, direction);
    if !space.ll(from, to) {
        return Err(Error::Precondition(format!("footpoint is not timelike related to gamma({})", direction.sign() * horizon)));
    }
    let len = space.tau(from, to);
    if let Some(chain) = space.maximizer_chain(from, to) {
        let mut points = chain?;
        if direction == Direction::Past {
            points.reverse();
        }
        let mut params = vec![0.0];
        for w in points.windows(2) {
            let (a, b) = ordered(&w[0], &w[1], direction);
            params.push(params.last().unwrap() + space.tau(a, b));
        }
        return Ok(FamilyMember { horizon, target, points, params, tau_length: len });
    }
    let count = (reach.min(len) / step + 1e-9).floor() as usize;
    let params: Vec<f64> = (0..=count).map(|k| k as f64 * step).collect();
    let points = match direction {
        Direction::Future => space.realizer_knots(p, &target, &params)?,
        Direction::Past => {
            let back: Vec<f64> = params.iter().map(|u| (len - u).max(0.0)).collect();
            space.realizer_knots(&target, p, &back)?
        }
    };
    Ok(FamilyMember { horizon, target, points, params, tau_length: len })
}

/// Builds the asymptote to `line` through `p` in `direction` from maximizers to
/// `gamma(+-t_n)`.
pub fn build_asymptote<S: Realizers>(
    space: &S,
    line: &LineDescriptor<S::Point>,
    p: &S::Point,
    direction: Direction,
    horizons: &[f64],
    opts: &AsymptoteOptions,
) -> Result<AsymptoteResult<S::Point>> {
    check_horizons(horizons)?;
    if !in_timelike_hull(space, line, p) {
        return Err(Error::Precondition("point is not in I(gamma)".into()));
    }
    let t_max = horizons[horizons.len() - 1];
    let extent = opts.extent.unwrap_or(t_max / 32.0).max(opts.step);
    let mut family = Vec::with_capacity(horizons.len());
    let mut skipped = Vec::new();
    for &t in horizons {
        let target = line.point_at(direction.sign() * t)?;
        let (from, to) = ordered(p, target, direction);
        if space.ll(from, to) {
            family.push(member(space, line, p, direction, t, extent, opts.step)?);
        } else {
            skipped.push(t);
        }
    }
    if family.is_empty() {
        return Err(Error::Precondition("footpoint is not timelike related to any horizon point".into()));
    }

    let top = &family[family.len() - 1];
    let closed = if opts.analytic { space.asymptote_closed_form(&line.points, p, 0.0) } else { None };
    let (mode, limit, params, movement) = if closed.is_some() {
        let count = (extent / opts.step + 1e-9).floor() as usize;
        let params: Vec<f64> = (0..=count).map(|k| k as f64 * opts.step).collect();
        let limit = params
            .iter()
            .map(|&u| space.asymptote_closed_form(&line.points, p, direction.sign() * u).expect("closed form exists"))
            .collect();
        (LimitMode::Analytic, limit, params, 0.0)
    } else {
        let mode = if space.is_discrete() { LimitMode::Raw } else { LimitMode::Knots };
        let movement = match family.len() {
            1 => f64::INFINITY,
            n => {
                let prev = &family[n - 2];
                // the last raw point is the target itself, which always moves
                let skip = usize::from(mode == LimitMode::Raw);
                let shared = prev.points.len().min(top.points.len()).saturating_sub(skip);
                let mut m = 0.0f64;
                for k in 0..shared {
                    m = m.max(space.dist(&prev.points[k], &top.points[k]));
                }
                if mode == LimitMode::Raw && prev.points.len() != top.points.len() {
                    m = f64::INFINITY;
                }
                m
            }
        };
        (mode, top.points.clone(), top.params.clone(), movement)
    };

    // knot steps are h long in tau-arclength; null_tol is per unit parameter
    let threshold = if mode == LimitMode::Raw { EPS } else { opts.null_tol * opts.step };
    let mut min_step_tau = f64::INFINITY;
    let mut null_steps = Vec::new();
    for (k, w) in limit.windows(2).enumerate() {
        let (a, b) = ordered(&w[0], &w[1], direction);
        let t = space.tau(a, b);
        min_step_tau = min_step_tau.min(t);
        if !space.ll(a, b) || t <= threshold {
            null_steps.push(k);
        }
    }
    let is_timelike = limit.len() >= 2 && null_steps.is_empty();
    Ok(AsymptoteResult {
        footpoint: p.clone(),
        direction,
        family,
        skipped,
        limit,
        params,
        mode,
        movement,
        stabilized: movement < opts.stab_tol,
        min_step_tau,
        null_steps,
        is_timelike,
    })
}

/// Point at `tau`-parameter `u >= 0` along the asymptote through `p`, read off
/// the highest horizon that is timelike related to `p`.
pub fn point_along_asymptote<S: Realizers>(
    space: &S,
    line: &LineDescriptor<S::Point>,
    p: &S::Point,
    direction: Direction,
    horizons: &[f64],
    opts: &AsymptoteOptions,
    u: f64,
) -> Result<S::Point> {
    check_horizons(horizons)?;
    if !in_timelike_hull(space, line, p) {
        return Err(Error::Precondition("point is not in I(gamma)".into()));
    }
    if opts.analytic {
        if let Some(q) = space.asymptote_closed_form(&line.points, p, direction.sign() * u) {
            return Ok(q);
        }
    }
    for &t in horizons.iter().rev() {
        let target = line.point_at(direction.sign() * t)?;
        let (from, to) = ordered(p, target, direction);
        if !space.ll(from, to) {
            continue;
        }
        let len = space.tau(from, to);
        if u > len {
            return Err(Error::OutOfRange { value: u, lo: 0.0, hi: len });
        }
        if let Some(chain) = space.maximizer_chain(from, to) {
            let mut points = chain?;
            if direction == Direction::Past {
                points.reverse();
            }
            let mut cum = 0.0;
            let slack = 1e-9 * (1.0 + u);
            for (k, w) in points.windows(2).enumerate() {
                if cum >= u - slack {
                    return Ok(points[k].clone());
                }
                let (a, b) = ordered(&w[0], &w[1], direction);
                cum += space.tau(a, b);
            }
            return Ok(points[points.len() - 1].clone());
        }
        let q = match direction {
            Direction::Future => space.realizer_knots(p, target, &[u])?,
            Direction::Past => space.realizer_knots(target, p, &[len - u])?,
        };
        return Ok(q[0].clone());
    }
    Err(Error::Precondition("footpoint is not timelike related to any horizon point".into()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TcrcWitness {
    pub probe: usize,
    pub direction: Direction,
    pub step: usize,
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TcrcReport {
    pub all_timelike: bool,
    pub witnesses: Vec<TcrcWitness>,
    pub min_step_tau: f64,
}

/// Builds both asymptotes at every probe and collects null-leaning steps.
pub fn check_tcrc<S: Realizers>(
    space: &S,
    line: &LineDescriptor<S::Point>,
    probes: &[S::Point],
    horizons: &[f64],
    opts: &AsymptoteOptions,
) -> Result<TcrcReport> {
    let mut witnesses = Vec::new();
    let mut min_step_tau = f64::INFINITY;
    for (i, p) in probes.iter().enumerate() {
        for direction in [Direction::Future, Direction::Past] {
            let a = build_asymptote(space, line, p, direction, horizons, opts)?;
            min_step_tau = min_step_tau.min(a.min_step_tau);
            if a.limit.len() < 2 {
                witnesses.push(TcrcWitness { probe: i, direction, step: 0, tau: 0.0 });
            }
            for &k in &a.null_steps {
                let (x, y) = ordered(&a.limit[k], &a.limit[k + 1], direction);
                witnesses.push(TcrcWitness { probe: i, direction, step: k, tau: space.tau(x, y) });
            }
        }
    }
    Ok(TcrcReport { all_timelike: witnesses.is_empty(), witnesses, min_step_tau })
}

fn cumulative_tau<S: Realizers>(space: &S, points: &[S::Point], direction: Direction) -> Vec<f64> {
    let mut cum = vec![0.0];
    for w in points.windows(2) {
        let (a, b) = ordered(&w[0], &w[1], direction);
        cum.push(cum.last().unwrap() + space.tau(a, b));
    }
    cum
}

/// Linear growth certificate: the limit chain gains at least `0.9 H` of
/// `tau`-length between parameters `H` and `2H`.
pub fn check_asymptote_complete<S: Realizers>(
    space: &S,
    result: &AsymptoteResult<S::Point>,
    horizon: f64,
) -> Result<bool> {
    if !result.is_timelike {
        return Err(Error::Precondition("asymptote is not timelike".into()));
    }
    if !(horizon > 0.0) {
        return Err(Error::Precondition("growth horizon must be positive".into()));
    }
    let slack = 1e-9 * (1.0 + horizon);
    let last = |bound: f64| result.params.iter().rposition(|&u| u <= bound + slack);
    let (Some(i1), Some(i2)) = (last(horizon), last(2.0 * horizon)) else {
        return Ok(false);
    };
    if result.params[i2] < 2.0 * horizon - slack {
        return Ok(false);
    }
    let cum = cumulative_tau(space, &result.limit, result.direction);
    Ok(cum[i2] - cum[i1] >= 0.9 * horizon)
}

/// Concatenates the past and future asymptotes through `p` and verifies
/// `tau`-additivity over all pairs, within `tol`.
pub fn join_asymptotic_line<S: Realizers>(
    space: &S,
    p: &S::Point,
    future: &AsymptoteResult<S::Point>,
    past: &AsymptoteResult<S::Point>,
    tol: f64,
) -> Result<LineDescriptor<S::Point>> {
    if future.direction != Direction::Future || past.direction != Direction::Past {
        return Err(Error::Precondition("expected one future and one past asymptote".into()));
    }
    if space.dist(&future.footpoint, p) > EPS || space.dist(&past.footpoint, p) > EPS {
        return Err(Error::Precondition("footpoints of the two asymptotes differ".into()));
    }
    if !future.is_timelike || !past.is_timelike {
        return Err(Error::Precondition("both asymptotes must be timelike".into()));
    }
    let mut points: Vec<S::Point> = past.limit.iter().rev().cloned().collect();
    let anchor = points.len() - 1;
    points.extend(future.limit[1..].iter().cloned());
    let cum = cumulative_tau(space, &points, Direction::Future);
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let defect = (space.tau(&points[i], &points[j]) - (cum[j] - cum[i])).abs();
            if defect > tol {
                return Err(Error::InvalidChain(format!("pair ({i}, {j}) violates tau-additivity by {defect:.3e}")));
            }
        }
    }
    let params = cum.iter().map(|c| c - cum[anchor]).collect();
    Ok(LineDescriptor::from_parts(points, params, anchor))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BusemannEstimate<P> {
    pub point: P,
    /// `(t, t - tau(p, gamma(t)))` per horizon.
    pub samples: Vec<(f64, f64)>,
    pub value: f64,
    /// Transverse distance `c` of the fitted parallel line.
    pub transverse: f64,
    pub error_bound: f64,
    pub converged: bool,
}

/// Estimates `b+(p) = lim (t - tau(p, gamma(t)))`. Horizons whose line point
/// is not in the timelike future of `p` are left out of the samples.
///
/// The samples decrease towards the limit. The last two are fitted exactly by
/// a line parallel to `gamma` at transverse distance `c`,
/// `tau = sqrt((t - b)^2 - c^2)`, whose remaining error beyond `t_max` is at
/// most `c^2 / (2 (t_max - b))`.
pub fn busemann_value<S: Realizers>(
    space: &S,
    line: &LineDescriptor<S::Point>,
    p: &S::Point,
    horizons: &[f64],
    tol: f64,
) -> Result<BusemannEstimate<S::Point>> {
    check_horizons(horizons)?;
    let mut used = Vec::with_capacity(horizons.len());
    let mut taus = Vec::with_capacity(horizons.len());
    for &t in horizons {
        let g = line.point_at(t)?;
        if space.ll(p, g) {
            used.push(t);
            taus.push(space.tau(p, g));
        }
    }
    if used.is_empty() {
        return Err(Error::Precondition("point is not in the timelike past of any horizon point".into()));
    }
    let horizons = &used[..];
    let samples: Vec<(f64, f64)> = horizons.iter().zip(&taus).map(|(&t, &tau)| (t, t - tau)).collect();
    for (k, w) in samples.windows(2).enumerate() {
        if w[1].1 > w[0].1 + EPS * (1.0 + w[1].0) {
            return Err(Error::Precondition(format!(
                "Busemann samples increase between horizons {} and {} ({} -> {})",
                k,
                k + 1,
                w[0].1,
                w[1].1
            )));
        }
    }
    let n = samples.len();
    let last = samples[n - 1].1;
    let t_max = horizons[n - 1];
    let (value, c2) = if n == 1 {
        (last, f64::INFINITY)
    } else {
        let (t1, t2) = (horizons[n - 2], horizons[n - 1]);
        let (a1, a2) = (taus[n - 2], taus[n - 1]);
        let b = 0.5 * (t1 + t2 - (a1 - a2) * (a1 + a2) / (t1 - t2));
        let b = b.min(last);
        (b, ((t2 - b) * (t2 - b) - a2 * a2).max(0.0))
    };
    let error_bound = if c2 == 0.0 { 0.0 } else { c2 / (2.0 * (t_max - value)) };
    Ok(BusemannEstimate {
        point: p.clone(),
        samples,
        value,
        transverse: c2.sqrt(),
        error_bound,
        converged: error_bound <= tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerticalitySample {
    pub horizon: f64,
    pub tau_a: f64,
    /// `|tau(a, c) - tau(b, c) - (t_b - t_a)|`.
    pub delta: f64,
    /// `x / t` of the comparison image of `c` relative to `a_bar`.
    pub ratio: f64,
    /// Rapidity of `a_bar c_bar` against the vertical.
    pub angle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerticalityReport {
    pub a_bar: MinkowskiPoint,
    pub b_bar: MinkowskiPoint,
    pub samples: Vec<VerticalitySample>,
    /// `|ratio|` is non-increasing in the horizon.
    pub monotone: bool,
    pub eps: f64,
    /// Every sample with `tau_a >= t_min` and `delta < cosh(eps) - 1` has `angle < eps`.
    pub bound_ok: bool,
    /// Number of samples the bound applied to.
    pub bound_checked: usize,
}

/// Plants `(a, b, gamma(T_n))` in `R^{1,1}` with `a_bar = (b+(a), 0)` and
/// `b_bar = (b+(b), c)`, the images of `gamma(T_n)` above the line `a_bar b_bar`,
/// and tracks how fast the direction `a_bar c_bar` turns vertical.
pub fn check_verticality<S: Realizers>(
    space: &S,
    line: &LineDescriptor<S::Point>,
    a: &S::Point,
    b: &S::Point,
    horizons: &[f64],
    eps: f64,
    t_min: f64,
) -> Result<VerticalityReport> {
    if !space.ll(a, b) {
        return Err(Error::Precondition("verticality needs a << b".into()));
    }
    let s0 = busemann_value(space, line, a, horizons, f64::INFINITY)?.value;
    let t0 = busemann_value(space, line, b, horizons, f64::INFINITY)?.value;
    let dt = t0 - s0;
    let tau_ab = space.tau(a, b);
    let a_bar = MinkowskiPoint::new(s0, 0.0);
    let b_bar = MinkowskiPoint::new(t0, ((dt - tau_ab) * (dt + tau_ab)).max(0.0).sqrt());
    let below = MinkowskiPoint::new(s0 - 1.0, 0.0);
    let mut samples = Vec::with_capacity(horizons.len());
    for &t in horizons {
        let c = line.point_at(t)?;
        let (tau_a, tau_b) = (space.tau(a, c), space.tau(b, c));
        let c_bar = locate_third(
            a_bar,
            b_bar,
            Oriented { tau: tau_a, future: true },
            Oriented { tau: tau_b, future: true },
            Some(below),
        )?;
        let (ct, cx) = (c_bar.t - a_bar.t, c_bar.x - a_bar.x);
        let ratio = cx / ct;
        samples.push(VerticalitySample {
            horizon: t,
            tau_a,
            delta: (tau_a - tau_b - dt).abs(),
            ratio,
            angle: ratio.abs().min(1.0 - f64::EPSILON).atanh(),
        });
    }
    let monotone = samples.windows(2).all(|w| w[1].ratio.abs() <= w[0].ratio.abs() + 1e-12);
    let gate = eps.cosh() - 1.0;
    let gated: Vec<&VerticalitySample> = samples.iter().filter(|s| s.tau_a >= t_min && s.delta < gate).collect();
    let bound_ok = !gated.is_empty() && gated.iter().all(|s| s.angle < eps);
    Ok(VerticalityReport {
        a_bar,
        b_bar,
        bound_checked: gated.len(),
        samples,
        monotone,
        eps,
        bound_ok,
    })
}
