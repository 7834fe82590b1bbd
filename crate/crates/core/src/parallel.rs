//! Parallel timelike lines: the c-criterion, parallel realisations into
//! `R^{1,1}`, synchronization, uniqueness and weak transitivity.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{build_asymptote, busemann_value, join_asymptotic_line, AsymptoteOptions};
use crate::chains::{Direction, LineDescriptor, Realizers};
use crate::comparison::{vertex_angle, Sigma};
use crate::error::{Error, Result};
use crate::model::{tau_minkowski, MinkowskiPoint};
use crate::tol::EPS;

/// One entry of `c_ab` or `c_ba`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum CEntry {
    /// The pair is not causally related in the needed order.
    Undefined,
    Real(f64),
    /// Negative radicand; stores `sqrt(-radicand)`.
    Complex(f64),
}

impl CEntry {
    pub fn real(self) -> Option<f64> {
        match self {
            CEntry::Real(v) => Some(v),
            _ => None,
        }
    }
}

/// `c^N` at one parameter: the smallest sampled `t - s`, flagged when it sits
/// at the first grid point (the true infimum may lie below the sample).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CnEntry {
    pub value: Option<f64>,
    pub at_edge: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CSummary {
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub spread: f64,
}

impl CSummary {
    fn of(values: impl Iterator<Item = f64>) -> Option<Self> {
        let v: Vec<f64> = values.collect();
        if v.is_empty() {
            return None;
        }
        let min = v.iter().copied().fold(f64::INFINITY, f64::min);
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        Some(CSummary { count: v.len(), mean, min, max, spread: max - min })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CFunctionTable {
    /// Parameters of `alpha` (rows) and of `beta` (columns).
    pub s_params: Vec<f64>,
    pub t_params: Vec<f64>,
    /// Added to every `beta` parameter before evaluation.
    pub shift: f64,
    pub c_ab: Vec<Vec<CEntry>>,
    pub c_ba: Vec<Vec<CEntry>>,
    /// `c^N_{alpha+}(s)` for `s` in `s_params`.
    pub cn_a: Vec<CnEntry>,
    /// `c^N_{beta+}(t)` for `t` in `t_params`.
    pub cn_b: Vec<CnEntry>,
    /// Summaries of `c_ab`, `c_ba`, `c^N_{alpha+}`, `c^N_{beta+}` over defined
    /// real entries; edge-flagged `c^N` entries are left out.
    pub summary: [Option<CSummary>; 4],
    pub complex_entries: usize,
}

fn indices<P: Clone + std::fmt::Debug>(line: &LineDescriptor<P>, grid: &[f64]) -> Result<Vec<usize>> {
    grid.iter().map(|&u| line.index_of(u)).collect()
}

fn c_entry(dt: f64, tau: f64) -> CEntry {
    // the square root turns rounding in dt - tau into an error of sqrt(dt * ulp)
    let diff = if (dt - tau).abs() <= 1e-12 * (1.0 + dt.abs()) { 0.0 } else { dt - tau };
    let r = diff * (dt + tau);
    if r >= 0.0 {
        CEntry::Real(r.sqrt())
    } else if r >= -EPS * (1.0 + dt * dt) {
        CEntry::Real(0.0)
    } else {
        CEntry::Complex((-r).sqrt())
    }
}

fn table_with_shift<S>(
    space: &S,
    alpha: &LineDescriptor<S::Point>,
    beta: &LineDescriptor<S::Point>,
    s_grid: &[f64],
    t_grid: &[f64],
    shift: f64,
) -> Result<CFunctionTable>
where
    S: Realizers + Sync,
    S::Point: Send + Sync,
{
    let si = indices(alpha, s_grid)?;
    let ti = indices(beta, t_grid)?;
    let rows: Vec<(Vec<CEntry>, Vec<CEntry>)> = si
        .par_iter()
        .map(|&i| {
            let a = &alpha.points[i];
            let s = alpha.params[i];
            let mut ab = Vec::with_capacity(ti.len());
            let mut ba = Vec::with_capacity(ti.len());
            for &j in &ti {
                let b = &beta.points[j];
                let t = beta.params[j] + shift;
                ab.push(if space.leq(a, b) { c_entry(t - s, space.tau(a, b)) } else { CEntry::Undefined });
                ba.push(if space.leq(b, a) { c_entry(s - t, space.tau(b, a)) } else { CEntry::Undefined });
            }
            (ab, ba)
        })
        .collect();
    let (c_ab, c_ba): (Vec<_>, Vec<_>) = rows.into_iter().unzip();

    let cn = |from: &[usize], to: &[usize], fwd: bool| -> Vec<CnEntry> {
        from.par_iter()
            .map(|&i| {
                let mut best: Option<(usize, f64)> = None;
                for (k, &j) in to.iter().enumerate() {
                    let (x, y, s, t) = if fwd {
                        (&alpha.points[i], &beta.points[j], alpha.params[i], beta.params[j] + shift)
                    } else {
                        (&beta.points[i], &alpha.points[j], beta.params[i] + shift, alpha.params[j])
                    };
                    if space.leq(x, y) && best.is_none_or(|(_, v)| t - s < v) {
                        best = Some((k, t - s));
                    }
                }
                CnEntry { value: best.map(|b| b.1), at_edge: best.is_some_and(|b| b.0 == 0) }
            })
            .collect()
    };
    let cn_a = cn(&si, &ti, true);
    let cn_b = cn(&ti, &si, false);

    let reals = |t: &Vec<Vec<CEntry>>| CSummary::of(t.iter().flatten().filter_map(|e| e.real()));
    let cns = |v: &Vec<CnEntry>| CSummary::of(v.iter().filter(|e| !e.at_edge).filter_map(|e| e.value));
    let summary = [reals(&c_ab), reals(&c_ba), cns(&cn_a), cns(&cn_b)];
    let complex_entries =
        c_ab.iter().chain(&c_ba).flatten().filter(|e| matches!(e, CEntry::Complex(_))).count();
    Ok(CFunctionTable {
        s_params: si.iter().map(|&i| alpha.params[i]).collect(),
        t_params: ti.iter().map(|&j| beta.params[j]).collect(),
        shift,
        c_ab,
        c_ba,
        cn_a,
        cn_b,
        summary,
        complex_entries,
    })
}

/// Tables of the four c-functions of `alpha` and `beta` on the given parameter grids.
pub fn c_functions<S>(
    space: &S,
    alpha: &LineDescriptor<S::Point>,
    beta: &LineDescriptor<S::Point>,
    s_grid: &[f64],
    t_grid: &[f64],
) -> Result<CFunctionTable>
where
    S: Realizers + Sync,
    S::Point: Send + Sync,
{
    table_with_shift(space, alpha, beta, s_grid, t_grid, 0.0)
}

/// Least-squares time shift `b` of `beta` against `alpha`.
///
/// For a parallel pair realized as `(s, 0)` and `(t + b, c)`, every timelike
/// pair satisfies `tau^2 - (t - s)^2 = 2 b (t - s) + b^2 - c^2` whichever line
/// comes first, so `b` is half the slope of a linear fit.
pub fn fit_shift<S: Realizers>(space: &S, alpha: &LineDescriptor<S::Point>, beta: &LineDescriptor<S::Point>) -> f64 {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (a, &s) in alpha.points.iter().zip(&alpha.params) {
        for (b, &t) in beta.points.iter().zip(&beta.params) {
            let tau = if space.ll(a, b) {
                space.tau(a, b)
            } else if space.ll(b, a) {
                space.tau(b, a)
            } else {
                continue;
            };
            let x = t - s;
            xs.push(x);
            ys.push(tau * tau - x * x);
        }
    }
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return 0.0;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= EPS * n {
        return 0.0;
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    0.5 * sxy / sxx
}

/// The synchronized map `alpha(s) -> (s, 0)`, `beta(t) -> (t + shift, c)` and
/// how well it preserves the causal structure on the sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParallelRealisation {
    pub shift_b: f64,
    pub distance_c: f64,
    pub alpha_images: Vec<MinkowskiPoint>,
    pub beta_images: Vec<MinkowskiPoint>,
    /// Largest `|tau - tau_bar|` over sampled pairs outside the null band.
    pub tau_defect: f64,
    /// Pairs with `|tau^2 - tau_bar^2| > 2 tol (c + tol)`.
    pub tau_violations: usize,
    /// Pairs whose `<=` or `<<` differs from that of their images, outside the null band.
    pub relation_mismatches: usize,
    pub injective: bool,
    pub preserved: bool,
}

fn realise<S: Realizers>(
    space: &S,
    alpha: &LineDescriptor<S::Point>,
    beta: &LineDescriptor<S::Point>,
    shift: f64,
    c: f64,
    tol: f64,
    band: f64,
) -> ParallelRealisation {
    let alpha_images: Vec<MinkowskiPoint> = alpha.params.iter().map(|&s| MinkowskiPoint::new(s, 0.0)).collect();
    let beta_images: Vec<MinkowskiPoint> = beta.params.iter().map(|&t| MinkowskiPoint::new(t + shift, c)).collect();
    let pts: Vec<(&S::Point, MinkowskiPoint)> = alpha
        .points
        .iter()
        .zip(alpha_images.iter().copied())
        .chain(beta.points.iter().zip(beta_images.iter().copied()))
        .collect();
    let mut tau_defect = 0.0f64;
    let mut relation_mismatches = 0;
    let mut tau_violations = 0;
    let mut injective = true;
    for (i, (x, fx)) in pts.iter().enumerate() {
        for (y, fy) in &pts[i + 1..] {
            if fx == fy && space.dist(x, y) > EPS {
                injective = false;
            }
            for ((p, fp), (q, fq)) in [((x, fx), (y, fy)), ((y, fy), (x, fx))] {
                let dt = fq.t - fp.t;
                let dx = (fq.x - fp.x).abs();
                if (dt - dx).abs() <= band {
                    continue;
                }
                let img_leq = dt >= dx;
                if space.leq(p, q) != img_leq || space.ll(p, q) != (dt > dx) {
                    relation_mismatches += 1;
                    continue;
                }
                if img_leq {
                    let (t, tb) = (space.tau(p, q), tau_minkowski(*fp, *fq));
                    tau_defect = tau_defect.max((t - tb).abs());
                    // squared form: tau^2 - tau_bar^2 = c^2 - c_entry^2
                    if (t * t - tb * tb).abs() > 2.0 * tol * (c + tol) + EPS * (1.0 + tb * tb) {
                        tau_violations += 1;
                    }
                }
            }
        }
    }
    ParallelRealisation {
        shift_b: shift,
        distance_c: c,
        alpha_images,
        beta_images,
        tau_defect,
        tau_violations,
        relation_mismatches,
        injective,
        preserved: tau_violations == 0 && relation_mismatches == 0 && injective,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParallelVerdict {
    pub parallel: bool,
    pub distance_c: f64,
    pub shift: f64,
    pub table: CFunctionTable,
    pub realisation: Option<ParallelRealisation>,
    /// Human-readable reasons for a negative verdict.
    pub failures: Vec<String>,
}

fn max_gap(params: &[f64]) -> f64 {
    params.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

/// c-criterion test on all sampled parameters, with the shift fitted.
pub fn test_parallel<S>(
    space: &S,
    alpha: &LineDescriptor<S::Point>,
    beta: &LineDescriptor<S::Point>,
    tol: f64,
) -> Result<ParallelVerdict>
where
    S: Realizers + Sync,
    S::Point: Send + Sync,
{
    test_parallel_with_shift(space, alpha, beta, tol, None)
}

/// c-criterion test; `shift` forces the synchronization offset of `beta`.
pub fn test_parallel_with_shift<S>(
    space: &S,
    alpha: &LineDescriptor<S::Point>,
    beta: &LineDescriptor<S::Point>,
    tol: f64,
    shift: Option<f64>,
) -> Result<ParallelVerdict>
where
    S: Realizers + Sync,
    S::Point: Send + Sync,
{
    let shift = shift.unwrap_or_else(|| fit_shift(space, alpha, beta));
    let table = table_with_shift(space, alpha, beta, &alpha.params, &beta.params, shift)?;
    let cn_tol = tol + max_gap(&alpha.params).max(max_gap(&beta.params));
    let mut failures = Vec::new();
    let [ab, ba, na, nb] = table.summary;
    let reals: Vec<f64> = table.c_ab.iter().chain(&table.c_ba).flatten().filter_map(|e| e.real()).collect();
    let distance_c = if reals.is_empty() {
        na.or(nb).map(|s| s.mean).unwrap_or(f64::NAN)
    } else {
        reals.iter().sum::<f64>() / reals.len() as f64
    };
    if reals.is_empty() {
        failures.push("no defined real c entries".to_string());
    }
    for (name, sum, t) in [("c_ab", ab, tol), ("c_ba", ba, tol), ("cN_a", na, cn_tol), ("cN_b", nb, cn_tol)] {
        if let Some(s) = sum {
            if s.spread > t {
                failures.push(format!("{name} spread {:.3e} exceeds {t:.3e}", s.spread));
            }
            if (s.mean - distance_c).abs() > t {
                failures.push(format!("{name} mean {:.6} differs from {distance_c:.6}", s.mean));
            }
        }
    }
    let realisation = if failures.is_empty() {
        let r = realise(space, alpha, beta, shift, distance_c.max(0.0), tol, cn_tol);
        if !r.preserved {
            failures.push(format!(
                "realisation: {} tau violations, {} relation mismatches, injective {}",
                r.tau_violations, r.relation_mismatches, r.injective
            ));
        }
        Some(r)
    } else {
        None
    };
    Ok(ParallelVerdict { parallel: failures.is_empty(), distance_c, shift, table, realisation, failures })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrongCausalityReport {
    pub max_angle: f64,
    /// Largest `d(alpha(u), beta(u))` over shared parameters.
    pub max_gap: f64,
    pub forced_equal: bool,
    /// All angles vanish yet the realizers separate by more than the mesh.
    pub inconsistent: bool,
}

/// If every comparison angle at the common start vanishes, the two realizers
/// must coincide.
pub fn strong_causality_trick_check<S: Realizers>(
    space: &S,
    alpha: &LineDescriptor<S::Point>,
    beta: &LineDescriptor<S::Point>,
    tol_angle: f64,
    mesh: f64,
) -> Result<StrongCausalityReport> {
    if alpha.anchor != 0 || beta.anchor != 0 {
        return Err(Error::Precondition("realizers must be parametrized from their start".into()));
    }
    if space.dist(&alpha.points[0], &beta.points[0]) > EPS {
        return Err(Error::Precondition("realizers do not share their start".into()));
    }
    let mut max_angle = 0.0f64;
    for (a, &s) in alpha.points.iter().zip(&alpha.params).skip(1) {
        for (b, &t) in beta.points.iter().zip(&beta.params).skip(1) {
            let opp = if space.ll(a, b) {
                space.tau(a, b)
            } else if space.ll(b, a) {
                space.tau(b, a)
            } else {
                continue;
            };
            // the start is the earliest vertex
            max_angle = max_angle.max(vertex_angle(s, t, opp, Sigma::Minus)?);
        }
    }
    if max_angle > tol_angle {
        return Err(Error::Precondition(format!("comparison angle {max_angle:.3e} exceeds {tol_angle:.3e}")));
    }
    let mut max_gap = 0.0f64;
    for (a, &s) in alpha.points.iter().zip(&alpha.params) {
        if let Some(j) = beta.params.iter().position(|&t| (t - s).abs() <= 1e-9 * (1.0 + s.abs())) {
            max_gap = max_gap.max(space.dist(a, &beta.points[j]));
        }
    }
    let forced_equal = max_gap <= mesh;
    Ok(StrongCausalityReport { max_angle, max_gap, forced_equal, inconsistent: !forced_equal })
}

fn through<S: Realizers>(space: &S, line: &LineDescriptor<S::Point>, p: &S::Point) -> Option<usize> {
    line.points.iter().position(|q| space.dist(q, p) <= EPS)
}

/// Largest pointwise gap between two lines after aligning their parameters so
/// that `p` gets the same parameter on both; `None` if no parameters match.
fn aligned_gap<S: Realizers>(
    space: &S,
    a: &LineDescriptor<S::Point>,
    b: &LineDescriptor<S::Point>,
    offset: f64,
) -> Option<(f64, f64)> {
    let mut worst: Option<(f64, f64)> = None;
    for (x, &u) in a.points.iter().zip(&a.params) {
        let v = u - offset;
        if let Some(j) = b.params.iter().position(|&w| (w - v).abs() <= 1e-9 * (1.0 + v.abs())) {
            let g = space.dist(x, &b.points[j]);
            if worst.is_none_or(|(_, w)| g > w) {
                worst = Some((u, g));
            }
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub distinct_count: usize,
    /// Candidate index representing each class.
    pub representatives: Vec<usize>,
    /// More than one distinct parallel through the point.
    pub flagged: bool,
}

/// Groups candidate parallels to `alpha` through `p` by pointwise coincidence.
pub fn test_parallel_uniqueness<S>(
    space: &S,
    alpha: &LineDescriptor<S::Point>,
    p: &S::Point,
    candidates: &[LineDescriptor<S::Point>],
    tol: f64,
    mesh: f64,
) -> Result<UniquenessReport>
where
    S: Realizers + Sync,
    S::Point: Send + Sync,
{
    let mut at_p = Vec::with_capacity(candidates.len());
    for (k, c) in candidates.iter().enumerate() {
        let Some(i) = through(space, c, p) else {
            return Err(Error::Precondition(format!("candidate {k} does not pass through the point")));
        };
        let v = test_parallel(space, alpha, c, tol)?;
        if !v.parallel {
            return Err(Error::Precondition(format!("candidate {k} is not parallel: {}", v.failures.join("; "))));
        }
        at_p.push(c.params[i]);
    }
    let mut representatives: Vec<usize> = Vec::new();
    for k in 0..candidates.len() {
        let same = representatives.iter().any(|&r| {
            let offset = at_p[k] - at_p[r];
            aligned_gap(space, &candidates[k], &candidates[r], offset).is_some_and(|(_, g)| g <= mesh)
        });
        if !same {
            representatives.push(k);
        }
    }
    let distinct_count = representatives.len();
    Ok(UniquenessReport { distinct_count, representatives, flagged: distinct_count > 1 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyncReport {
    pub synchronized: bool,
    pub distance: f64,
    /// Fitted shift between the Busemann-parametrized asymptotic lines.
    pub free_shift: f64,
    pub busemann: (f64, f64),
    pub verdict: ParallelVerdict,
}

/// Asymptotic line through `p`, parametrized so that `p` sits at `b+(p)`.
pub fn busemann_asymptotic_line<S: Realizers>(
    space: &S,
    gamma: &LineDescriptor<S::Point>,
    p: &S::Point,
    horizons: &[f64],
    opts: &AsymptoteOptions,
    tol: f64,
) -> Result<(LineDescriptor<S::Point>, f64)> {
    let f = build_asymptote(space, gamma, p, Direction::Future, horizons, opts)?;
    let b = build_asymptote(space, gamma, p, Direction::Past, horizons, opts)?;
    let line = join_asymptotic_line(space, p, &f, &b, tol)?;
    let value = busemann_value(space, gamma, p, horizons, tol)?.value;
    Ok((line.shifted(value), value))
}

/// Asymptotic lines through `p` and `q` in Busemann parametrization are
/// synchronized parallel.
#[allow(clippy::too_many_arguments)]
pub fn test_two_asymptotes_synchronized<S>(
    space: &S,
    gamma: &LineDescriptor<S::Point>,
    p: &S::Point,
    q: &S::Point,
    horizons: &[f64],
    opts: &AsymptoteOptions,
    tol: f64,
) -> Result<SyncReport>
where
    S: Realizers + Sync,
    S::Point: Send + Sync,
{
    let (alpha, bp) = busemann_asymptotic_line(space, gamma, p, horizons, opts, tol)?;
    let (beta, bq) = busemann_asymptotic_line(space, gamma, q, horizons, opts, tol)?;
    let free_shift = fit_shift(space, &alpha, &beta);
    let verdict = test_parallel_with_shift(space, &alpha, &beta, tol, Some(0.0))?;
    Ok(SyncReport {
        synchronized: verdict.parallel && free_shift.abs() <= tol,
        distance: verdict.distance_c,
        free_shift,
        busemann: (bp, bq),
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitivityWitness {
    pub candidate: usize,
    /// Parameter on the candidate where the gap to `gamma` is largest.
    pub param: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitivityReport {
    pub holds: bool,
    pub witness: Option<TransitivityWitness>,
}

/// With `alpha || beta` and `beta || gamma`, every parallel to `alpha` through
/// `p` on `gamma` must be `gamma` itself.
#[allow(clippy::too_many_arguments)]
pub fn test_weak_transitivity<S>(
    space: &S,
    alpha: &LineDescriptor<S::Point>,
    beta: &LineDescriptor<S::Point>,
    gamma: &LineDescriptor<S::Point>,
    p: &S::Point,
    candidates: &[LineDescriptor<S::Point>],
    tol: f64,
    mesh: f64,
) -> Result<TransitivityReport>
where
    S: Realizers + Sync,
    S::Point: Send + Sync,
{
    for (name, x, y) in [("alpha, beta", alpha, beta), ("beta, gamma", beta, gamma)] {
        if !test_parallel(space, x, y, tol)?.parallel {
            return Err(Error::Precondition(format!("{name} are not parallel")));
        }
    }
    let Some(ig) = through(space, gamma, p) else {
        return Err(Error::Precondition("point is not on gamma".into()));
    };
    let mut found = false;
    let mut witness: Option<TransitivityWitness> = None;
    for (k, c) in candidates.iter().enumerate() {
        let Some(ic) = through(space, c, p) else { continue };
        if !test_parallel(space, alpha, c, tol)?.parallel {
            continue;
        }
        found = true;
        let offset = c.params[ic] - gamma.params[ig];
        let (param, gap) = aligned_gap(space, c, gamma, offset).unwrap_or((c.params[ic], 0.0));
        if gap > mesh && witness.is_none_or(|w| gap > w.gap) {
            witness = Some(TransitivityWitness { candidate: k, param, gap });
        }
    }
    if !found {
        return Err(Error::Precondition("no candidate parallel to alpha passes through the point".into()));
    }
    Ok(TransitivityReport { holds: witness.is_none(), witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{EuclideanSegment, Minkowski, ProductPoint, ProductSpace};

    fn vertical(x: f64, reach: i32) -> LineDescriptor<MinkowskiPoint> {
        let pts = (-reach..=reach).map(|t| MinkowskiPoint::new(t as f64, x)).collect();
        LineDescriptor::from_chain(&Minkowski, pts, reach as usize).unwrap()
    }

    #[test]
    fn product_verticals_at_distance_one() {
        let space = ProductSpace::new(EuclideanSegment::new(0.0, 1.0, 0.05).unwrap(), None);
        let line = |x: f64| {
            let pts = (-20..=20).map(|t| ProductPoint::new(t as f64 * 0.5, x)).collect();
            LineDescriptor::from_chain(&space, pts, 20).unwrap()
        };
        let v = test_parallel(&space, &line(0.0), &line(1.0), 1e-9).unwrap();
        assert!(v.parallel, "{:?}", v.failures);
        assert_eq!(v.shift, 0.0);
        for s in v.table.summary.iter().flatten() {
            assert!(s.spread <= 1e-9 && (s.mean - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn minkowski_verticals_and_boost() {
        let v = test_parallel(&Minkowski, &vertical(0.0, 10), &vertical(2.0, 10), 1e-9).unwrap();
        assert!(v.parallel);
        assert!((v.distance_c - 2.0).abs() < 1e-9);
        let phi: f64 = 0.3;
        let pts = (-10..=10).map(|k| MinkowskiPoint::new(k as f64 * phi.cosh(), 2.0 + k as f64 * phi.sinh())).collect();
        let boosted = LineDescriptor::from_chain(&Minkowski, pts, 10).unwrap();
        let v = test_parallel(&Minkowski, &vertical(0.0, 10), &boosted, 0.05).unwrap();
        assert!(!v.parallel);
    }

    #[test]
    fn shifted_parametrization_is_recovered() {
        let beta = vertical(1.5, 12).shifted(-0.75);
        let v = test_parallel(&Minkowski, &vertical(0.0, 12), &beta, 1e-9).unwrap();
        assert!(v.parallel, "{:?}", v.failures);
        assert!((v.shift - 0.75).abs() < 1e-9);
        assert!((v.distance_c - 1.5).abs() < 1e-9);
    }

    #[test]
    fn identical_lines() {
        let a = vertical(0.5, 8);
        let v = test_parallel(&Minkowski, &a, &a, 1e-12).unwrap();
        assert!(v.parallel && v.distance_c == 0.0 && v.shift == 0.0);
    }
}
