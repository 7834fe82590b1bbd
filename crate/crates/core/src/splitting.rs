//! Spacelike slice, the splitting map `R x S -> X` and its corollaries.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{
    busemann_value, geometric_horizons, in_timelike_hull, point_along_asymptote, AsymptoteOptions,
};
use crate::chains::{is_line, CausalChain, Direction, LineDescriptor, Realizers};
use crate::error::{Error, Result};
use crate::model::product_tau;
use crate::parallel::{busemann_asymptotic_line, test_parallel_with_shift};
use crate::tol::{Tolerances, EPS};

/// Knobs shared by slice extraction, the splitting map and its checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplittingOptions {
    pub asymptote: AsymptoteOptions,
    pub horizons: Vec<f64>,
    pub busemann_tol: f64,
    pub parallel_tol: f64,
    /// Footpoints closer than this are the same member.
    pub dedup_radius: f64,
    /// Round-trip bound `2 (mesh + busemann)`; also the null band of the map check.
    pub bound: f64,
}

impl SplittingOptions {
    /// Knots every quarter unit; the limit chains reach at most
    /// `min(t_N / 32, mesh * t_N)` so their drift stays below the mesh.
    pub fn for_tolerances(tol: &Tolerances, horizons: Vec<f64>) -> Self {
        let t_n = horizons.last().copied().unwrap_or(1.0);
        let step = 0.25;
        let extent = (t_n / 32.0).min(tol.mesh * t_n).max(step);
        let asymptote = AsymptoteOptions { step, ..AsymptoteOptions::for_tolerances(tol) }.with_extent(extent);
        SplittingOptions {
            asymptote,
            horizons,
            busemann_tol: tol.busemann,
            parallel_tol: tol.parallel,
            dedup_radius: 0.5 * tol.mesh,
            bound: tol.splitting(),
        }
    }

    pub fn analytic(mut self) -> Self {
        self.asymptote.analytic = true;
        self
    }
}

impl Default for SplittingOptions {
    fn default() -> Self {
        Self::for_tolerances(&Tolerances::default(), geometric_horizons(2.0, 8))
    }
}

/// Square table of pairwise distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceTable {
    pub n: usize,
    pub d: Vec<f64>,
}

impl DistanceTable {
    pub fn new(n: usize, d: Vec<f64>) -> Result<Self> {
        if d.len() != n * n {
            return Err(Error::Structural(format!("distance table has {} entries, expected {}", d.len(), n * n)));
        }
        Ok(DistanceTable { n, d })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let d = (0..n * n).map(|k| if k / n == k % n { 0.0 } else { f(k / n, k % n) }).collect();
        DistanceTable { n, d }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    /// Largest `|d(i, j) - d(j, i)|`.
    pub fn symmetry_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Largest `d(i, k) - d(i, j) - d(j, k)` and how many triples exceed `tol`.
    pub fn triangle_excess(&self, tol: f64) -> (f64, usize) {
        let n = self.n;
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut worst = f64::NEG_INFINITY;
                let mut bad = 0;
                for j in 0..n {
                    for k in 0..n {
                        let e = self.get(i, k) - self.get(i, j) - self.get(j, k);
                        worst = worst.max(e);
                        if e > tol {
                            bad += 1;
                        }
                    }
                }
                (worst, bad)
            })
            .reduce(|| (f64::NEG_INFINITY, 0), |a, b| (a.0.max(b.0), a.1 + b.1))
    }
}

/// Distances between points of the hyperbolic plane given in polar
/// coordinates `(r, theta)` around a common centre.
pub fn hyperbolic_plane_table(points: &[(f64, f64)]) -> DistanceTable {
    DistanceTable::from_fn(points.len(), |i, j| {
        let (r1, a1) = points[i];
        let (r2, a2) = points[j];
        let c = r1.cosh() * r2.cosh() - r1.sinh() * r2.sinh() * (a1 - a2).cos();
        c.max(1.0).acosh()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub symmetry_defect: f64,
    pub worst_triangle_excess: f64,
    pub triangle_violations: usize,
    /// Relay chains `p_i <= alpha_k(d_ij + d_jk + slack)` that failed.
    pub relay_violations: usize,
    pub relay_checked: usize,
    /// Off-diagonal entries that vanish.
    pub zero_distances: usize,
    pub is_metric: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacelikeSlice<P> {
    /// Footpoints `alpha_p(0)`.
    pub members: Vec<P>,
    /// Busemann-parametrized asymptotic line through each member.
    pub lines: Vec<LineDescriptor<P>>,
    /// `b+` of each member.
    pub busemann: Vec<f64>,
    /// Member reached from each seed.
    pub seed_member: Vec<usize>,
    /// Member that is the footpoint of `gamma` itself.
    pub gamma_member: Option<usize>,
    pub d_s: DistanceTable,
    pub metric: MetricReport,
    /// Member pairs whose lines failed the c-criterion.
    pub nonparallel: Vec<(usize, usize)>,
}

impl<P> SpacelikeSlice<P> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Point of the asymptote through `p` at Busemann level 0, and `b+(p)`.
pub fn footpoint<S: Realizers>(
    space: &S,
    gamma: &LineDescriptor<S::Point>,
    p: &S::Point,
    opts: &SplittingOptions,
) -> Result<(S::Point, f64)> {
    let b = busemann_value(space, gamma, p, &opts.horizons, opts.busemann_tol)?.value;
    if b.abs() <= EPS {
        return Ok((p.clone(), b));
    }
    let direction = if b > 0.0 { Direction::Past } else { Direction::Future };
    let q = point_along_asymptote(space, gamma, p, direction, &opts.horizons, &opts.asymptote, b.abs())?;
    Ok((q, b))
}

fn nearest<P>(space: &impl Realizers<Point = P>, pool: &[P], q: &P) -> Option<(usize, f64)> {
    pool.iter()
        .enumerate()
        .map(|(i, m)| (i, space.dist(m, q)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

/// Index of the knot nearest to parameter `s`, if it lies within `tol`.
fn knot_near<P>(line: &LineDescriptor<P>, s: f64, tol: f64) -> Option<usize> {
    let (k, gap) = line
        .params
        .iter()
        .enumerate()
        .map(|(k, &u)| (k, (u - s).abs()))
        .min_by(|a, b| a.1.total_cmp(&b.1))?;
    (gap <= tol).then_some(k)
}

/// Footpoints of the asymptotes through the seeds, their lines and the
/// parallel-line distance between them.
pub fn extract_slice<S>(
    space: &S,
    gamma: &LineDescriptor<S::Point>,
    seeds: &[S::Point],
    opts: &SplittingOptions,
) -> Result<SpacelikeSlice<S::Point>>
where
    S: Realizers + Sync,
    S::Point: Send + Sync,
{
    if seeds.is_empty() {
        return Err(Error::Precondition("no seeds".into()));
    }
    let feet: Vec<(S::Point, f64)> = seeds
        .par_iter()
        .enumerate()
        .map(|(k, p)| {
            if !in_timelike_hull(space, gamma, p) {
                return Err(Error::Precondition(format!("seed {k} is not in I(gamma)")));
            }
            footpoint(space, gamma, p, opts)
        })
        .collect::<Result<_>>()?;

    let mut members: Vec<S::Point> = Vec::new();
    let mut seed_member = Vec::with_capacity(seeds.len());
    for (q, _) in feet {
        match nearest(space, &members, &q) {
            Some((i, d)) if d <= opts.dedup_radius => seed_member.push(i),
            _ => {
                seed_member.push(members.len());
                members.push(q);
            }
        }
    }

    let built: Vec<(LineDescriptor<S::Point>, f64)> = members
        .par_iter()
        .map(|m| busemann_asymptotic_line(space, gamma, m, &opts.horizons, &opts.asymptote, opts.parallel_tol))
        .collect::<Result<_>>()?;
    let (lines, busemann): (Vec<_>, Vec<_>) = built.into_iter().unzip();
    if let Some((i, b)) = busemann.iter().enumerate().find(|(_, b)| b.abs() > opts.busemann_tol) {
        return Err(Error::Precondition(format!("member {i} sits at Busemann level {b}, not 0")));
    }

    let n = members.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let verdicts: Vec<(f64, bool)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let v = test_parallel_with_shift(space, &lines[i], &lines[j], opts.parallel_tol, Some(0.0))?;
            Ok((v.distance_c, v.parallel))
        })
        .collect::<Result<_>>()?;
    let mut raw = vec![0.0; n * n];
    let mut nonparallel = Vec::new();
    for (&(i, j), &(c, ok)) in pairs.iter().zip(&verdicts) {
        raw[i * n + j] = c;
        if !ok && i < j {
            nonparallel.push((i, j));
        }
    }
    let raw = DistanceTable { n, d: raw };
    let symmetry_defect = raw.symmetry_defect();
    let d_s = DistanceTable::from_fn(n, |i, j| 0.5 * (raw.get(i, j) + raw.get(j, i)));

    let metric = metric_report(space, &members, &lines, &d_s, symmetry_defect, opts);
    let gamma_member = gamma
        .point_at(0.0)
        .ok()
        .and_then(|g| nearest(space, &members, g))
        .filter(|&(_, d)| d <= opts.dedup_radius)
        .map(|(i, _)| i);
    Ok(SpacelikeSlice { members, lines, busemann, seed_member, gamma_member, d_s, metric, nonparallel })
}

fn metric_report<S>(
    space: &S,
    members: &[S::Point],
    lines: &[LineDescriptor<S::Point>],
    d: &DistanceTable,
    symmetry_defect: f64,
    opts: &SplittingOptions,
) -> MetricReport
where
    S: Realizers + Sync,
    S::Point: Send + Sync,
{
    let n = d.n;
    let tol = opts.busemann_tol;
    let (worst, triangle_violations) = d.triangle_excess(tol);
    let zero_distances = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| i != j && d.get(i, j) <= EPS).count();
    let (relay_checked, relay_violations) = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut checked = 0;
            let mut bad = 0;
            for j in 0..n {
                for (k, line) in lines.iter().enumerate() {
                    let reach = d.get(i, j) + d.get(j, k) + tol;
                    if let Some(u) = line.params.iter().position(|&u| u >= reach) {
                        checked += 1;
                        if !space.leq(&members[i], &line.points[u]) {
                            bad += 1;
                        }
                    }
                }
            }
            (checked, bad)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    MetricReport {
        symmetry_defect,
        worst_triangle_excess: if n == 0 { 0.0 } else { worst },
        triangle_violations,
        relay_violations,
        relay_checked,
        zero_distances,
        is_metric: symmetry_defect <= opts.parallel_tol
            && triangle_violations == 0
            && relay_violations == 0
            && zero_distances == 0,
    }
}

/// Two map entries `(time index, member)` with the same sample image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuplicateImage {
    pub first: (usize, usize),
    pub second: (usize, usize),
    pub sample: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitVerification {
    /// Largest `|tau_X(f(u), f(v)) - tau(u, v)|` over pairs outside the null band.
    pub tau_defect: f64,
    /// Same over all pairs.
    pub tau_defect_all: f64,
    pub null_band: f64,
    pub pairs_checked: usize,
    pub band_skipped: usize,
    pub leq_mismatches: usize,
    /// Timelike related pairs within one level slice.
    pub achronal_violations: usize,
    /// Largest distance between `f(t, p_gamma)` and `gamma(t)`.
    pub gamma_defect: Option<f64>,
    /// Largest gap between a requested time and the knot used for it.
    pub knot_offset: f64,
    pub injective: bool,
    pub unmatched_images: usize,
    pub unmatched_samples: usize,
    pub bijective: bool,
    pub duplicate: Option<DuplicateImage>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplittingResult<P> {
    pub slice: SpacelikeSlice<P>,
    pub times: Vec<f64>,
    /// `images[a][i] = f(times[a], member i)`.
    pub images: Vec<Vec<P>>,
    pub verification: SplitVerification,
}

impl<P> SplittingResult<P> {
    pub fn image(&self, time: usize, member: usize) -> &P {
        &self.images[time][member]
    }
}

/// Tabulates `f(s, p) = alpha_p(s)` and checks it against `R x S` on all
/// pairs, and as a bijection onto the points of `sample` inside `I(gamma)`.
pub fn build_splitting_map<S>(
    space: &S,
    gamma: &LineDescriptor<S::Point>,
    slice: SpacelikeSlice<S::Point>,
    times: &[f64],
    sample: &[S::Point],
    opts: &SplittingOptions,
) -> Result<SplittingResult<S::Point>>
where
    S: Realizers + Sync,
    S::Point: Send + Sync,
{
    if times.is_empty() || slice.is_empty() {
        return Err(Error::Precondition("empty time grid or slice".into()));
    }
    let mut images = Vec::with_capacity(times.len());
    let mut knot_offset = 0.0f64;
    for &s in times {
        let mut row = Vec::with_capacity(slice.len());
        for (i, line) in slice.lines.iter().enumerate() {
            let k = knot_near(line, s, opts.busemann_tol)
                .ok_or_else(|| Error::Precondition(format!("time {s} is not a knot of the line of member {i}")))?;
            knot_offset = knot_offset.max((line.params[k] - s).abs());
            row.push(line.points[k].clone());
        }
        images.push(row);
    }

    let n = slice.len();
    let cells: Vec<(usize, usize)> = (0..times.len()).flat_map(|a| (0..n).map(move |i| (a, i))).collect();
    let band = opts.bound;
    let d = &slice.d_s;
    #[derive(Default, Clone, Copy)]
    struct Acc {
        tau: f64,
        tau_all: f64,
        checked: usize,
        skipped: usize,
        leq: usize,
        achronal: usize,
    }
    let acc = (0..cells.len())
        .into_par_iter()
        .map(|u| {
            let mut acc = Acc::default();
            for v in u + 1..cells.len() {
                let (mut a, mut i) = cells[u];
                let (mut b, mut j) = cells[v];
                if times[b] < times[a] {
                    std::mem::swap(&mut a, &mut b);
                    std::mem::swap(&mut i, &mut j);
                }
                let (p, q) = (&images[a][i], &images[b][j]);
                let dt = times[b] - times[a];
                let dist = d.get(i, j);
                let tau_x = space.tau(p, q);
                let gap = (tau_x - product_tau(dt, dist)).abs();
                acc.tau_all = acc.tau_all.max(gap);
                acc.checked += 1;
                if a == b && (space.ll(p, q) || space.ll(q, p)) {
                    acc.achronal += 1;
                }
                if (dt - dist).abs() <= band {
                    acc.skipped += 1;
                    continue;
                }
                acc.tau = acc.tau.max(gap);
                if space.leq(p, q) != (dt >= dist) || space.leq(q, p) {
                    acc.leq += 1;
                }
            }
            acc
        })
        .reduce(Acc::default, |x, y| Acc {
            tau: x.tau.max(y.tau),
            tau_all: x.tau_all.max(y.tau_all),
            checked: x.checked + y.checked,
            skipped: x.skipped + y.skipped,
            leq: x.leq + y.leq,
            achronal: x.achronal + y.achronal,
        });

    let gamma_defect = slice.gamma_member.map(|g| {
        times
            .iter()
            .enumerate()
            .filter_map(|(a, &s)| knot_near(gamma, s, opts.busemann_tol).map(|k| space.dist(&images[a][g], &gamma.points[k])))
            .fold(0.0, f64::max)
    });

    let targets: Vec<&S::Point> = sample.iter().filter(|x| in_timelike_hull(space, gamma, x)).collect();
    let matches: Vec<Option<usize>> = cells
        .par_iter()
        .map(|&(a, i)| {
            targets
                .iter()
                .enumerate()
                .map(|(k, x)| (k, space.dist(&images[a][i], x)))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .filter(|&(_, dist)| dist <= opts.bound)
                .map(|(k, _)| k)
        })
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; targets.len()];
    let mut duplicate = None;
    for (c, m) in matches.iter().enumerate() {
        if let Some(k) = *m {
            match owner[k] {
                Some(first) if duplicate.is_none() => {
                    duplicate = Some(DuplicateImage { first: cells[first], second: cells[c], sample: k });
                }
                Some(_) => {}
                None => owner[k] = Some(c),
            }
        }
    }
    let unmatched_images = matches.iter().filter(|m| m.is_none()).count();
    let unmatched_samples = owner.iter().filter(|o| o.is_none()).count();
    let injective = duplicate.is_none();
    let verification = SplitVerification {
        tau_defect: acc.tau,
        tau_defect_all: acc.tau_all,
        null_band: band,
        pairs_checked: acc.checked,
        band_skipped: acc.skipped,
        leq_mismatches: acc.leq,
        achronal_violations: acc.achronal,
        gamma_defect,
        knot_offset,
        injective,
        unmatched_images,
        unmatched_samples,
        bijective: injective && unmatched_images == 0 && unmatched_samples == 0,
        duplicate,
    };
    Ok(SplittingResult { slice, times: times.to_vec(), images, verification })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CauchyChain {
    pub spanning: bool,
    /// `b+` along the chain.
    pub busemann: Vec<f64>,
    /// Crossings of each level, empty when the chain does not span.
    pub crossings: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CauchyReport {
    pub levels: Vec<f64>,
    pub chains: Vec<CauchyChain>,
    pub not_spanning: usize,
    pub each_chain_hits_each_slice_once: bool,
}

/// Sign changes of `b - t` along the sequence; a run of on-level values
/// counts once.
fn crossings(values: &[f64], t: f64) -> usize {
    let band = EPS * (1.0 + t.abs());
    let mut count = 0;
    let mut prev = 0i8;
    let mut on_level = false;
    for &b in values {
        let s = if (b - t).abs() <= band { 0 } else if b > t { 1 } else { -1 };
        if s == 0 {
            if !on_level {
                count += 1;
            }
            on_level = true;
            continue;
        }
        if !on_level && prev != 0 && s != prev {
            count += 1;
        }
        on_level = false;
        prev = s;
    }
    count
}

/// Every spanning chain meets every level slice `b+ = t` exactly once.
pub fn check_cauchy_slices<S>(
    space: &S,
    gamma: &LineDescriptor<S::Point>,
    result: &SplittingResult<S::Point>,
    chains: &[Vec<S::Point>],
    opts: &SplittingOptions,
) -> Result<CauchyReport>
where
    S: Realizers + Sync,
    S::Point: Send + Sync,
{
    let levels = result.times.clone();
    let (lo, hi) = levels.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &t| (a.min(t), b.max(t)));
    let chains: Vec<CauchyChain> = chains
        .par_iter()
        .map(|chain| {
            let busemann: Vec<f64> = chain
                .iter()
                .map(|x| busemann_value(space, gamma, x, &opts.horizons, opts.busemann_tol).map(|e| e.value))
                .collect::<Result<_>>()?;
            let (bmin, bmax) = busemann.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
            let spanning = bmin <= lo && bmax >= hi;
            let crossings = if spanning { levels.iter().map(|&t| crossings(&busemann, t)).collect() } else { Vec::new() };
            Ok(CauchyChain { spanning, busemann, crossings })
        })
        .collect::<Result<_>>()?;
    let not_spanning = chains.iter().filter(|c| !c.spanning).count();
    let once = chains.iter().filter(|c| c.spanning).all(|c| c.crossings.iter().all(|&k| k == 1));
    Ok(CauchyReport { levels, chains, not_spanning, each_chain_hits_each_slice_once: once })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadrupleOptions {
    pub tol: f64,
    /// Above this many quadruples a seeded random subset is scanned.
    pub max_quadruples: usize,
    pub seed: u64,
}

impl Default for QuadrupleOptions {
    fn default() -> Self {
        QuadrupleOptions { tol: 1e-6, max_quadruples: 2_000_000, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceCurvatureReport {
    pub nonneg_curvature: bool,
    /// Largest angle sum minus `2 pi`.
    pub worst_excess: f64,
    /// `[centre, a, b, c]` of the worst quadruple.
    pub witness: Option<[usize; 4]>,
    pub quadruples_checked: usize,
    pub degenerate_skipped: usize,
}

/// Euclidean comparison angle at the vertex with adjacent sides `b`, `c`
/// opposite side `a`.
fn euclidean_angle(b: f64, c: f64, a: f64) -> f64 {
    ((b * b + c * c - a * a) / (2.0 * b * c)).clamp(-1.0, 1.0).acos()
}

/// Quadruple condition for curvature `>= 0`: at every centre `x` the three
/// Euclidean comparison angles spanned by `a, b, c` sum to at most `2 pi`.
pub fn check_slice_alexandrov(d: &DistanceTable, opts: &QuadrupleOptions) -> Result<SliceCurvatureReport> {
    let n = d.n;
    if n < 4 {
        return Err(Error::Precondition(format!("slice has {n} points, need at least 4")));
    }
    let full = n.saturating_mul((n - 1) * (n - 2) * (n - 3) / 6);
    let quads: Vec<[usize; 4]> = if full <= opts.max_quadruples {
        let mut v = Vec::with_capacity(full);
        for x in 0..n {
            for a in 0..n {
                for b in a + 1..n {
                    for c in b + 1..n {
                        if x != a && x != b && x != c {
                            v.push([x, a, b, c]);
                        }
                    }
                }
            }
        }
        v
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        (0..opts.max_quadruples)
            .map(|_| loop {
                let q = [rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)];
                if q[0] != q[1] && q[0] != q[2] && q[0] != q[3] && q[1] != q[2] && q[1] != q[3] && q[2] != q[3] {
                    break q;
                }
            })
            .collect()
    };
    let (worst, witness, checked, skipped) = quads
        .par_iter()
        .map(|&[x, a, b, c]| {
            let (xa, xb, xc) = (d.get(x, a), d.get(x, b), d.get(x, c));
            if xa <= EPS || xb <= EPS || xc <= EPS {
                return (f64::NEG_INFINITY, None, 0, 1);
            }
            let sum = euclidean_angle(xa, xb, d.get(a, b)) + euclidean_angle(xa, xc, d.get(a, c)) + euclidean_angle(xb, xc, d.get(b, c));
            (sum - 2.0 * PI, Some([x, a, b, c]), 1, 0)
        })
        .reduce(
            || (f64::NEG_INFINITY, None, 0, 0),
            |l, r| {
                let (w, q) = if r.0 > l.0 || (r.0 == l.0 && r.1 < l.1) { (r.0, r.1) } else { (l.0, l.1) };
                (w, q, l.2 + r.2, l.3 + r.3)
            },
        );
    Ok(SliceCurvatureReport {
        nonneg_curvature: worst <= opts.tol,
        worst_excess: if checked == 0 { 0.0 } else { worst },
        witness,
        quadruples_checked: checked,
        degenerate_skipped: skipped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeStatus {
    Extendible,
    NotExtendible,
    OutOfSample,
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TcProbe {
    pub status: ProbeStatus,
    pub reason: Option<String>,
    /// `f^{-1}` of each probe point: `(b+, member)`.
    pub preimage: Vec<(f64, usize)>,
    /// `d_S`-length of the factor component.
    pub factor_length: f64,
    pub limit_member: Option<usize>,
    /// Distance from the endpoint's footpoint to the limit member.
    pub limit_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TcReport {
    pub probes: Vec<TcProbe>,
    /// Every probe that is neither rejected nor out of sample is extendible.
    pub all_extendible: bool,
}

fn probe_verdict(status: ProbeStatus, reason: impl Into<String>) -> TcProbe {
    TcProbe {
        status,
        reason: Some(reason.into()),
        preimage: Vec::new(),
        factor_length: f64::NAN,
        limit_member: None,
        limit_gap: f64::NAN,
    }
}

/// Pulls each probe back through the splitting map and checks that its factor
/// component has finite length and a limit in the sampled slice.
pub fn check_tc_property<S>(
    space: &S,
    gamma: &LineDescriptor<S::Point>,
    result: &SplittingResult<S::Point>,
    probes: &[Vec<S::Point>],
    opts: &SplittingOptions,
) -> Result<TcReport>
where
    S: Realizers + Sync,
    S::Point: Send + Sync,
{
    let slice = &result.slice;
    let (lo, hi) = result.times.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &t| (a.min(t), b.max(t)));
    let probes: Vec<TcProbe> = probes
        .par_iter()
        .map(|probe| {
            if probe.len() < 2 {
                return probe_verdict(ProbeStatus::Rejected, "probe needs two points");
            }
            let chain = match CausalChain::future(space, probe.clone()) {
                Ok(c) => c,
                Err(e) => return probe_verdict(ProbeStatus::Rejected, e.to_string()),
            };
            if probe.windows(2).any(|w| !space.ll(&w[0], &w[1])) || is_line(space, &chain).first_failure.is_some() {
                return probe_verdict(ProbeStatus::Rejected, "not a timelike maximizing chain");
            }
            let mut preimage = Vec::with_capacity(probe.len());
            let mut gaps = Vec::with_capacity(probe.len());
            for x in probe {
                if !in_timelike_hull(space, gamma, x) {
                    return probe_verdict(ProbeStatus::OutOfSample, "probe leaves I(gamma)");
                }
                let (q, b) = match footpoint(space, gamma, x, opts) {
                    Ok(f) => f,
                    Err(e) => return probe_verdict(ProbeStatus::OutOfSample, e.to_string()),
                };
                if b < lo - opts.busemann_tol || b > hi + opts.busemann_tol {
                    return probe_verdict(ProbeStatus::OutOfSample, format!("time component {b} outside [{lo}, {hi}]"));
                }
                match nearest(space, &slice.members, &q) {
                    Some((i, gap)) if gap <= opts.dedup_radius => {
                        preimage.push((b, i));
                        gaps.push(gap);
                    }
                    _ => return probe_verdict(ProbeStatus::OutOfSample, "factor component leaves the slice"),
                }
            }
            if preimage.iter().all(|&(_, i)| i == preimage[0].1) {
                return probe_verdict(
                    ProbeStatus::Rejected,
                    "constant factor component: the probe lies on an asymptote of infinite tau-length",
                );
            }
            let factor_length: f64 = preimage.windows(2).map(|w| slice.d_s.get(w[0].1, w[1].1)).sum();
            let lipschitz = preimage
                .windows(2)
                .all(|w| slice.d_s.get(w[0].1, w[1].1) <= w[1].0 - w[0].0 + opts.bound);
            let last = preimage[preimage.len() - 1].1;
            let limit_gap = gaps[gaps.len() - 1];
            let status = if lipschitz && factor_length.is_finite() { ProbeStatus::Extendible } else { ProbeStatus::NotExtendible };
            TcProbe {
                status,
                reason: (!lipschitz).then(|| "factor component is not 1-Lipschitz in time".to_string()),
                preimage,
                factor_length,
                limit_member: Some(last),
                limit_gap,
            }
        })
        .collect();
    let all_extendible = probes
        .iter()
        .filter(|p| matches!(p.status, ProbeStatus::Extendible | ProbeStatus::NotExtendible))
        .all(|p| p.status == ProbeStatus::Extendible);
    Ok(TcReport { probes, all_extendible })
}
