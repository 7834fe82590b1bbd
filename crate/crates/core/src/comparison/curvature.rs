//! Timelike curvature bounds by `R^{1,1}` comparison: triangle comparison and
//! monotonicity of signed comparison angles.

use serde::{Deserialize, Serialize};

use super::cosines::{vertex_angle, SideTriple, Sigma};
use super::triangle::{realize_triangle, side_triple_of, tau_bar, ComparisonTriangle};
use crate::chains::Realizers;
use crate::error::{Error, Result};
use crate::space::LorentzSpace;
use crate::tol::EPS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMode {
    /// Non-negative curvature: `tau(p, q) <= tau_bar(p_bar, q_bar)`.
    Lower,
    /// Non-positive curvature: the reversed inequality.
    Upper,
}

/// A point on a triangle side, with its `tau`-arclength from the earlier end.
#[derive(Debug, Clone, PartialEq)]
pub struct Knot<P> {
    pub point: P,
    /// Vertex labels `(from, to)` with `from << to`.
    pub side: (usize, usize),
    pub param: f64,
}

/// A timelike triangle together with sample points on its sides.
#[derive(Debug, Clone)]
pub struct SampledTriangle<P> {
    pub vertices: [P; 3],
    pub sides: SideTriple,
    pub knots: Vec<Knot<P>>,
}

fn side_pairs(order: [usize; 3]) -> [(usize, usize); 3] {
    let [e, m, l] = order;
    [(e, m), (m, l), (e, l)]
}

impl<P: Clone + std::fmt::Debug> SampledTriangle<P> {
    /// Sides are maximizers supplied by the space; knots at the given fractions.
    pub fn from_realizers<S>(space: &S, vertices: [P; 3], fractions: &[f64]) -> Result<Self>
    where
        S: Realizers<Point = P>,
    {
        let sides = side_triple_of(space, [&vertices[0], &vertices[1], &vertices[2]])?;
        let mut knots = Vec::new();
        for (from, to) in side_pairs(sides.order) {
            let len = sides.side(from, to);
            let params: Vec<f64> = fractions.iter().map(|f| f * len).collect();
            let pts = space.realizer_knots(&vertices[from], &vertices[to], &params)?;
            for point in pts {
                let param = space.tau(&vertices[from], &point);
                knots.push(Knot { point, side: (from, to), param });
            }
        }
        Ok(SampledTriangle { vertices, sides, knots })
    }

    /// Sides given as explicit chains `[x_e -> x_m, x_m -> x_l, x_e -> x_l]`
    /// in time order; each must be a maximizer.
    pub fn from_chains<S>(space: &S, vertices: [P; 3], chains: [Vec<P>; 3]) -> Result<Self>
    where
        S: LorentzSpace<Point = P>,
    {
        let sides = side_triple_of(space, [&vertices[0], &vertices[1], &vertices[2]])?;
        let mut knots = Vec::new();
        for ((from, to), chain) in side_pairs(sides.order).into_iter().zip(chains) {
            let len = sides.side(from, to);
            let mut acc = 0.0;
            for (i, point) in chain.iter().enumerate() {
                if i > 0 {
                    acc += space.tau(&chain[i - 1], point);
                }
                knots.push(Knot { point: point.clone(), side: (from, to), param: acc });
            }
            if (acc - len).abs() > EPS * (1.0 + len) {
                return Err(Error::Precondition(format!(
                    "side {from}-{to} is not maximizing: length {acc} < tau {len}"
                )));
            }
        }
        Ok(SampledTriangle { vertices, sides, knots })
    }

    pub fn comparison(&self) -> Result<ComparisonTriangle> {
        realize_triangle(&self.sides)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureWitness {
    pub triangle: usize,
    pub knots: (usize, usize),
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub mode: BoundMode,
    pub pass: bool,
    /// Signed `tau(p, q) - tau_bar(p_bar, q_bar)` of the worst pair.
    pub worst_defect: f64,
    pub witness: Option<CurvatureWitness>,
    pub pairs: usize,
}

/// Compares `tau` between all knot pairs with their comparison points.
pub fn test_curvature<S: LorentzSpace>(
    space: &S,
    triangles: &[SampledTriangle<S::Point>],
    mode: BoundMode,
    tol: f64,
) -> Result<CurvatureReport> {
    let sign = match mode {
        BoundMode::Lower => 1.0,
        BoundMode::Upper => -1.0,
    };
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    let mut pairs = 0;
    for (ti, tri) in triangles.iter().enumerate() {
        let cmp = tri.comparison()?;
        let bars = tri
            .knots
            .iter()
            .map(|k| cmp.point_on(k.side.0, k.side.1, k.param))
            .collect::<Result<Vec<_>>>()?;
        for i in 0..tri.knots.len() {
            for j in 0..tri.knots.len() {
                if i == j {
                    continue;
                }
                let real = space.tau(&tri.knots[i].point, &tri.knots[j].point);
                let bar = crate::model::tau_minkowski(bars[i], bars[j]);
                let d = sign * (real - bar);
                pairs += 1;
                if d > worst {
                    worst = d;
                    witness = Some(CurvatureWitness { triangle: ti, knots: (i, j), defect: real - bar });
                }
            }
        }
    }
    let worst_defect = witness.as_ref().map(|w| w.defect).unwrap_or(0.0);
    Ok(CurvatureReport { mode, pass: worst <= tol, worst_defect, witness, pairs })
}

pub fn test_curvature_lower0<S: LorentzSpace>(
    space: &S,
    triangles: &[SampledTriangle<S::Point>],
    tol: f64,
) -> Result<CurvatureReport> {
    test_curvature(space, triangles, BoundMode::Lower, tol)
}

pub fn test_curvature_upper0<S: LorentzSpace>(
    space: &S,
    triangles: &[SampledTriangle<S::Point>],
    tol: f64,
) -> Result<CurvatureReport> {
    test_curvature(space, triangles, BoundMode::Upper, tol)
}

/// Two timelike realizers leaving a common point, sampled at increasing
/// `tau`-parameters.
#[derive(Debug, Clone)]
pub struct Hinge<P> {
    pub apex: P,
    pub alpha: Vec<(P, f64)>,
    pub beta: Vec<(P, f64)>,
    pub alpha_future: bool,
    pub beta_future: bool,
}

impl<P: Clone + std::fmt::Debug> Hinge<P> {
    /// The hinge at vertex `v` formed by its two triangle sides.
    pub fn from_triangle(tri: &SampledTriangle<P>, v: usize) -> Result<Self> {
        let others: Vec<usize> = (0..3).filter(|&u| u != v).collect();
        let arm = |w: usize| -> (Vec<(P, f64)>, bool) {
            let future = tri.knots.iter().any(|k| k.side == (v, w));
            let len = tri.sides.side(v, w);
            let mut pts: Vec<(P, f64)> = tri
                .knots
                .iter()
                .filter(|k| k.side == (v, w) || k.side == (w, v))
                .map(|k| (k.point.clone(), if future { k.param } else { len - k.param }))
                .filter(|(_, s)| *s > EPS * (1.0 + len))
                .collect();
            pts.sort_by(|a, b| a.1.total_cmp(&b.1));
            (pts, future)
        };
        let (alpha, alpha_future) = arm(others[0]);
        let (beta, beta_future) = arm(others[1]);
        if alpha.is_empty() || beta.is_empty() {
            return Err(Error::Degenerate(format!("no knots on the sides at vertex {v}")));
        }
        Ok(Hinge { apex: tri.vertices[v].clone(), alpha, beta, alpha_future, beta_future })
    }

    pub fn sigma(&self) -> Sigma {
        if self.alpha_future != self.beta_future {
            Sigma::Plus
        } else {
            Sigma::Minus
        }
    }
}

/// Signed comparison angle at the apex, `None` off the timelike domain.
pub fn hinge_theta<S: LorentzSpace>(space: &S, h: &Hinge<S::Point>, i: usize, j: usize) -> Result<Option<f64>> {
    let (a, s) = &h.alpha[i];
    let (b, t) = &h.beta[j];
    if !(space.ll(a, b) || space.ll(b, a)) {
        return Ok(None);
    }
    let opp = space.tau(a, b).max(space.tau(b, a));
    if opp <= 0.0 {
        return Ok(None);
    }
    let sigma = h.sigma();
    Ok(Some(sigma.value() * vertex_angle(*s, *t, opp, sigma)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub mode: BoundMode,
    pub pass: bool,
    pub max_violation: f64,
    /// `(hinge, alpha index, beta index)` where the worst decrease starts.
    pub witness: Option<(usize, usize, usize)>,
    pub evaluated: usize,
}

/// Checks that `theta(s, t)` is monotone in each argument on its domain.
pub fn test_monotonicity_comparison<S: LorentzSpace>(
    space: &S,
    hinges: &[Hinge<S::Point>],
    mode: BoundMode,
    tol: f64,
) -> Result<MonotonicityReport> {
    let sign = match mode {
        BoundMode::Lower => 1.0,
        BoundMode::Upper => -1.0,
    };
    let mut max_violation = 0.0f64;
    let mut witness = None;
    let mut evaluated = 0;
    for (hi, h) in hinges.iter().enumerate() {
        let (na, nb) = (h.alpha.len(), h.beta.len());
        let mut theta = vec![None; na * nb];
        for i in 0..na {
            for j in 0..nb {
                theta[i * nb + j] = hinge_theta(space, h, i, j)?;
            }
        }
        evaluated += theta.iter().flatten().count();
        let mut scan = |cells: Vec<(usize, usize)>| {
            let mut prev: Option<(f64, usize, usize)> = None;
            for (i, j) in cells {
                if let Some(v) = theta[i * nb + j] {
                    if let Some((p, pi, pj)) = prev {
                        let drop = sign * (p - v);
                        if drop > max_violation {
                            max_violation = drop;
                            witness = Some((hi, pi, pj));
                        }
                    }
                    prev = Some((v, i, j));
                }
            }
        };
        for i in 0..na {
            scan((0..nb).map(|j| (i, j)).collect());
        }
        for j in 0..nb {
            scan((0..na).map(|i| (i, j)).collect());
        }
    }
    if evaluated == 0 {
        return Err(Error::Precondition("no timelike related parameter pairs".into()));
    }
    Ok(MonotonicityReport { mode, pass: max_violation <= tol, max_violation, witness, evaluated })
}

/// Upper angle estimate: `theta` on the ladder `s = t = s0 2^-k`, `k < rungs`,
/// maximized over the last three rungs where it is defined.
pub fn upper_angle_ladder(theta: impl Fn(f64, f64) -> Option<f64>, s0: f64, rungs: usize) -> Option<f64> {
    let vals: Vec<f64> = (0..rungs)
        .filter_map(|k| {
            let s = s0 * 0.5f64.powi(k as i32);
            theta(s, s)
        })
        .collect();
    vals.iter().rev().take(3).copied().reduce(f64::max)
}

/// `tau_bar` between the comparison points of two knots.
pub fn knot_tau_bar<P>(cmp: &ComparisonTriangle, a: &Knot<P>, b: &Knot<P>) -> Result<f64> {
    Ok(tau_bar(cmp.point_on(a.side.0, a.side.1, a.param)?, cmp.point_on(b.side.0, b.side.1, b.param)?))
}
