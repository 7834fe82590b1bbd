//! Comparison along a timelike line: stacking of comparison triangles,
//! constancy of comparison angles and exact comparison on line triangles.

use serde::{Deserialize, Serialize};

use super::cosines::{vertex_angle, Sigma};
use super::curvature::SampledTriangle;
use super::triangle::{locate_third, realize_triangle, side_of, side_triple_of, Oriented};
use crate::chains::{LineDescriptor, Realizers};
use crate::error::{Error, Result};
use crate::model::MinkowskiPoint;
use crate::space::LorentzSpace;
use crate::tol::EPS;

fn related<S: LorentzSpace>(space: &S, a: &S::Point, b: &S::Point) -> Option<Oriented> {
    if space.ll(a, b) {
        Some(Oriented { tau: space.tau(a, b), future: true })
    } else if space.ll(b, a) {
        Some(Oriented { tau: space.tau(b, a), future: false })
    } else {
        None
    }
}

fn segment_distance(a: MinkowskiPoint, b: MinkowskiPoint, q: MinkowskiPoint) -> f64 {
    let (dt, dx) = (b.t - a.t, b.x - a.x);
    let len2 = dt * dt + dx * dx;
    let lam = if len2 > 0.0 { (((q.t - a.t) * dt + (q.x - a.x) * dx) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (q.t - a.t - lam * dt).hypot(q.x - a.x - lam * dx)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StackingReport {
    pub collinear_defect: f64,
    pub planted: [MinkowskiPoint; 4],
}

/// Glues comparison triangles for `(p, y1, y2)` and `(p, y2, y3)` along
/// `p y2` and measures how far `y2_bar` is from the segment `y1_bar y3_bar`.
pub fn verify_stacking<S: LorentzSpace>(
    space: &S,
    line: &LineDescriptor<S::Point>,
    p: &S::Point,
    params: [f64; 3],
) -> Result<StackingReport> {
    if !(params[0] < params[1] && params[1] < params[2]) {
        return Err(Error::Precondition(format!("parameters {params:?} are not increasing")));
    }
    let idx = [line.index_of(params[0])?, line.index_of(params[1])?, line.index_of(params[2])?];
    let ys: Vec<&S::Point> = idx.iter().map(|&i| &line.points[i]).collect();
    for y in &ys {
        if related(space, p, y).is_none() {
            return Err(Error::NotRelated(format!("{p:?}"), format!("{y:?}")));
        }
    }
    let first = realize_triangle(&side_triple_of(space, [p, ys[0], ys[1]])?)?;
    let [pb, y1, y2] = first.vertices;
    let y3 = locate_third(
        pb,
        y2,
        related(space, p, ys[2]).unwrap(),
        Oriented { tau: params[2] - params[1], future: true },
        Some(y1),
    )?;
    if side_of(pb, y2, y1) == 0.0 && side_of(pb, y2, y3) == 0.0 {
        return Err(Error::Degenerate("p lies on the line".into()));
    }
    Ok(StackingReport { collinear_defect: segment_distance(y1, y3, y2), planted: [pb, y1, y2, y3] })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleSpreadReport {
    pub max_spread: f64,
    pub min_angle: f64,
    pub max_angle: f64,
    pub evaluated: usize,
}

/// Comparison angles at `x = line(t0)` between a realizer `x -> p` (probed at
/// `tau`-parameters `probes`) and the line in both directions.
pub fn angle_equals_comparison_angle<S: Realizers>(
    space: &S,
    line: &LineDescriptor<S::Point>,
    t0: f64,
    p: &S::Point,
    probes: &[f64],
) -> Result<AngleSpreadReport> {
    let ix = line.index_of(t0)?;
    let x = &line.points[ix];
    if line.points.iter().any(|q| space.dist(q, p) <= EPS) {
        return Err(Error::Degenerate("p lies on the line".into()));
    }
    let rel = related(space, x, p).ok_or_else(|| Error::NotRelated(format!("{x:?}"), format!("{p:?}")))?;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut evaluated = 0;
    for &s in probes {
        if !(s > 0.0 && s <= rel.tau * (1.0 + EPS)) {
            return Err(Error::OutOfRange { value: s, lo: 0.0, hi: rel.tau });
        }
        let lam = (s / rel.tau).min(1.0);
        let a = if rel.future { space.realizer_point(x, p, lam)? } else { space.realizer_point(p, x, 1.0 - lam)? };
        for (j, g) in line.points.iter().enumerate() {
            if j == ix {
                continue;
            }
            let Some(opp) = related(space, &a, g) else { continue };
            let g_future = line.params[j] > t0;
            let sigma = if g_future != rel.future { Sigma::Plus } else { Sigma::Minus };
            let w = vertex_angle(s, (line.params[j] - t0).abs(), opp.tau, sigma)?;
            lo = lo.min(w);
            hi = hi.max(w);
            evaluated += 1;
        }
    }
    if evaluated == 0 {
        return Err(Error::Precondition("no probe is timelike related to the line".into()));
    }
    if hi <= EPS {
        return Err(Error::Degenerate("p lies on the line".into()));
    }
    Ok(AngleSpreadReport { max_spread: hi - lo, min_angle: lo, max_angle: hi, evaluated })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SidesEqualReport {
    pub holds: bool,
    pub max_tau_gap: f64,
    pub relation_mismatches: usize,
    /// Knot indices of the worst pair.
    pub witness: Option<(usize, usize)>,
}

/// On the triangle `(line(t1), line(t2), p)`, pairs with one point on the line
/// side must have exactly their comparison `tau` and causal relation.
/// Relations are compared only outside the band `|dt - |dx|| <= tol`.
pub fn sides_equal_check<S: Realizers>(
    space: &S,
    line: &LineDescriptor<S::Point>,
    t1: f64,
    t2: f64,
    p: &S::Point,
    fractions: &[f64],
    tol: f64,
) -> Result<SidesEqualReport> {
    let (i1, i2) = (line.index_of(t1)?, line.index_of(t2)?);
    let tri = SampledTriangle::from_realizers(space, [line.points[i1].clone(), line.points[i2].clone(), p.clone()], fractions)?;
    let cmp = tri.comparison()?;
    let bars = tri
        .knots
        .iter()
        .map(|k| cmp.point_on(k.side.0, k.side.1, k.param))
        .collect::<Result<Vec<_>>>()?;
    let on_line = |k: usize| {
        let s = tri.knots[k].side;
        s == (0, 1) || s == (1, 0)
    };
    let mut max_gap = 0.0f64;
    let mut witness = None;
    let mut mismatches = 0;
    for i in 0..tri.knots.len() {
        if !on_line(i) {
            continue;
        }
        for j in 0..tri.knots.len() {
            if i == j {
                continue;
            }
            let (q1, q2) = (&tri.knots[i].point, &tri.knots[j].point);
            for (a, b, ab, bb) in [(q1, q2, bars[i], bars[j]), (q2, q1, bars[j], bars[i])] {
                let gap = (space.tau(a, b) - crate::model::tau_minkowski(ab, bb)).abs();
                if gap > max_gap {
                    max_gap = gap;
                    witness = Some((i, j));
                }
                let margin = (bb.t - ab.t) - (bb.x - ab.x).abs();
                if margin.abs() > tol && space.leq(a, b) != (margin >= 0.0) {
                    mismatches += 1;
                    witness.get_or_insert((i, j));
                }
            }
        }
    }
    Ok(SidesEqualReport { holds: max_gap <= tol && mismatches == 0, max_tau_gap: max_gap, relation_mismatches: mismatches, witness })
}
