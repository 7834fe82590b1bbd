//! Comparison triangles planted in `R^{1,1}`, comparison points and gluing.

use serde::{Deserialize, Serialize};

use super::cosines::SideTriple;
use crate::error::{Error, Result};
use crate::model::{tau_minkowski, MinkowskiPoint};
use crate::space::LorentzSpace;
use crate::tol::EPS;

/// `max(tau(p, q), tau(q, p))` in `R^{1,1}`.
pub fn tau_bar(p: MinkowskiPoint, q: MinkowskiPoint) -> f64 {
    tau_minkowski(p, q).max(tau_minkowski(q, p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTriangle {
    pub sides: SideTriple,
    /// Planted `x1, x2, x3`.
    pub vertices: [MinkowskiPoint; 3],
}

/// Plants a triangle: earliest vertex at the origin, longest side on the
/// positive `t`-axis, the remaining vertex at `x >= 0`.
pub fn realize_triangle(sides: &SideTriple) -> Result<ComparisonTriangle> {
    sides.check_realizable()?;
    let [e, m, l] = sides.order;
    let a_el = sides.side(e, l);
    let a_em = sides.side(e, m);
    let a_ml = sides.side(m, l);
    let t = (a_el * a_el + a_em * a_em - a_ml * a_ml) / (2.0 * a_el);
    // t - a_em = ((a_el - a_em)^2 - a_ml^2) / (2 a_el), factored to avoid cancellation
    let lower = (a_el - a_em - a_ml) * (a_el - a_em + a_ml) / (2.0 * a_el);
    let x = (lower.max(0.0) * (t + a_em)).sqrt();
    let mut vertices = [MinkowskiPoint::ORIGIN; 3];
    vertices[l] = MinkowskiPoint::new(a_el, 0.0);
    vertices[m] = MinkowskiPoint::new(t, x);
    Ok(ComparisonTriangle { sides: *sides, vertices })
}

impl ComparisonTriangle {
    /// Point at `tau`-arclength `u` from vertex `from` towards vertex `to`.
    pub fn point_on(&self, from: usize, to: usize, u: f64) -> Result<MinkowskiPoint> {
        if from > 2 || to > 2 || from == to {
            return Err(Error::Structural(format!("side ({from}, {to})")));
        }
        let len = self.sides.side(from, to);
        if !(-EPS * (1.0 + len)..=len * (1.0 + EPS) + EPS).contains(&u) {
            return Err(Error::OutOfRange { value: u, lo: 0.0, hi: len });
        }
        let (a, b) = (self.vertices[from], self.vertices[to]);
        let lambda = (u / len).clamp(0.0, 1.0);
        Ok(MinkowskiPoint::new(a.t + lambda * (b.t - a.t), a.x + lambda * (b.x - a.x)))
    }
}

pub fn comparison_point(tri: &ComparisonTriangle, from: usize, to: usize, u: f64) -> Result<MinkowskiPoint> {
    tri.point_on(from, to, u)
}

/// Side lengths and time order of three pairwise timelike related points.
pub fn side_triple_of<S: LorentzSpace>(space: &S, pts: [&S::Point; 3]) -> Result<SideTriple> {
    let a = |i: usize, j: usize| space.tau(pts[i], pts[j]).max(space.tau(pts[j], pts[i]));
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        if !(space.ll(pts[i], pts[j]) || space.ll(pts[j], pts[i])) || a(i, j) <= 0.0 {
            return Err(Error::NotRelated(format!("{:?}", pts[i]), format!("{:?}", pts[j])));
        }
    }
    let before = |i: usize, j: usize| space.tau(pts[i], pts[j]) > 0.0;
    let mut order = [0, 1, 2];
    order.sort_by(|&i, &j| {
        if before(i, j) {
            std::cmp::Ordering::Less
        } else if before(j, i) {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    });
    if !(before(order[0], order[1]) && before(order[1], order[2])) {
        return Err(Error::NonCausal(order[0], order[2]));
    }
    SideTriple::with_order(a(0, 1), a(1, 2), a(0, 2), order)
}

/// Rapidity of a timelike vector, oriented to the future.
fn rapidity(v: MinkowskiPoint) -> Result<f64> {
    if v.t.abs() <= v.x.abs() {
        return Err(Error::Degenerate(format!("vector {v} is not timelike")));
    }
    Ok((v.x / v.t).atanh())
}

/// Hyperbolic angle at `at` between the straight lines to `a` and to `b`.
pub fn hyperbolic_angle(at: MinkowskiPoint, a: MinkowskiPoint, b: MinkowskiPoint) -> Result<f64> {
    let u = MinkowskiPoint::new(a.t - at.t, a.x - at.x);
    let v = MinkowskiPoint::new(b.t - at.t, b.x - at.x);
    Ok((rapidity(u)? - rapidity(v)?).abs())
}

/// Twice the signed area of `(p, q, r)`; its sign tells the side of `r` w.r.t. the line `pq`.
pub fn side_of(p: MinkowskiPoint, q: MinkowskiPoint, r: MinkowskiPoint) -> f64 {
    (q.t - p.t) * (r.x - p.x) - (q.x - p.x) * (r.t - p.t)
}

/// Signed `tau`: positive if the first point precedes the second.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oriented {
    pub tau: f64,
    pub future: bool,
}

/// Places `z` with prescribed `tau` to `p` and to `y`, on the side of line `py`
/// opposite to `avoid` (or on the positive side if `avoid` is on the line).
///
/// `to_p.future` means `p << z`, `to_y.future` means `y << z`.
pub fn locate_third(
    p: MinkowskiPoint,
    y: MinkowskiPoint,
    to_p: Oriented,
    to_y: Oriented,
    avoid: Option<MinkowskiPoint>,
) -> Result<MinkowskiPoint> {
    let u = MinkowskiPoint::new(y.t - p.t, y.x - p.x);
    let phi = rapidity(u)?;
    let h = tau_bar(p, y);
    // frame with p at the origin and y on the t-axis
    let yt = if u.t > 0.0 { h } else { -h };
    let (a, b) = (to_p.tau, to_y.tau);
    let t = (a * a - b * b + yt * yt) / (2.0 * yt);
    let t_ok = if to_p.future { t > 0.0 } else { t < 0.0 };
    let dt_ok = if to_y.future { t - yt > 0.0 } else { t - yt < 0.0 };
    let x2 = t * t - a * a;
    if !t_ok || !dt_ok || x2 < -EPS * (1.0 + t * t) {
        return Err(Error::Unrealizable(format!("no point with tau {a} to p and {b} to y")));
    }
    let mut x = x2.max(0.0).sqrt();
    let s = avoid.map(|r| side_of(p, y, r)).unwrap_or(0.0);
    // side_of(p, y, z) has the sign of yt * x in the boosted frame
    if s * yt * x > 0.0 || (s == 0.0 && yt * x < 0.0) {
        x = -x;
    }
    let (ch, sh) = (phi.cosh(), phi.sinh());
    Ok(MinkowskiPoint::new(p.t + t * ch + x * sh, p.x + t * sh + x * ch))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn realize_examples() {
        let tri = realize_triangle(&SideTriple::chain(1.0, 1.0, 2.0)).unwrap();
        assert_eq!(tri.vertices, [MinkowskiPoint::new(0.0, 0.0), MinkowskiPoint::new(1.0, 0.0), MinkowskiPoint::new(2.0, 0.0)]);
        let r5 = 5f64.sqrt();
        let tri = realize_triangle(&SideTriple::chain(1.0, 1.0, r5)).unwrap();
        assert!((tri.vertices[1].t - r5 / 2.0).abs() < 1e-15);
        assert!((tri.vertices[1].x - 0.5).abs() < 1e-15);
        assert_eq!(tri.vertices[2], MinkowskiPoint::new(r5, 0.0));
    }

    #[test]
    fn comparison_point_examples() {
        let tri = realize_triangle(&SideTriple::chain(1.0, 1.0, 5f64.sqrt())).unwrap();
        let r5 = 5f64.sqrt();
        let q = comparison_point(&tri, 0, 2, r5 / 2.0).unwrap();
        assert!((q.t - r5 / 2.0).abs() < 1e-15 && q.x == 0.0);
        assert_eq!(comparison_point(&tri, 1, 2, 0.0).unwrap(), tri.vertices[1]);
        let flat = realize_triangle(&SideTriple::chain(1.0, 1.0, 2.0)).unwrap();
        let mid = comparison_point(&flat, 0, 2, 1.0).unwrap();
        assert!((tau_bar(mid, flat.vertices[0]) - 1.0).abs() < 1e-15);
        assert!((tau_bar(mid, flat.vertices[2]) - 1.0).abs() < 1e-15);
        assert!(matches!(comparison_point(&flat, 0, 2, 2.5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn coordinate_angle_matches_law() {
        let r5 = 5f64.sqrt();
        let tri = realize_triangle(&SideTriple::chain(1.0, 1.0, r5)).unwrap();
        let [a, b, c] = tri.vertices;
        let w = hyperbolic_angle(b, a, c).unwrap();
        assert!((w.cosh() - 1.5).abs() < 1e-14);
    }

    #[test]
    fn locate_third_reproduces_and_flips() {
        let p = MinkowskiPoint::new(0.3, 0.1);
        let y = MinkowskiPoint::new(1.5, 0.6);
        let r = MinkowskiPoint::new(0.8, 1.0);
        for (fp, fy) in [(true, true), (true, false), (false, false)] {
            let (a, b) = match (fp, fy) {
                (true, true) => (2.0, 0.5),
                (true, false) => (0.6, 0.4),
                _ => (0.7, 1.9),
            };
            let z = locate_third(p, y, Oriented { tau: a, future: fp }, Oriented { tau: b, future: fy }, Some(r)).unwrap();
            assert!((tau_bar(p, z) - a).abs() < 1e-12);
            assert!((tau_bar(y, z) - b).abs() < 1e-12);
            assert!(side_of(p, y, z) * side_of(p, y, r) < 0.0);
        }
    }
}
