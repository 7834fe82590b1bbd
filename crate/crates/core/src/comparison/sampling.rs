//! Seeded triangle samplers.

use rand::Rng;

use crate::model::{MetricFactor, MinkowskiPoint, ProductPoint, ProductSpace};
use crate::space::{FiniteSpace, PointId};

/// Random timelike triangle in `R^{1,1}`, vertices in random label order.
pub fn random_minkowski_triangle<R: Rng>(rng: &mut R) -> [MinkowskiPoint; 3] {
    let mut pts = [MinkowskiPoint::ORIGIN; 3];
    let mut t = rng.gen_range(-1.0..1.0);
    let mut x = rng.gen_range(-1.0..1.0);
    for p in pts.iter_mut() {
        *p = MinkowskiPoint::new(t, x);
        let dt = rng.gen_range(0.3..2.0);
        t += dt;
        x += rng.gen_range(-0.85..0.85) * dt;
    }
    let k = rng.gen_range(0..3);
    pts.rotate_left(k);
    if rng.gen_bool(0.5) {
        pts.swap(0, 1);
    }
    pts
}

/// Random timelike triangle over factor sample points, with time gaps chosen
/// so consecutive vertices are timelike related.
pub fn random_product_triangle<F: MetricFactor, R: Rng>(
    space: &ProductSpace<F>,
    rng: &mut R,
) -> [ProductPoint<F::Point>; 3] {
    let xs = space.factor.sample();
    let pick = |rng: &mut R| xs[rng.gen_range(0..xs.len())].clone();
    let (a, b, c) = (pick(rng), pick(rng), pick(rng));
    let t0 = rng.gen_range(0.0..1.0);
    let t1 = t0 + space.factor.dist(&a, &b) + rng.gen_range(0.2..1.5);
    let t2 = t1 + space.factor.dist(&b, &c) + rng.gen_range(0.2..1.5);
    [ProductPoint::new(t0, a), ProductPoint::new(t1, b), ProductPoint::new(t2, c)]
}

/// All pairwise timelike triples `i < j < k` in time order, up to `limit`.
pub fn finite_triangles(space: &FiniteSpace, limit: usize) -> Vec<[PointId; 3]> {
    let n = space.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !space.ll_at(i, j) {
                continue;
            }
            for k in 0..n {
                if space.ll_at(j, k) && space.ll_at(i, k) {
                    out.push([PointId(i), PointId(j), PointId(k)]);
                    if out.len() >= limit {
                        return out;
                    }
                }
            }
        }
    }
    out
}
