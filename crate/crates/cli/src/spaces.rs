//! Loaded spaces and point codecs.

use std::fmt::Debug;
use std::path::Path;

use lorentz_lab::chains::{LineDescriptor, Realizers};
use lorentz_lab::comparison::{finite_triangles, random_minkowski_triangle, random_product_triangle, SampledTriangle};
use lorentz_lab::model::{EuclideanSegment, GraphPoint, MetricFactor, MetricGraph, TimeGrid};
use lorentz_lab::tol::EPS;
use lorentz_lab::{FiniteSpace, LorentzSpace, Minkowski, MinkowskiPoint, PointId, ProductPoint, ProductSpace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::format::{check_version, read_json, Factor, FinitePayload, Kind, LineFile, MinkowskiPayload, SpaceFile};
use crate::report::CliError;

const FRACTIONS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

pub trait PointLike: Clone + Debug + PartialEq + Send + Sync + Serialize {}
impl<T: Clone + Debug + PartialEq + Send + Sync + Serialize> PointLike for T {}

/// A space together with its finite sample and a text form for its points.
pub trait Codec {
    type P: PointLike;
    type Space: Realizers<Point = Self::P> + Sync;

    fn space(&self) -> &Self::Space;
    fn sample(&self) -> &[Self::P];
    fn coords(&self, p: &Self::P) -> Vec<f64>;
    fn from_coords(&self, c: &[f64]) -> Result<Self::P, CliError>;

    fn to_json(&self, p: &Self::P) -> Value {
        serde_json::json!(self.coords(p))
    }

    /// Time coordinate, used to order seeds; zero when there is none.
    fn level(&self, _p: &Self::P) -> f64 {
        0.0
    }

    /// Timelike triangles with sampled sides.
    fn triangles(&self, count: usize, seed: u64) -> Result<(Vec<SampledTriangle<Self::P>>, usize), CliError>;
}

pub struct Loaded<S: LorentzSpace> {
    pub space: S,
    pub sample: Vec<S::Point>,
}

fn from_realizers<S: Realizers>(
    space: &S,
    vertices: impl Iterator<Item = [S::Point; 3]>,
) -> (Vec<SampledTriangle<S::Point>>, usize) {
    let mut out = Vec::new();
    let mut skipped = 0;
    for v in vertices {
        match SampledTriangle::from_realizers(space, v, &FRACTIONS) {
            Ok(t) => out.push(t),
            Err(_) => skipped += 1,
        }
    }
    (out, skipped)
}

/// Maximizer from `a` to `b` through every point that splits `tau(a, b)`
/// additively, so that ties do not hide sample points.
pub fn fine_chain(space: &FiniteSpace, a: usize, b: usize) -> Vec<PointId> {
    let total = space.tau_at(a, b);
    let add = |x: f64, y: f64| (x - y).abs() <= EPS * (1.0 + x.abs());
    let mut mid: Vec<usize> = (0..space.len())
        .filter(|&z| z != a && z != b && space.leq_at(a, z) && space.leq_at(z, b))
        .filter(|&z| add(space.tau_at(a, z) + space.tau_at(z, b), total))
        .collect();
    mid.sort_by(|&x, &y| space.tau_at(a, x).total_cmp(&space.tau_at(a, y)).then(x.cmp(&y)));
    let mut chain = vec![a];
    for z in mid {
        let last = *chain.last().unwrap();
        if space.leq_at(last, z) && add(space.tau_at(a, last) + space.tau_at(last, z), space.tau_at(a, z)) {
            chain.push(z);
        }
    }
    chain.push(b);
    chain.into_iter().map(PointId).collect()
}

impl Codec for Loaded<FiniteSpace> {
    type P = PointId;
    type Space = FiniteSpace;

    fn space(&self) -> &FiniteSpace {
        &self.space
    }

    fn sample(&self) -> &[PointId] {
        &self.sample
    }

    fn coords(&self, p: &PointId) -> Vec<f64> {
        vec![p.0 as f64]
    }

    fn to_json(&self, p: &PointId) -> Value {
        Value::from(p.0)
    }

    fn from_coords(&self, _c: &[f64]) -> Result<PointId, CliError> {
        Err(CliError::Parse("points of a finite space are given by id".into()))
    }

    /// Enumerated, not sampled: the seed is unused.
    fn triangles(&self, count: usize, _seed: u64) -> Result<(Vec<SampledTriangle<PointId>>, usize), CliError> {
        let mut out = Vec::new();
        let mut skipped = 0;
        for [x, y, z] in finite_triangles(&self.space, count) {
            let chains = [
                fine_chain(&self.space, x.0, y.0),
                fine_chain(&self.space, y.0, z.0),
                fine_chain(&self.space, x.0, z.0),
            ];
            match SampledTriangle::from_chains(&self.space, [x, y, z], chains) {
                Ok(t) => out.push(t),
                Err(_) => skipped += 1,
            }
        }
        Ok((out, skipped))
    }
}

impl Codec for Loaded<Minkowski> {
    type P = MinkowskiPoint;
    type Space = Minkowski;

    fn space(&self) -> &Minkowski {
        &self.space
    }

    fn sample(&self) -> &[MinkowskiPoint] {
        &self.sample
    }

    fn coords(&self, p: &MinkowskiPoint) -> Vec<f64> {
        vec![p.t, p.x]
    }

    fn from_coords(&self, c: &[f64]) -> Result<MinkowskiPoint, CliError> {
        match c {
            [t, x] => Ok(MinkowskiPoint::new(*t, *x)),
            _ => Err(CliError::Parse(format!("a Minkowski point is 't,x', got {} numbers", c.len()))),
        }
    }

    fn level(&self, p: &MinkowskiPoint) -> f64 {
        p.t
    }

    fn triangles(&self, count: usize, seed: u64) -> Result<(Vec<SampledTriangle<MinkowskiPoint>>, usize), CliError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let verts: Vec<_> = (0..count).map(|_| random_minkowski_triangle(&mut rng)).collect();
        Ok(from_realizers(&self.space, verts.into_iter()))
    }
}

/// Factor points in text form.
pub trait FactorCoords: MetricFactor {
    fn coords(&self, x: &Self::Point) -> Vec<f64>;
    fn from_coords(&self, c: &[f64]) -> Result<Self::Point, CliError>;
}

impl FactorCoords for EuclideanSegment {
    fn coords(&self, x: &f64) -> Vec<f64> {
        vec![*x]
    }

    fn from_coords(&self, c: &[f64]) -> Result<f64, CliError> {
        match c {
            [x] if *x >= self.lo - EPS && *x <= self.hi + EPS => Ok(*x),
            [x] => Err(CliError::Precondition(format!("{x} outside the segment [{}, {}]", self.lo, self.hi))),
            _ => Err(CliError::Parse(format!("a segment point is 't,x', got {} numbers", c.len() + 1))),
        }
    }
}

impl FactorCoords for MetricGraph {
    fn coords(&self, x: &GraphPoint) -> Vec<f64> {
        vec![x.leg as f64, x.r]
    }

    fn from_coords(&self, c: &[f64]) -> Result<GraphPoint, CliError> {
        match c {
            [leg, r] if leg.fract() == 0.0 && *leg >= 0.0 && (*leg as usize) < self.legs.len() => {
                let leg = *leg as usize;
                if *r < 0.0 || *r > self.legs[leg] + EPS {
                    return Err(CliError::Precondition(format!("r = {r} outside leg {leg}")));
                }
                Ok(self.point(leg, *r))
            }
            [leg, _] => Err(CliError::Precondition(format!("no leg {leg}"))),
            _ => Err(CliError::Parse(format!("a graph point is 't,leg,r', got {} numbers", c.len() + 1))),
        }
    }
}

impl<F> Codec for Loaded<ProductSpace<F>>
where
    F: FactorCoords + Sync,
    F::Point: PointLike,
{
    type P = ProductPoint<F::Point>;
    type Space = ProductSpace<F>;

    fn space(&self) -> &ProductSpace<F> {
        &self.space
    }

    fn sample(&self) -> &[Self::P] {
        &self.sample
    }

    fn coords(&self, p: &Self::P) -> Vec<f64> {
        let mut c = vec![p.t];
        c.extend(self.space.factor.coords(&p.x));
        c
    }

    fn from_coords(&self, c: &[f64]) -> Result<Self::P, CliError> {
        match c.split_first() {
            Some((t, rest)) => Ok(ProductPoint::new(*t, self.space.factor.from_coords(rest)?)),
            None => Err(CliError::Parse("empty point".into())),
        }
    }

    fn level(&self, p: &Self::P) -> f64 {
        p.t
    }

    fn triangles(&self, count: usize, seed: u64) -> Result<(Vec<SampledTriangle<Self::P>>, usize), CliError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let verts: Vec<_> = (0..count).map(|_| random_product_triangle(&self.space, &mut rng)).collect();
        Ok(from_realizers(&self.space, verts.into_iter()))
    }
}

pub enum AnySpace {
    Finite(Loaded<FiniteSpace>),
    Minkowski(Loaded<Minkowski>),
    Segment(Loaded<ProductSpace<EuclideanSegment>>),
    Graph(Loaded<ProductSpace<MetricGraph>>),
}

/// Runs `$body` with `$s` bound to the concrete loaded space.
#[macro_export]
macro_rules! with_space {
    ($any:expr, $s:ident => $body:expr) => {
        match $any {
            $crate::spaces::AnySpace::Finite($s) => $body,
            $crate::spaces::AnySpace::Minkowski($s) => $body,
            $crate::spaces::AnySpace::Segment($s) => $body,
            $crate::spaces::AnySpace::Graph($s) => $body,
        }
    };
}

fn square<T: Clone>(name: &str, n: usize, rows: &[Vec<T>]) -> Result<Vec<T>, CliError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Parse(format!("table {name} must be {n}x{n}")));
    }
    Ok(rows.iter().flatten().cloned().collect())
}

fn finite(p: &FinitePayload) -> Result<FiniteSpace, CliError> {
    let n = p.n;
    let d: Vec<f64> = square("d", n, &p.d)?.into_iter().map(|r| r.0).collect();
    let space = match (&p.leq, &p.ll, &p.tau, &p.edges) {
        (Some(leq), Some(ll), Some(tau), None) => {
            let tau = square("tau", n, tau)?.into_iter().map(|r| r.0).collect();
            FiniteSpace::new(n, d, square("leq", n, leq)?, square("ll", n, ll)?, tau)?
        }
        (None, None, None, Some(edges)) => {
            let e: Vec<_> = edges.iter().map(|&(i, j, t)| (i, j, t.0)).collect();
            FiniteSpace::closure(d, n, &e)?
        }
        _ => return Err(CliError::Parse("finite payload needs either leq, ll and tau, or edges".into())),
    };
    Ok(space)
}

fn minkowski(p: &MinkowskiPayload) -> Result<Vec<MinkowskiPoint>, CliError> {
    let mut pts = Vec::new();
    if let Some(s) = &p.strip {
        let grid = TimeGrid::new(s.grid.t_min.0, s.grid.t_max.0, s.grid.t_step.0)?;
        let xs = EuclideanSegment::new(s.x_lo.0, s.x_hi.0, s.x_step.0)?;
        for t in grid.values() {
            pts.extend((0..xs.count()).map(|i| MinkowskiPoint::new(t, xs.point(i))));
        }
    }
    pts.extend(p.points.iter().map(|&(t, x)| MinkowskiPoint::new(t.0, x.0)));
    Ok(pts)
}

fn product<F: MetricFactor>(factor: F, grid: Option<TimeGrid>) -> Result<Loaded<ProductSpace<F>>, CliError> {
    let space = ProductSpace::new(factor, grid);
    let sample = if grid.is_some() { space.sample()? } else { Vec::new() };
    Ok(Loaded { space, sample })
}

fn missing(kind: &str) -> CliError {
    CliError::Parse(format!("kind {kind} needs a '{kind}' payload"))
}

pub fn load_space(path: &Path) -> Result<(SpaceFile, AnySpace), CliError> {
    let file: SpaceFile = read_json(path)?;
    check_version(file.format_version, path)?;
    let any = match file.kind {
        Kind::Finite => {
            let space = finite(file.finite.as_ref().ok_or_else(|| missing("finite"))?)?;
            let sample = space.points().collect();
            AnySpace::Finite(Loaded { space, sample })
        }
        Kind::Minkowski => {
            let sample = minkowski(file.minkowski.as_ref().ok_or_else(|| missing("minkowski"))?)?;
            AnySpace::Minkowski(Loaded { space: Minkowski, sample })
        }
        Kind::Product => {
            let p = file.product.as_ref().ok_or_else(|| missing("product"))?;
            let grid = p.grid.map(|g| TimeGrid::new(g.t_min.0, g.t_max.0, g.t_step.0)).transpose()?;
            match &p.factor {
                Factor::Segment { lo, hi, mesh } => {
                    AnySpace::Segment(product(EuclideanSegment::new(lo.0, hi.0, mesh.0)?, grid)?)
                }
                Factor::Star { legs, mesh } => {
                    if legs.is_empty() || legs.iter().any(|l| !(l.0 > 0.0)) || !(mesh.0 > 0.0) {
                        return Err(CliError::Parse("star legs and mesh must be positive".into()));
                    }
                    let g = MetricGraph { legs: legs.iter().map(|l| l.0).collect(), mesh: mesh.0 };
                    AnySpace::Graph(product(g, grid)?)
                }
            }
        }
    };
    Ok((file, any))
}

/// A sample id (`"17"`) or comma-separated coordinates (`"0.5,0.25"`).
pub fn parse_point<C: Codec>(c: &C, text: &str) -> Result<C::P, CliError> {
    let text = text.trim();
    if let Ok(id) = text.parse::<usize>() {
        return c.sample().get(id).cloned().ok_or_else(|| {
            CliError::Precondition(format!("point id {id} outside the sample 0..{}", c.sample().len()))
        });
    }
    let nums = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::Parse(format!("invalid point '{text}'"))))
        .collect::<Result<Vec<_>, _>>()?;
    c.from_coords(&nums)
}

pub fn point_value<C: Codec>(c: &C, v: &Value) -> Result<C::P, CliError> {
    match v {
        Value::Number(n) => parse_point(c, &n.to_string()),
        Value::String(s) => parse_point(c, s),
        other => Err(CliError::Parse(format!("invalid point {other}"))),
    }
}

/// Points and anchor of a line file. Nothing is checked beyond parsing.
pub fn load_line_points<C: Codec>(c: &C, path: &Path) -> Result<(Vec<C::P>, usize), CliError> {
    let file: LineFile = read_json(path)?;
    check_version(file.format_version, path)?;
    let (points, default_anchor) = match (&file.points, &file.vertical) {
        (Some(pts), None) => (pts.iter().map(|v| point_value(c, v)).collect::<Result<Vec<_>, _>>()?, 0),
        (None, Some(v)) => {
            let grid = TimeGrid::new(v.t_min.0, v.t_max.0, v.step.0)?;
            let ts = grid.values();
            let anchor = (0..ts.len()).min_by(|&a, &b| ts[a].abs().total_cmp(&ts[b].abs())).unwrap_or(0);
            let pts = ts.iter().map(|t| parse_point(c, &format!("{t},{}", v.at))).collect::<Result<Vec<_>, _>>()?;
            (pts, anchor)
        }
        _ => return Err(CliError::Parse(format!("{}: give exactly one of points or vertical", path.display()))),
    };
    Ok((points, file.anchor.unwrap_or(default_anchor)))
}

pub fn describe<C: Codec>(c: &C, p: &C::P) -> String {
    c.coords(p).iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn line_descriptor<C: Codec>(c: &C, points: Vec<C::P>, anchor: usize) -> Result<LineDescriptor<C::P>, CliError> {
    Ok(LineDescriptor::from_chain(c.space(), points, anchor)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg() -> Loaded<ProductSpace<EuclideanSegment>> {
        product(EuclideanSegment::new(0.0, 1.0, 0.25).unwrap(), Some(TimeGrid::new(0.0, 1.0, 0.5).unwrap())).unwrap()
    }

    #[test]
    fn points_by_id_and_coordinates() {
        let s = seg();
        assert_eq!(s.sample.len(), 15);
        assert_eq!(parse_point(&s, "6").unwrap(), ProductPoint::new(0.5, 0.25));
        assert_eq!(parse_point(&s, "0.5, 0.25").unwrap(), ProductPoint::new(0.5, 0.25));
        assert!(matches!(parse_point(&s, "15"), Err(CliError::Precondition(_))));
        assert!(matches!(parse_point(&s, "0.5,2"), Err(CliError::Precondition(_))));
        assert!(matches!(parse_point(&s, "a,b"), Err(CliError::Parse(_))));
    }

    #[test]
    fn graph_points_round_trip() {
        let g = product(MetricGraph::tripod(1.0, 0.5), None).unwrap();
        let p = parse_point(&g, "2,1,0.5").unwrap();
        assert_eq!(p, ProductPoint::new(2.0, GraphPoint { leg: 1, r: 0.5 }));
        assert_eq!(g.coords(&p), vec![2.0, 1.0, 0.5]);
        assert!(parse_point(&g, "2,3,0.5").is_err());
    }

    #[test]
    fn fine_chain_keeps_tied_points() {
        let pts = [MinkowskiPoint::new(0.0, 0.0), MinkowskiPoint::new(1.0, 0.0), MinkowskiPoint::new(2.0, 0.0)];
        let space = FiniteSpace::from_model(&Minkowski, &pts);
        assert_eq!(fine_chain(&space, 0, 2), vec![PointId(0), PointId(1), PointId(2)]);
    }
}
