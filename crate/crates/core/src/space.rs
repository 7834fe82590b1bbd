//! Lorentzian pre-length spaces: the query interface, finite tables and
//! the axiom checks that every concrete space must survive.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::EPS;

/// Uniform read access to a Lorentzian pre-length space `(X, d, <<, <=, tau)`.
pub trait LorentzSpace {
    type Point: Clone + fmt::Debug;

    fn dist(&self, p: &Self::Point, q: &Self::Point) -> f64;
    fn leq(&self, p: &Self::Point, q: &Self::Point) -> bool;
    fn ll(&self, p: &Self::Point, q: &Self::Point) -> bool;
    fn tau(&self, p: &Self::Point, q: &Self::Point) -> f64;
}

/// Index of a point in a [`FiniteSpace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PointId(pub usize);

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A finite Lorentzian pre-length space stored as dense row-major tables.
///
/// `tau` may contain `f64::INFINITY`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSpace {
    n: usize,
    d: Vec<f64>,
    leq: Vec<bool>,
    ll: Vec<bool>,
    tau: Vec<f64>,
}

impl FiniteSpace {
    /// Builds a space from row-major tables. Only the shapes and the absence
    /// of NaN are checked here; see [`validate_axioms`] for the rest.
    pub fn new(n: usize, d: Vec<f64>, leq: Vec<bool>, ll: Vec<bool>, tau: Vec<f64>) -> Result<Self> {
        let nn = n * n;
        for (name, len) in [("d", d.len()), ("leq", leq.len()), ("ll", ll.len()), ("tau", tau.len())] {
            if len != nn {
                return Err(Error::Structural(format!(
                    "table {name} has {len} entries, expected {n}x{n}={nn}"
                )));
            }
        }
        if let Some(k) = d.iter().position(|v| !v.is_finite()) {
            return Err(Error::Structural(format!("d[{},{}] is not a finite number", k / n, k % n)));
        }
        if let Some(k) = tau.iter().position(|v| v.is_nan()) {
            return Err(Error::Structural(format!("tau[{},{}] is NaN", k / n, k % n)));
        }
        Ok(FiniteSpace { n, d, leq, ll, tau })
    }

    /// Samples any space at the given points.
    pub fn from_model<S: LorentzSpace>(space: &S, points: &[S::Point]) -> Self {
        let n = points.len();
        let mut d = vec![0.0; n * n];
        let mut leq = vec![false; n * n];
        let mut ll = vec![false; n * n];
        let mut tau = vec![0.0; n * n];
        for (i, p) in points.iter().enumerate() {
            for (j, q) in points.iter().enumerate() {
                let k = i * n + j;
                d[k] = if i == j { 0.0 } else { space.dist(p, q) };
                leq[k] = i == j || space.leq(p, q);
                ll[k] = i != j && space.ll(p, q);
                tau[k] = if i == j { 0.0 } else { space.tau(p, q) };
            }
        }
        FiniteSpace { n, d, leq, ll, tau }
    }

    /// Intrinsic closure of a set of base relations.
    ///
    /// `edges` lists causal pairs `(i, j, tau)`; the result has `leq` equal to
    /// the reflexive-transitive closure and `tau` equal to the longest
    /// base-edge path, which makes the reverse triangle inequality hold by
    /// construction. The base relation must be acyclic.
    pub fn closure(d: Vec<f64>, n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut succ: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(i, j, t) in edges {
            if i >= n || j >= n {
                return Err(Error::Structural(format!("edge ({i},{j}) out of range")));
            }
            if i == j {
                continue;
            }
            succ[i].push((j, t));
            indeg[j] += 1;
        }
        let mut order = Vec::with_capacity(n);
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        while let Some(v) = stack.pop() {
            order.push(v);
            for &(w, _) in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        if order.len() != n {
            return Err(Error::Structural("base relation has a cycle".into()));
        }
        let mut leq = vec![false; n * n];
        let mut tau = vec![0.0; n * n];
        for s in 0..n {
            let mut best = vec![f64::NEG_INFINITY; n];
            best[s] = 0.0;
            for &v in &order {
                if best[v] == f64::NEG_INFINITY {
                    continue;
                }
                for &(w, t) in &succ[v] {
                    if best[v] + t > best[w] {
                        best[w] = best[v] + t;
                    }
                }
            }
            for v in 0..n {
                if best[v] > f64::NEG_INFINITY {
                    leq[s * n + v] = true;
                    tau[s * n + v] = best[v];
                }
            }
        }
        let ll = tau.iter().map(|&t| t > 0.0).collect();
        FiniteSpace::new(n, d, leq, ll, tau)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn points(&self) -> impl Iterator<Item = PointId> {
        (0..self.n).map(PointId)
    }

    #[inline]
    fn k(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    pub fn d_at(&self, i: usize, j: usize) -> f64 {
        self.d[self.k(i, j)]
    }

    pub fn leq_at(&self, i: usize, j: usize) -> bool {
        self.leq[self.k(i, j)]
    }

    pub fn ll_at(&self, i: usize, j: usize) -> bool {
        self.ll[self.k(i, j)]
    }

    pub fn tau_at(&self, i: usize, j: usize) -> f64 {
        self.tau[self.k(i, j)]
    }

    /// Overwrites one time-separation entry. Used to build counterexamples.
    pub fn set_tau(&mut self, i: usize, j: usize, value: f64) {
        let k = self.k(i, j);
        self.tau[k] = value;
    }

    pub fn set_relation(&mut self, i: usize, j: usize, leq: bool, ll: bool) {
        let k = self.k(i, j);
        self.leq[k] = leq;
        self.ll[k] = ll;
    }

    pub fn d_table(&self) -> &[f64] {
        &self.d
    }

    pub fn leq_table(&self) -> &[bool] {
        &self.leq
    }

    pub fn ll_table(&self) -> &[bool] {
        &self.ll
    }

    pub fn tau_table(&self) -> &[f64] {
        &self.tau
    }
}

impl LorentzSpace for FiniteSpace {
    type Point = PointId;

    fn dist(&self, p: &PointId, q: &PointId) -> f64 {
        self.d_at(p.0, q.0)
    }

    fn leq(&self, p: &PointId, q: &PointId) -> bool {
        self.leq_at(p.0, q.0)
    }

    fn ll(&self, p: &PointId, q: &PointId) -> bool {
        self.ll_at(p.0, q.0)
    }

    fn tau(&self, p: &PointId, q: &PointId) -> f64 {
        self.tau_at(p.0, q.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    MetricZeroDiagonal,
    MetricPositive,
    MetricSymmetric,
    TriangleInequality,
    LeqReflexive,
    LlIrreflexive,
    LeqTransitive,
    LlTransitive,
    LlInLeq,
    TauNonNegative,
    TauZeroOffLeq,
    TauPositiveIffLl,
    ReverseTriangle,
}

impl Axiom {
    pub const ALL: [Axiom; 13] = [
        Axiom::MetricZeroDiagonal,
        Axiom::MetricPositive,
        Axiom::MetricSymmetric,
        Axiom::TriangleInequality,
        Axiom::LeqReflexive,
        Axiom::LlIrreflexive,
        Axiom::LeqTransitive,
        Axiom::LlTransitive,
        Axiom::LlInLeq,
        Axiom::TauNonNegative,
        Axiom::TauZeroOffLeq,
        Axiom::TauPositiveIffLl,
        Axiom::ReverseTriangle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::MetricZeroDiagonal => "d(i,i)=0",
            Axiom::MetricPositive => "d(i,j)>0 for i!=j",
            Axiom::MetricSymmetric => "d symmetric",
            Axiom::TriangleInequality => "triangle inequality",
            Axiom::LeqReflexive => "leq reflexive",
            Axiom::LlIrreflexive => "ll irreflexive",
            Axiom::LeqTransitive => "leq transitive",
            Axiom::LlTransitive => "ll transitive",
            Axiom::LlInLeq => "ll implies leq",
            Axiom::TauNonNegative => "tau>=0",
            Axiom::TauZeroOffLeq => "tau=0 off leq",
            Axiom::TauPositiveIffLl => "tau>0 iff ll",
            Axiom::ReverseTriangle => "reverse triangle inequality",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomOutcome {
    pub axiom: Axiom,
    pub passed: bool,
    /// First counterexample in lexicographic order.
    pub witness: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub outcomes: Vec<AxiomOutcome>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn outcome(&self, axiom: Axiom) -> &AxiomOutcome {
        self.outcomes.iter().find(|o| o.axiom == axiom).expect("every axiom is reported")
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }
}

fn first_pair(n: usize, mut bad: impl FnMut(usize, usize) -> bool) -> Option<Vec<usize>> {
    for i in 0..n {
        for j in 0..n {
            if bad(i, j) {
                return Some(vec![i, j]);
            }
        }
    }
    None
}

fn first_triple(n: usize, mut bad: impl FnMut(usize, usize, usize) -> bool) -> Option<Vec<usize>> {
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if bad(i, j, k) {
                    return Some(vec![i, j, k]);
                }
            }
        }
    }
    None
}

/// Checks every pre-length space axiom on a finite table.
pub fn validate_axioms(space: &FiniteSpace) -> ValidationReport {
    let n = space.n;
    let d = |i, j| space.d_at(i, j);
    let tau = |i, j| space.tau_at(i, j);
    let leq = |i, j| space.leq_at(i, j);
    let ll = |i, j| space.ll_at(i, j);
    let witness = |axiom: Axiom| -> Option<Vec<usize>> {
        match axiom {
            Axiom::MetricZeroDiagonal => first_pair(n, |i, j| i == j && d(i, i).abs() > EPS),
            Axiom::MetricPositive => first_pair(n, |i, j| i != j && d(i, j) <= 0.0),
            Axiom::MetricSymmetric => first_pair(n, |i, j| i < j && (d(i, j) - d(j, i)).abs() > EPS),
            Axiom::TriangleInequality => first_triple(n, |i, j, k| d(i, k) > d(i, j) + d(j, k) + EPS),
            Axiom::LeqReflexive => first_pair(n, |i, j| i == j && !leq(i, i)),
            Axiom::LlIrreflexive => first_pair(n, |i, j| i == j && ll(i, i)),
            Axiom::LeqTransitive => first_triple(n, |i, j, k| leq(i, j) && leq(j, k) && !leq(i, k)),
            Axiom::LlTransitive => first_triple(n, |i, j, k| ll(i, j) && ll(j, k) && !ll(i, k)),
            Axiom::LlInLeq => first_pair(n, |i, j| ll(i, j) && !leq(i, j)),
            Axiom::TauNonNegative => first_pair(n, |i, j| tau(i, j) < 0.0),
            Axiom::TauZeroOffLeq => first_pair(n, |i, j| !leq(i, j) && tau(i, j) != 0.0),
            Axiom::TauPositiveIffLl => first_pair(n, |i, j| (tau(i, j) > 0.0) != ll(i, j)),
            Axiom::ReverseTriangle => first_triple(n, |i, j, k| {
                leq(i, j) && leq(j, k) && tau(i, k) < tau(i, j) + tau(j, k) - EPS
            }),
        }
    };
    let outcomes = Axiom::ALL
        .iter()
        .map(|&axiom| {
            let w = witness(axiom);
            AxiomOutcome { axiom, passed: w.is_none(), witness: w }
        })
        .collect();
    ValidationReport { outcomes }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PushupReport {
    pub passed: bool,
    pub checked: usize,
    /// Sample indices `(x, y, z)` violating push-up, at most 16.
    pub violations: Vec<[usize; 3]>,
}

/// Verifies `x << y <= z => x << z` and `x <= y << z => x << z` on all sampled triples.
pub fn check_pushup<S: LorentzSpace>(space: &S, sample: &[S::Point]) -> PushupReport {
    let n = sample.len();
    let mut checked = 0;
    let mut violations = Vec::new();
    let mut total = 0usize;
    for x in 0..n {
        for y in 0..n {
            let xy_ll = space.ll(&sample[x], &sample[y]);
            let xy_leq = xy_ll || space.leq(&sample[x], &sample[y]);
            if !xy_leq {
                continue;
            }
            for z in 0..n {
                let yz_ll = space.ll(&sample[y], &sample[z]);
                let yz_leq = yz_ll || space.leq(&sample[y], &sample[z]);
                if !yz_leq || !(xy_ll || yz_ll) {
                    continue;
                }
                checked += 1;
                if !space.ll(&sample[x], &sample[z]) {
                    total += 1;
                    if violations.len() < 16 {
                        violations.push([x, y, z]);
                    }
                }
            }
        }
    }
    PushupReport { passed: total == 0, checked, violations }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiamondKind {
    /// `I(p,q) = {r : p << r << q}`
    Timelike,
    /// `J(p,q) = {r : p <= r <= q}`
    Causal,
}

/// A causal or timelike diamond restricted to a sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiamondSet {
    pub base: (usize, usize),
    pub kind: DiamondKind,
    /// Sample indices of the members, ascending.
    pub members: Vec<usize>,
    /// Largest distance from `p` to a member; boundedness stands in for compactness.
    pub radius: f64,
}

/// Diamond between `sample[p]` and `sample[q]`, membership scanned over the sample.
pub fn diamond<S: LorentzSpace>(space: &S, sample: &[S::Point], p: usize, q: usize, kind: DiamondKind) -> DiamondSet {
    let (pp, qq) = (&sample[p], &sample[q]);
    let members: Vec<usize> = (0..sample.len())
        .filter(|&r| {
            let rr = &sample[r];
            match kind {
                DiamondKind::Timelike => space.ll(pp, rr) && space.ll(rr, qq),
                DiamondKind::Causal => space.leq(pp, rr) && space.leq(rr, qq),
            }
        })
        .collect();
    let radius = members.iter().map(|&r| space.dist(pp, &sample[r])).fold(0.0, f64::max);
    DiamondSet { base: (p, q), kind, members, radius }
}

/// True iff `J(p,q)` (within the sample) lies in `subset` for all `p, q` in `subset`.
pub fn check_causal_convexity<S: LorentzSpace>(space: &S, sample: &[S::Point], subset: &[usize]) -> bool {
    let mut inside = vec![false; sample.len()];
    for &i in subset {
        inside[i] = true;
    }
    for &p in subset {
        for &q in subset {
            if !space.leq(&sample[p], &sample[q]) {
                continue;
            }
            for r in 0..sample.len() {
                if !inside[r] && space.leq(&sample[p], &sample[r]) && space.leq(&sample[r], &sample[q]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Random causal set on `n` points: `leq` is the transitive closure of a
/// random DAG with edge probability `p`, and every related pair gets an
/// independent `tau` in `(0.1, 1)`. The reverse triangle inequality is not
/// enforced, so longest chains are genuinely longer than direct pairs.
pub fn random_causal_set<R: rand::Rng>(rng: &mut R, n: usize, p: f64) -> FiniteSpace {
    let mut leq = vec![false; n * n];
    for i in 0..n {
        leq[i * n + i] = true;
        for j in i + 1..n {
            leq[i * n + j] = rng.gen_bool(p);
        }
    }
    for k in 0..n {
        for i in 0..n {
            if leq[i * n + k] {
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
    }
    let mut tau = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            if leq[i * n + j] {
                tau[i * n + j] = rng.gen_range(0.1..1.0);
            }
        }
    }
    let d = (0..n * n).map(|k| (k / n).abs_diff(k % n) as f64).collect();
    let ll = tau.iter().map(|&t| t > 0.0).collect();
    FiniteSpace::new(n, d, leq, ll, tau).expect("shapes agree")
}
