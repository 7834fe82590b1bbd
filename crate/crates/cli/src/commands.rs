//! The five subcommands, generic over the loaded space.

use std::path::Path;

use lorentz_lab::asymptotics::{build_asymptote, busemann_value, geometric_horizons, in_timelike_hull, AsymptoteOptions};
use lorentz_lab::chains::{is_line, maximize_tau, CausalChain, Direction};
use lorentz_lab::comparison::{test_curvature, test_monotonicity_comparison, BoundMode, Hinge, SampledTriangle};
use lorentz_lab::model::TimeGrid;
use lorentz_lab::space::validate_axioms;
use lorentz_lab::splitting::{build_splitting_map, extract_slice, SplittingOptions};
use lorentz_lab::tol::Tolerances;
use lorentz_lab::{Error, FiniteSpace, LorentzSpace, PointId};
use serde_json::{json, Value};

use crate::report::{write_csv, write_json, CliError, Outcome};
use crate::spaces::{describe, line_descriptor, load_line_points, parse_point, Codec};

/// Exhaustive axiom checks are cubic in the sample size.
pub const MAX_VALIDATE: usize = 1500;

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn points_value<C: Codec>(c: &C, pts: &[C::P]) -> Value {
    Value::Array(pts.iter().map(|p| c.to_json(p)).collect())
}

pub fn validate<C: Codec>(c: &C, table: Option<&FiniteSpace>) -> Result<Outcome, CliError> {
    let analytic = table.is_none();
    let sampled;
    let space = match table {
        Some(s) => s,
        None => {
            if c.sample().len() > MAX_VALIDATE {
                return Err(CliError::Precondition(format!(
                    "sample of {} points exceeds the validation limit {MAX_VALIDATE}",
                    c.sample().len()
                )));
            }
            sampled = FiniteSpace::from_model(c.space(), c.sample());
            &sampled
        }
    };
    let report = validate_axioms(space);
    let failures: Vec<&str> = report.failures().map(|o| o.axiom.name()).collect();
    let witness = report.failures().next().map(|o| json!({ "axiom": o.axiom, "points": o.witness }));
    let mut warnings = Vec::new();
    if space.is_empty() {
        warnings.push("empty sample: only the analytic kind is vouched for".into());
    }
    Ok(Outcome {
        pass: report.passed(),
        details: json!({
            "points": space.len(),
            "analytic": analytic,
            "failures": failures,
            "outcomes": report.outcomes,
        }),
        witness,
        warnings,
        seed: None,
    })
}

pub fn tau<C: Codec>(c: &C, table: Option<&FiniteSpace>, from: &str, to: &str, intrinsic: bool) -> Result<Outcome, CliError> {
    let p = parse_point(c, from)?;
    let q = parse_point(c, to)?;
    let space = c.space();
    let stored = space.tau(&p, &q);
    let mut details = json!({
        "from": c.to_json(&p),
        "to": c.to_json(&q),
        "tau": stored,
        "leq": space.leq(&p, &q),
        "ll": space.ll(&p, &q),
    });
    let mut warnings = Vec::new();
    if !space.leq(&p, &q) {
        warnings.push("points are not causally related; tau is 0".into());
    }
    if intrinsic {
        let mut pts = c.sample().to_vec();
        let index = |pts: &mut Vec<C::P>, x: &C::P| match pts.iter().position(|y| y == x) {
            Some(i) => i,
            None => {
                pts.push(x.clone());
                pts.len() - 1
            }
        };
        let (ip, iq) = (index(&mut pts, &p), index(&mut pts, &q));
        let sampled;
        let fs = match table {
            Some(s) => s,
            None => {
                sampled = FiniteSpace::from_model(space, &pts);
                &sampled
            }
        };
        details["intrinsic"] = match maximize_tau(fs, PointId(ip), PointId(iq)) {
            Ok(m) => {
                let chain: Vec<C::P> = m.chain.iter().map(|id| pts[id.0].clone()).collect();
                json!({
                    "value": m.value,
                    "chain": points_value(c, &chain),
                    "tie_count": m.tie_count,
                    "intrinsic_defect": m.intrinsic_defect,
                })
            }
            Err(Error::NotRelated(..)) => {
                warnings.push("no causal chain joins the points; intrinsic value is 0".into());
                json!({ "value": 0.0, "chain": [] })
            }
            Err(e) => return Err(e.into()),
        };
    }
    Ok(Outcome { pass: true, details, witness: None, warnings, seed: None })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Lower0,
    Upper0,
    Monotonicity(BoundMode),
}

pub struct CurvatureArgs<'a> {
    pub bound: BoundKind,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub csv: Option<&'a Path>,
}

fn hinges<P: Clone + std::fmt::Debug>(tri: &SampledTriangle<P>) -> Vec<Hinge<P>> {
    (0..3).filter_map(|v| Hinge::from_triangle(tri, v).ok()).collect()
}

pub fn curvature<C: Codec>(c: &C, args: &CurvatureArgs) -> Result<Outcome, CliError> {
    let (tris, skipped) = c.triangles(args.samples, args.seed)?;
    if tris.is_empty() {
        return Err(CliError::Precondition("no timelike triangles in the sample".into()));
    }
    let space = c.space();
    let mut rows = Vec::with_capacity(tris.len());
    let mut worst: Option<(usize, f64)> = None;
    let mut pass = true;
    let mut checked = 0usize;
    let mut witness = None;
    for (k, tri) in tris.iter().enumerate() {
        let one = std::slice::from_ref(tri);
        let (defect, ok, w) = match args.bound {
            BoundKind::Lower0 | BoundKind::Upper0 => {
                let mode = if args.bound == BoundKind::Lower0 { BoundMode::Lower } else { BoundMode::Upper };
                let r = test_curvature(space, one, mode, args.tol)?;
                checked += r.pairs;
                let w = r.witness.map(|w| {
                    json!({
                        "triangle": k,
                        "vertices": points_value(c, &tri.vertices),
                        "p": c.to_json(&tri.knots[w.knots.0].point),
                        "q": c.to_json(&tri.knots[w.knots.1].point),
                        "defect": w.defect,
                    })
                });
                (r.worst_defect, r.pass, w)
            }
            BoundKind::Monotonicity(mode) => {
                let hs = hinges(tri);
                let r = test_monotonicity_comparison(space, &hs, mode, args.tol)?;
                checked += r.evaluated;
                let w = r.witness.map(|(h, a, b)| {
                    json!({
                        "triangle": k,
                        "vertices": points_value(c, &tri.vertices),
                        "apex": c.to_json(&hs[h].apex),
                        "alpha_knot": a,
                        "beta_knot": b,
                        "violation": r.max_violation,
                    })
                });
                (r.max_violation, r.pass, w)
            }
        };
        rows.push(vec![k.to_string(), defect.to_string(), ok.to_string()]);
        let score = match args.bound {
            BoundKind::Upper0 => -defect,
            _ => defect,
        };
        if worst.map_or(true, |(_, s)| score > s) {
            worst = Some((k, score));
            witness = w;
        }
        pass &= ok;
    }
    if let Some(path) = args.csv {
        write_csv(path, &["triangle", "worst_defect", "pass"], &rows)?;
    }
    let (worst_triangle, score) = worst.expect("at least one triangle");
    let worst_defect = if args.bound == BoundKind::Upper0 { -score } else { score };
    let bound = match args.bound {
        BoundKind::Lower0 => "lower0".to_string(),
        BoundKind::Upper0 => "upper0".to_string(),
        BoundKind::Monotonicity(m) => format!("monotonicity-{}", if m == BoundMode::Lower { "lower" } else { "upper" }),
    };
    Ok(Outcome {
        pass,
        details: json!({
            "bound": bound,
            "triangles": tris.len(),
            "skipped": skipped,
            "checked": checked,
            "tol": args.tol,
            "worst_defect": worst_defect,
            "worst_triangle": worst_triangle,
        }),
        witness: if pass { None } else { witness },
        warnings: Vec::new(),
        seed: Some(args.seed),
    })
}

pub fn parse_horizons(text: Option<&str>) -> Result<Vec<f64>, CliError> {
    match text {
        None => Ok(geometric_horizons(2.0, 8)),
        Some(s) => s
            .split(',')
            .map(|h| h.trim().parse::<f64>().map_err(|_| CliError::Parse(format!("invalid horizon '{h}'"))))
            .collect(),
    }
}

pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<f64> = text
        .split(':')
        .map(|v| v.trim().parse::<f64>().map_err(|_| CliError::Parse(format!("invalid time grid '{text}'"))))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [lo, hi, step] => Ok(TimeGrid::new(lo, hi, step)?.values()),
        _ => Err(CliError::Parse(format!("time grid '{text}' is not lo:hi:step"))),
    }
}

/// Loads the line file and checks it; a chain that is not a line is a
/// negative verdict, not an error.
fn load_line<C: Codec>(
    c: &C,
    path: &Path,
) -> Result<Result<lorentz_lab::chains::LineDescriptor<C::P>, Outcome>, CliError> {
    let (points, anchor) = load_line_points(c, path)?;
    let chain = CausalChain::future(c.space(), points.clone())?;
    let check = is_line(c.space(), &chain);
    if let Some((i, j)) = check.first_failure {
        return Ok(Err(Outcome {
            pass: false,
            details: json!({ "is_line": false, "first_failure": [i, j], "points": points.len() }),
            witness: Some(json!({
                "first_failure": [i, j],
                "p": c.to_json(&points[i]),
                "q": c.to_json(&points[j]),
            })),
            warnings: Vec::new(),
            seed: None,
        }));
    }
    Ok(Ok(line_descriptor(c, points, anchor)?))
}

pub struct AsymptoteArgs<'a> {
    pub line: &'a Path,
    pub from: &'a str,
    pub direction: Direction,
    pub horizons: Vec<f64>,
    pub analytic: bool,
    pub out: Option<&'a Path>,
}

pub fn asymptote<C: Codec>(c: &C, tol: &Tolerances, args: &AsymptoteArgs) -> Result<Outcome, CliError> {
    let line = match load_line(c, args.line)? {
        Ok(l) => l,
        Err(o) => return Ok(o),
    };
    let p = parse_point(c, args.from)?;
    if !in_timelike_hull(c.space(), &line, &p) {
        return Err(CliError::Precondition("point is not in I(gamma)".into()));
    }
    let mut opts = AsymptoteOptions::for_tolerances(tol);
    if args.analytic {
        opts = opts.analytic();
    }
    let res = build_asymptote(c.space(), &line, &p, args.direction, &args.horizons, &opts)?;
    let mut warnings = Vec::new();
    let estimate = busemann_value(c.space(), &line, &p, &args.horizons, tol.busemann);
    let error_bound = estimate.as_ref().map_or(f64::INFINITY, |b| b.error_bound);
    let converged = estimate.as_ref().map_or(false, |b| b.converged);
    if !res.stabilized || !converged {
        warnings.push(format!(
            "horizons too short: error_bound {error_bound:e}, limit moved by {:e} between the last two horizons",
            res.movement
        ));
    }
    let busemann = match estimate {
        Ok(b) => json!({ "value": b.value, "error_bound": b.error_bound, "converged": b.converged }),
        Err(e) => {
            warnings.push(format!("no Busemann estimate: {e}"));
            Value::Null
        }
    };
    if let Some(path) = args.out {
        write_json(path, &res)?;
    }
    let witness = (!res.is_timelike).then(|| json!({ "null_steps": res.null_steps, "min_step_tau": res.min_step_tau }));
    Ok(Outcome {
        pass: res.is_timelike,
        details: json!({
            "footpoint": c.to_json(&res.footpoint),
            "direction": res.direction,
            "mode": res.mode,
            "family": res.family.len(),
            "skipped_horizons": res.skipped,
            "stabilized": res.stabilized,
            "movement": res.movement,
            "is_timelike": res.is_timelike,
            "min_step_tau": res.min_step_tau,
            "limit": points_value(c, &res.limit),
            "params": res.params,
            "busemann": busemann,
        }),
        witness,
        warnings,
        seed: None,
    })
}

pub struct SplitArgs<'a> {
    pub line: &'a Path,
    pub times: Vec<f64>,
    pub horizons: Vec<f64>,
    pub analytic: bool,
    pub out: Option<&'a Path>,
    pub plot: Option<&'a Path>,
}

pub fn split<C: Codec>(c: &C, tol: &Tolerances, args: &SplitArgs) -> Result<Outcome, CliError> {
    let gamma = match load_line(c, args.line)? {
        Ok(l) => l,
        Err(o) => return Ok(o),
    };
    let mut opts = SplittingOptions::for_tolerances(tol, args.horizons.clone());
    if args.analytic {
        opts = opts.analytic();
    }
    let space = c.space();
    let mut seeds: Vec<C::P> = c.sample().iter().filter(|p| in_timelike_hull(space, &gamma, p)).cloned().collect();
    let outside = c.sample().len() - seeds.len();
    if seeds.is_empty() {
        return Err(CliError::Precondition("no sample point lies in I(gamma)".into()));
    }
    seeds.sort_by(|a, b| c.level(a).abs().total_cmp(&c.level(b).abs()));
    let slice = extract_slice(space, &gamma, &seeds, &opts)?;
    let result = build_splitting_map(space, &gamma, slice, &args.times, &seeds, &opts)?;
    let s = &result.slice;
    let v = &result.verification;
    let pass = s.metric.is_metric
        && s.nonparallel.is_empty()
        && v.tau_defect <= opts.bound
        && v.leq_mismatches == 0
        && v.achronal_violations == 0
        && v.bijective;
    if let Some(path) = args.out {
        write_json(path, &result)?;
    }
    if let Some(path) = args.plot {
        let mut rows = Vec::new();
        for (a, &t) in result.times.iter().enumerate() {
            for i in 0..s.len() {
                let img = result.image(a, i);
                let b = busemann_value(space, &gamma, img, &opts.horizons, opts.busemann_tol)
                    .map(|b| b.value.to_string())
                    .unwrap_or_default();
                let row: Vec<String> = (0..s.len()).map(|j| s.d_s.get(i, j).to_string()).collect();
                rows.push(vec![t.to_string(), i.to_string(), describe(c, img), b, row.join(" ")]);
            }
        }
        write_csv(path, &["time", "member", "point", "busemann", "d_s_row"], &rows)?;
    }
    let witness = if pass {
        None
    } else if let Some(d) = v.duplicate {
        Some(json!({ "duplicate": d, "point": c.to_json(&c.sample()[d.sample]) }))
    } else if let Some(&(i, j)) = s.nonparallel.first() {
        Some(json!({ "nonparallel": [i, j], "p": c.to_json(&s.members[i]), "q": c.to_json(&s.members[j]) }))
    } else {
        None
    };
    Ok(Outcome {
        pass,
        details: json!({
            "is_line": true,
            "seeds": seeds.len(),
            "outside_i_gamma": outside,
            "members": s.len(),
            "gamma_member": s.gamma_member,
            "times": result.times,
            "bound": opts.bound,
            "metric": to_value(&s.metric),
            "nonparallel": s.nonparallel.len(),
            "verification": to_value(v),
        }),
        witness,
        warnings: Vec::new(),
        seed: None,
    })
}
