//! The two Alexandrov gluing lemmas checked on explicit side data.
//!
//! Convexity at `p` is read off the signed comparison angles at `p_bar`: the
//! glued situation is convex iff their sum is non-negative.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::cosines::SideTriple;
use super::triangle::{hyperbolic_angle, locate_third, realize_triangle, tau_bar, Oriented};
use crate::error::{Error, Result};
use crate::model::{tau_minkowski, MinkowskiPoint};
use crate::tol::EPS;

/// Triangle `x << y << z` with `p` on the longest side `xz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcrossData {
    pub tau_xy: f64,
    pub tau_yz: f64,
    pub tau_xz: f64,
    pub tau_xp: f64,
    pub tau_py: f64,
    /// `y << p` instead of `p << y`.
    pub y_before_p: bool,
}

/// Triangle `x << y << z` with `p` on the side `xy`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FutureData {
    pub tau_xy: f64,
    pub tau_yz: f64,
    pub tau_xz: f64,
    pub tau_xp: f64,
    pub tau_pz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaVersion {
    Across,
    Future,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlexandrovReport {
    pub version: LemmaVersion,
    /// `tau` of the split segment minus its value in the comparison triangle.
    pub tau_gap: f64,
    pub tau_condition: bool,
    /// Signed angles at `p_bar` in the two glued triangles.
    pub signed_angles_at_p: [f64; 2],
    pub convex: bool,
    /// The unsigned ordering of the two angles at `p_bar` as worded in the lemma.
    pub convex_as_worded: bool,
    pub biconditional: bool,
    /// Angle in the glued triangle minus the angle in the comparison subtriangle,
    /// per vertex of the first and second subtriangle.
    pub delta1_margins: [f64; 3],
    pub delta2_margins: [f64; 3],
    pub directions_ok: bool,
    pub split_bar: f64,
    pub split_tilde: f64,
    pub split_ok: bool,
    pub degenerate: bool,
    /// All inequalities strict (only meaningful when not degenerate).
    pub strict: bool,
}

impl AlexandrovReport {
    pub fn confirmed(&self) -> bool {
        self.biconditional && self.directions_ok && self.split_ok && (self.degenerate || self.strict)
    }
}

fn angles(s: &SideTriple) -> Result<[f64; 3]> {
    Ok([s.angle_at(0)?.omega, s.angle_at(1)?.omega, s.angle_at(2)?.omega])
}

fn signed(s: &SideTriple, v: usize) -> Result<f64> {
    Ok(s.angle_at(v)?.signed)
}

fn margins(bar: &SideTriple, tilde: &SideTriple) -> Result<[f64; 3]> {
    let (b, t) = (angles(bar)?, angles(tilde)?);
    Ok([b[0] - t[0], b[1] - t[1], b[2] - t[2]])
}

fn check_param(u: f64, len: f64) -> Result<()> {
    if u > 0.0 && u < len {
        Ok(())
    } else {
        Err(Error::OutOfRange { value: u, lo: 0.0, hi: len })
    }
}

struct Parts {
    version: LemmaVersion,
    tau_gap: f64,
    signed_p: [f64; 2],
    as_worded: bool,
    d1: [f64; 3],
    d2: [f64; 3],
    split_bar: f64,
    split_tilde: f64,
}

fn assemble(parts: Parts, tol: f64) -> AlexandrovReport {
    let Parts { version, tau_gap, signed_p, as_worded, d1, d2, split_bar, split_tilde } = parts;
    let degenerate = tau_gap.abs() <= tol;
    let tau_condition = tau_gap <= 0.0;
    let turn = signed_p[0] + signed_p[1];
    let convex = turn >= 0.0;
    let (s1, s2) = match (version, tau_condition) {
        (LemmaVersion::Across, true) => (1.0, 1.0),
        (LemmaVersion::Across, false) => (-1.0, -1.0),
        (LemmaVersion::Future, true) => (1.0, -1.0),
        (LemmaVersion::Future, false) => (-1.0, 1.0),
    };
    let split_margin = match version {
        LemmaVersion::Across => split_bar - split_tilde,
        LemmaVersion::Future => split_tilde - split_bar,
    };
    let all = d1.iter().chain(d2.iter());
    let (biconditional, directions_ok, strict) = if degenerate {
        let flat = all.clone().all(|m| m.abs() <= tol) && turn.abs() <= tol;
        (flat, flat, true)
    } else {
        let dir = d1.iter().all(|m| s1 * m >= -tol) && d2.iter().all(|m| s2 * m >= -tol);
        let strict = d1.iter().all(|m| s1 * m > 0.0) && d2.iter().all(|m| s2 * m > 0.0) && turn != 0.0 && split_margin > 0.0;
        (convex == tau_condition, dir, strict)
    };
    AlexandrovReport {
        version,
        tau_gap,
        tau_condition,
        signed_angles_at_p: signed_p,
        convex,
        convex_as_worded: as_worded,
        biconditional,
        delta1_margins: d1,
        delta2_margins: d2,
        directions_ok,
        split_bar,
        split_tilde,
        split_ok: split_margin >= -tol,
        degenerate,
        strict,
    }
}

/// Across version: glue `(x, p, y)` and `(p, y, z)` along `p y`.
pub fn verify_alexandrov_across(data: &AcrossData, tol: f64) -> Result<AlexandrovReport> {
    let AcrossData { tau_xy, tau_yz, tau_xz, tau_xp, tau_py, y_before_p } = *data;
    check_param(tau_xp, tau_xz)?;
    let tau_pz = tau_xz - tau_xp;
    let whole = SideTriple::chain(tau_xy, tau_yz, tau_xz);
    let tilde = realize_triangle(&whole)?;
    let [xt, yt, _] = tilde.vertices;
    let pt = tilde.point_on(0, 2, tau_xp)?;
    let tilde_py = tau_bar(pt, yt);
    if tilde_py <= 0.0 || (tau_minkowski(yt, pt) > 0.0) != y_before_p {
        return Err(Error::Degenerate("comparison point has a different relation to y".into()));
    }
    let _ = xt;
    // labels: (x, p, y) and (p, y, z)
    let (o1, o2) = if y_before_p { ([0, 2, 1], [1, 0, 2]) } else { ([0, 1, 2], [0, 1, 2]) };
    let bar1 = SideTriple::with_order(tau_xp, tau_py, tau_xy, o1)?;
    let bar2 = SideTriple::with_order(tau_py, tau_yz, tau_pz, o2)?;
    let til1 = SideTriple::with_order(tau_xp, tilde_py, tau_xy, o1)?;
    let til2 = SideTriple::with_order(tilde_py, tau_yz, tau_pz, o2)?;
    let d1 = margins(&bar1, &til1)?;
    let d2 = margins(&bar2, &til2)?;
    let signed_p = [signed(&bar1, 1)?, signed(&bar2, 0)?];
    let as_worded = bar1.angle_at(1)?.omega >= bar2.angle_at(0)?.omega;

    let planted = realize_triangle(&bar1)?;
    let [xb, pb, yb] = planted.vertices;
    let zb = locate_third(
        pb,
        yb,
        Oriented { tau: tau_pz, future: true },
        Oriented { tau: tau_yz, future: true },
        Some(xb),
    )?;
    let split_bar = hyperbolic_angle(yb, xb, zb)?;
    let split_tilde = whole.angle_at(1)?.omega;
    Ok(assemble(
        Parts { version: LemmaVersion::Across, tau_gap: tau_py - tilde_py, signed_p, as_worded, d1, d2, split_bar, split_tilde },
        tol,
    ))
}

/// Future version: glue `(x, p, z)` and `(p, y, z)` along `p z`.
pub fn verify_alexandrov_future(data: &FutureData, tol: f64) -> Result<AlexandrovReport> {
    let FutureData { tau_xy, tau_yz, tau_xz, tau_xp, tau_pz } = *data;
    check_param(tau_xp, tau_xy)?;
    let tau_py = tau_xy - tau_xp;
    let whole = SideTriple::chain(tau_xy, tau_yz, tau_xz);
    let tilde = realize_triangle(&whole)?;
    let pt = tilde.point_on(0, 1, tau_xp)?;
    let tilde_pz = tau_bar(pt, tilde.vertices[2]);
    // labels: (x, p, z) and (p, y, z), both chains
    let bar1 = SideTriple::chain(tau_xp, tau_pz, tau_xz);
    let bar2 = SideTriple::chain(tau_py, tau_yz, tau_pz);
    let til1 = SideTriple::chain(tau_xp, tilde_pz, tau_xz);
    let til2 = SideTriple::chain(tau_py, tau_yz, tilde_pz);
    let d1 = margins(&bar1, &til1)?;
    let d2 = margins(&bar2, &til2)?;
    let signed_p = [signed(&bar1, 1)?, signed(&bar2, 0)?];
    let as_worded = bar2.angle_at(0)?.omega >= bar1.angle_at(1)?.omega;

    let planted = realize_triangle(&bar1)?;
    let [xb, pb, zb] = planted.vertices;
    let yb = locate_third(
        pb,
        zb,
        Oriented { tau: tau_py, future: true },
        Oriented { tau: tau_yz, future: false },
        Some(xb),
    )?;
    let split_bar = hyperbolic_angle(zb, xb, yb)?;
    let split_tilde = whole.angle_at(2)?.omega;
    Ok(assemble(
        Parts { version: LemmaVersion::Future, tau_gap: tau_pz - tilde_pz, signed_p, as_worded, d1, d2, split_bar, split_tilde },
        tol,
    ))
}

fn random_chain_triangle<R: Rng>(rng: &mut R) -> [MinkowskiPoint; 3] {
    let x = MinkowskiPoint::ORIGIN;
    let dt1 = rng.gen_range(0.5..2.0);
    let y = MinkowskiPoint::new(dt1, rng.gen_range(-0.8..0.8) * dt1);
    let dt2 = rng.gen_range(0.5..2.0);
    let z = MinkowskiPoint::new(y.t + dt2, y.x + rng.gen_range(-0.8..0.8) * dt2);
    [x, y, z]
}

/// Flat across data from a random `R^{1,1}` triangle with `tau(p, y)` moved
/// strictly inside the realizable range: down if `convex`, up otherwise.
pub fn random_across_data<R: Rng>(rng: &mut R, convex: bool) -> AcrossData {
    loop {
        let [x, y, z] = random_chain_triangle(rng);
        let lam = rng.gen_range(0.1..0.9);
        let p = MinkowskiPoint::new(lam * z.t, lam * z.x);
        let (tau_xy, tau_yz, tau_xz) = (tau_minkowski(x, y), tau_minkowski(y, z), tau_minkowski(x, z));
        let tau_xp = tau_minkowski(x, p);
        let tau_pz = tau_xz - tau_xp;
        let y_before_p = tau_minkowski(y, p) > 0.0;
        let flat = tau_bar(p, y);
        if !(tau_xy > 0.0 && tau_yz > 0.0 && flat > 0.05) {
            continue;
        }
        let upper = if y_before_p {
            (tau_xp - tau_xy).min(tau_yz - tau_pz)
        } else {
            (tau_xy - tau_xp).min(tau_pz - tau_yz)
        };
        let room = if convex { flat } else { upper - flat };
        if room < 0.02 {
            continue;
        }
        let delta = rng.gen_range(0.05..0.9) * room;
        let tau_py = if convex { flat - delta } else { flat + delta };
        return AcrossData { tau_xy, tau_yz, tau_xz, tau_xp, tau_py, y_before_p };
    }
}

/// Future data built the same way, moving `tau(p, z)`.
pub fn random_future_data<R: Rng>(rng: &mut R, convex: bool) -> FutureData {
    loop {
        let [x, y, z] = random_chain_triangle(rng);
        let lam = rng.gen_range(0.1..0.9);
        let p = MinkowskiPoint::new(lam * y.t, lam * y.x);
        let (tau_xy, tau_yz, tau_xz) = (tau_minkowski(x, y), tau_minkowski(y, z), tau_minkowski(x, z));
        let tau_xp = tau_minkowski(x, p);
        let flat = tau_minkowski(p, z);
        let (lo, hi) = ((tau_xy - tau_xp) + tau_yz, tau_xz - tau_xp);
        let room = if convex { flat - lo } else { hi - flat };
        if room < 0.02 || tau_xp <= EPS {
            continue;
        }
        let delta = rng.gen_range(0.05..0.9) * room;
        let tau_pz = if convex { flat - delta } else { flat + delta };
        return FutureData { tau_xy, tau_yz, tau_xz, tau_xp, tau_pz };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn flat_across(y_before_p: bool) -> AcrossData {
        let x = MinkowskiPoint::ORIGIN;
        let (y, lam) = if y_before_p { (MinkowskiPoint::new(1.2, -0.1), 0.6) } else { (MinkowskiPoint::new(1.4, 0.3), 0.3) };
        let z = MinkowskiPoint::new(2.6, 0.2);
        let p = MinkowskiPoint::new(lam * z.t, lam * z.x);
        AcrossData {
            tau_xy: tau_minkowski(x, y),
            tau_yz: tau_minkowski(y, z),
            tau_xz: tau_minkowski(x, z),
            tau_xp: tau_minkowski(x, p),
            tau_py: tau_bar(p, y),
            y_before_p: tau_minkowski(y, p) > 0.0,
        }
    }

    #[test]
    fn flat_data_gives_equalities() {
        for yb in [false, true] {
            let d = flat_across(yb);
            assert_eq!(d.y_before_p, yb);
            let r = verify_alexandrov_across(&d, 1e-9).unwrap();
            assert!(r.degenerate && r.confirmed(), "{r:?}");
            assert!((r.split_bar - r.split_tilde).abs() < 1e-9);
        }
    }

    #[test]
    fn shifted_data_orients_both_ways() {
        let mut d = flat_across(false);
        d.tau_py -= 0.1;
        let r = verify_alexandrov_across(&d, 1e-12).unwrap();
        assert!(r.tau_condition && r.convex && r.confirmed(), "{r:?}");
        assert!(r.convex_as_worded);
        let mut d = flat_across(false);
        d.tau_py += 0.01;
        let r = verify_alexandrov_across(&d, 1e-12).unwrap();
        assert!(!r.tau_condition && !r.convex && r.confirmed(), "{r:?}");
    }

    #[test]
    fn future_version_directions() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for convex in [true, false] {
            for _ in 0..20 {
                let d = random_future_data(&mut rng, convex);
                let r = verify_alexandrov_future(&d, 1e-12).unwrap();
                assert_eq!(r.tau_condition, convex);
                assert!(r.confirmed(), "{r:?}");
            }
        }
    }

    #[test]
    fn parameter_off_side_is_rejected() {
        let mut d = flat_across(false);
        d.tau_xp = d.tau_xz + 0.1;
        assert!(matches!(verify_alexandrov_across(&d, 1e-9), Err(Error::OutOfRange { .. })));
    }
}
