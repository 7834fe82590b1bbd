//! The hyperbolic law of cosines in `R^{1,1}`:
//! `a13^2 = a12^2 + a23^2 + 2 sigma a12 a23 cosh(omega)`,
//! with `sigma = +1` iff `x2` is not a time endpoint.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::EPS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sigma {
    /// The vertex lies between the other two in time.
    Plus,
    /// The vertex is a time endpoint.
    Minus,
}

impl Sigma {
    pub fn value(self) -> f64 {
        match self {
            Sigma::Plus => 1.0,
            Sigma::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignedAngle {
    pub omega: f64,
    pub sigma: Sigma,
    pub signed: f64,
}

impl SignedAngle {
    pub fn new(omega: f64, sigma: Sigma) -> Self {
        SignedAngle { omega, sigma, signed: sigma.value() * omega }
    }
}

/// Third side from two sides and the hyperbolic angle between them.
///
/// Uses `cosh w - 1 = 2 sinh^2(w/2)` so small angles keep full precision.
pub fn law_of_cosines_side(a12: f64, a23: f64, omega: f64, sigma: Sigma) -> Result<f64> {
    if !(a12 > 0.0 && a23 > 0.0 && omega >= 0.0) {
        return Err(Error::Unrealizable(format!("sides {a12}, {a23} and angle {omega}")));
    }
    let sh = (0.5 * omega).sinh();
    let extra = 4.0 * a12 * a23 * sh * sh;
    match sigma {
        Sigma::Plus => Ok(((a12 + a23) * (a12 + a23) + extra).sqrt()),
        Sigma::Minus => {
            let diff = a12 - a23;
            let r = diff * diff - extra;
            if r < -EPS * (a12 * a12 + a23 * a23) {
                Err(Error::Unrealizable(format!("negative radicand {r} for an endpoint angle")))
            } else {
                Ok(r.max(0.0).sqrt())
            }
        }
    }
}

/// Hyperbolic angle at a vertex with adjacent sides `b`, `c` and opposite side `a`.
pub fn vertex_angle(b: f64, c: f64, a: f64, sigma: Sigma) -> Result<f64> {
    if !(b > 0.0 && c > 0.0) {
        return Err(Error::Degenerate(format!("adjacent sides {b}, {c} must be positive")));
    }
    let (u, v) = match sigma {
        Sigma::Plus => (a - b - c, a + b + c),
        Sigma::Minus => {
            let d = (b - c).abs();
            (d - a, d + a)
        }
    };
    let x = u * v / (4.0 * b * c);
    if x < -EPS * (1.0 + (a * a + b * b + c * c) / (b * c)) {
        return Err(Error::Unrealizable(format!("sides ({b}, {c}, {a}) violate the reverse triangle inequality")));
    }
    Ok(2.0 * x.max(0.0).sqrt().asinh())
}

/// Side lengths of a timelike triangle `(x1, x2, x3)` with its time order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideTriple {
    pub a12: f64,
    pub a23: f64,
    pub a13: f64,
    /// Vertex indices (0 = x1, 1 = x2, 2 = x3) from earliest to latest.
    pub order: [usize; 3],
}

impl SideTriple {
    /// `x1 << x2 << x3`.
    pub fn chain(a12: f64, a23: f64, a13: f64) -> Self {
        SideTriple { a12, a23, a13, order: [0, 1, 2] }
    }

    pub fn with_order(a12: f64, a23: f64, a13: f64, order: [usize; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for &v in &order {
            if v > 2 || seen[v] {
                return Err(Error::Structural(format!("{order:?} is not a permutation of 0..3")));
            }
            seen[v] = true;
        }
        Ok(SideTriple { a12, a23, a13, order })
    }

    pub fn side(&self, i: usize, j: usize) -> f64 {
        match (i.min(j), i.max(j)) {
            (0, 1) => self.a12,
            (1, 2) => self.a23,
            (0, 2) => self.a13,
            _ => 0.0,
        }
    }

    pub fn sigma_at(&self, v: usize) -> Sigma {
        if self.order[1] == v {
            Sigma::Plus
        } else {
            Sigma::Minus
        }
    }

    /// Checks the reverse triangle inequality and positivity.
    pub fn check_realizable(&self) -> Result<()> {
        let [e, m, l] = self.order;
        let (long, s1, s2) = (self.side(e, l), self.side(e, m), self.side(m, l));
        if !(s1 > 0.0 && s2 > 0.0 && long > 0.0) {
            return Err(Error::Unrealizable(format!("non-positive side in {self:?}")));
        }
        if long < s1 + s2 - EPS * long {
            return Err(Error::Unrealizable(format!("longest side {long} < {s1} + {s2}")));
        }
        Ok(())
    }

    /// Comparison angle at vertex `v`.
    pub fn angle_at(&self, v: usize) -> Result<SignedAngle> {
        self.check_realizable()?;
        let (a, b) = match v {
            0 => (1, 2),
            1 => (0, 2),
            2 => (0, 1),
            _ => return Err(Error::Structural(format!("vertex {v}"))),
        };
        let sigma = self.sigma_at(v);
        let omega = vertex_angle(self.side(v, a), self.side(v, b), self.side(a, b), sigma)?;
        Ok(SignedAngle::new(omega, sigma))
    }
}

/// Angle at `x2`.
pub fn solve_angle(sides: &SideTriple) -> Result<SignedAngle> {
    sides.angle_at(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn law_examples() {
        assert_eq!(law_of_cosines_side(1.0, 1.0, 0.0, Sigma::Plus).unwrap(), 2.0);
        let w = 1.5f64.acosh();
        assert!((law_of_cosines_side(1.0, 1.0, w, Sigma::Plus).unwrap() - 5f64.sqrt()).abs() < 1e-15);
        assert_eq!(law_of_cosines_side(1.0, 1.0, 0.0, Sigma::Minus).unwrap(), 0.0);
        assert!(law_of_cosines_side(1.0, 1.0, 0.5, Sigma::Minus).is_err());
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve_angle(&SideTriple::chain(1.0, 1.0, 2.0)).unwrap().omega, 0.0);
        let a = solve_angle(&SideTriple::chain(1.0, 1.0, 5f64.sqrt())).unwrap();
        assert!((a.omega.cosh() - 1.5).abs() < 1e-14);
        assert!((a.omega - 0.9624236501192069).abs() < 1e-15);
        assert_eq!(a.sigma, Sigma::Plus);
        assert!(a.signed > 0.0);
        assert!(matches!(solve_angle(&SideTriple::chain(1.0, 1.0, 1.99)), Err(Error::Unrealizable(_))));
    }

    #[test]
    fn endpoint_angle_is_negative_signed() {
        // x2 earliest: x2 << x1 << x3
        let s = SideTriple::with_order(1.0, 3.0, 1.5, [1, 0, 2]).unwrap();
        let a = s.angle_at(1).unwrap();
        assert_eq!(a.sigma, Sigma::Minus);
        let back = law_of_cosines_side(1.0, 3.0, a.omega, Sigma::Minus).unwrap();
        assert!((back - 1.5).abs() < 1e-14);
    }
}
