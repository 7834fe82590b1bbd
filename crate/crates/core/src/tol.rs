//! Tolerance defaults.

/// Absolute tolerance for axiom checks and exact-arithmetic identities.
pub const EPS: f64 = 1e-9;

/// Default declared mesh for grid products.
pub const DEFAULT_MESH: f64 = 0.05;

/// Scale-aware comparison: `|a - b| <= EPS * max(1, |a|, |b|)`.
pub fn close(a: f64, b: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= EPS * 1f64.max(a.abs()).max(b.abs())
}

/// Per-run tolerances derived from a grid mesh.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    pub mesh: f64,
    pub stack: f64,
    pub angle: f64,
    pub null: f64,
    pub busemann: f64,
    pub parallel: f64,
}

impl Tolerances {
    pub fn for_mesh(mesh: f64) -> Self {
        Tolerances {
            mesh,
            stack: 5.0 * mesh,
            angle: 5.0 * mesh,
            null: 10.0 * mesh,
            busemann: mesh,
            parallel: 6.0 * mesh,
        }
    }

    /// Bound used by the splitting round trip: `2 (mesh + busemann)`.
    pub fn splitting(&self) -> f64 {
        2.0 * (self.mesh + self.busemann)
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::for_mesh(DEFAULT_MESH)
    }
}
