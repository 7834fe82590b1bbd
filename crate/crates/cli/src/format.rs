//! On-disk formats: space files and line files.

use std::fmt;
use std::path::Path;

use lorentz_lab::tol::{Tolerances, DEFAULT_MESH};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::report::CliError;

pub const FORMAT_VERSION: u32 = 1;

/// A real number written as a decimal string. Bare JSON numbers are accepted
/// on input as well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Num(f64),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(Real(v)),
            Repr::Str(s) => s
                .trim()
                .parse::<f64>()
                .map(Real)
                .map_err(|_| de::Error::custom(format!("invalid decimal '{s}'"))),
        }
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub stack: Option<Real>,
    pub angle: Option<Real>,
    pub null: Option<Real>,
    pub busemann: Option<Real>,
    pub parallel: Option<Real>,
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Finite,
    Minkowski,
    Product,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub format_version: u32,
    pub kind: Kind,
    /// Declared net resolution; tolerances scale with it.
    pub mesh: Option<Real>,
    #[serde(default)]
    pub tolerances: ToleranceOverrides,
    pub finite: Option<FinitePayload>,
    pub minkowski: Option<MinkowskiPayload>,
    pub product: Option<ProductPayload>,
}

/// Row-major tables. Either `leq`, `ll` and `tau` are all given, or `edges`
/// lists base relations whose intrinsic closure is taken.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FinitePayload {
    pub n: usize,
    pub d: Vec<Vec<Real>>,
    pub leq: Option<Vec<Vec<bool>>>,
    pub ll: Option<Vec<Vec<bool>>>,
    pub tau: Option<Vec<Vec<Real>>>,
    pub edges: Option<Vec<(usize, usize, Real)>>,
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub t_min: Real,
    pub t_max: Real,
    pub t_step: Real,
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Strip {
    #[serde(flatten)]
    pub grid: Grid,
    pub x_lo: Real,
    pub x_hi: Real,
    pub x_step: Real,
}

/// Sample of `R^{1,1}`: a rectangular strip and/or explicit `(t, x)` points.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MinkowskiPayload {
    pub strip: Option<Strip>,
    #[serde(default)]
    pub points: Vec<(Real, Real)>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Factor {
    Segment { lo: Real, hi: Real, mesh: Real },
    Star { legs: Vec<Real>, mesh: Real },
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProductPayload {
    pub factor: Factor,
    pub grid: Option<Grid>,
}

/// A timelike line: explicit points, or a vertical line over a factor point.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LineFile {
    pub format_version: u32,
    /// Point ids (numbers) or coordinate strings such as `"0.5,0.25"`.
    pub points: Option<Vec<serde_json::Value>>,
    pub vertical: Option<Vertical>,
    pub anchor: Option<usize>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Vertical {
    /// Factor coordinates, `"x"` or `"leg,r"`.
    pub at: String,
    pub t_min: Real,
    pub t_max: Real,
    pub step: Real,
}

/// Tolerance flags given on the command line.
#[derive(Debug, Clone, Copy, Default)]
pub struct ToleranceFlags {
    pub mesh: Option<f64>,
    pub stack: Option<f64>,
    pub angle: Option<f64>,
    pub null: Option<f64>,
    pub busemann: Option<f64>,
    pub parallel: Option<f64>,
}

/// Declared mesh, then file overrides, then flags.
pub fn resolve_tolerances(file: &SpaceFile, flags: &ToleranceFlags) -> Tolerances {
    let mesh = flags.mesh.or(file.mesh.map(|r| r.0)).unwrap_or(DEFAULT_MESH);
    let mut tol = Tolerances::for_mesh(mesh);
    let o = &file.tolerances;
    let pairs = [
        (&mut tol.stack, o.stack, flags.stack),
        (&mut tol.angle, o.angle, flags.angle),
        (&mut tol.null, o.null, flags.null),
        (&mut tol.busemann, o.busemann, flags.busemann),
        (&mut tol.parallel, o.parallel, flags.parallel),
    ];
    for (slot, from_file, from_flag) in pairs {
        if let Some(v) = from_flag.or(from_file.map(|r| r.0)) {
            *slot = v;
        }
    }
    tol
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn check_version(found: u32, path: &Path) -> Result<(), CliError> {
    if found == FORMAT_VERSION {
        Ok(())
    } else {
        Err(CliError::Parse(format!(
            "{}: format_version {found} is not supported (expected {FORMAT_VERSION})",
            path.display()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_from_strings_and_numbers() {
        let v: Vec<Real> = serde_json::from_str(r#"["0.25", 1.5, " -2 "]"#).unwrap();
        assert_eq!(v, vec![Real(0.25), Real(1.5), Real(-2.0)]);
        assert_eq!(serde_json::to_string(&Real(0.1)).unwrap(), "\"0.1\"");
        let e = serde_json::from_str::<Vec<Real>>("[\n\"1,5\"]").unwrap_err();
        assert_eq!(e.line(), 2);
    }

    #[test]
    fn flags_beat_file_beat_mesh() {
        let file: SpaceFile = serde_json::from_str(
            r#"{"format_version": 1, "kind": "minkowski", "mesh": "0.1",
                "tolerances": {"stack": "0.3", "null": "0.7"}, "minkowski": {}}"#,
        )
        .unwrap();
        let flags = ToleranceFlags { null: Some(0.2), ..Default::default() };
        let tol = resolve_tolerances(&file, &flags);
        assert_eq!(tol.mesh, 0.1);
        assert_eq!(tol.stack, 0.3);
        assert_eq!(tol.null, 0.2);
        assert_eq!(tol.busemann, 0.1);
        let flags = ToleranceFlags { mesh: Some(0.01), ..Default::default() };
        assert_eq!(resolve_tolerances(&file, &flags).angle, 0.05);
    }
}
