//! JSON and CSV input/output, argument parsing helpers and oracle specs.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter};

use crate::convexfn::{CellPA, MaxAffine};
use crate::error::{Error, Result};
use crate::geometry::Polyhedron;
use crate::harness::{cell_count_oracle, squared_volume_oracle};
use crate::linalg::Point;
use crate::repro::reference_zeta;
use crate::valuations::{dual_zeta_oracle, zeta_oracle, TestFunction, ValuationOracle};

/// Compact JSON with every float written to 17 significant digits.
struct SignificantDigits;

impl Formatter for SignificantDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        CompactFormatter.write_f64(writer, value as f64)
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SignificantDigits);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("JSON is UTF-8"))
}

/// Formats a float for CSV with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Failure to read or write a file; kept apart from validation errors so the
/// command line can report it with its own exit code.
#[derive(Debug)]
pub struct IoFailure(pub String);

pub fn read_text(path: &Path) -> std::result::Result<String, IoFailure> {
    fs::read_to_string(path).map_err(|e| IoFailure(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> std::result::Result<(), IoFailure> {
    fs::write(path, text).map_err(|e| IoFailure(format!("{}: {e}", path.display())))
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

/// A function read from JSON: finite max-affine (`"pieces"`) or cell form (`"cells"`).
#[derive(Debug, Clone, PartialEq)]
pub enum AnyFunction {
    MaxAffine(MaxAffine),
    CellPA(CellPA),
}

impl AnyFunction {
    pub fn parse(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        if v.get("pieces").is_some() {
            Ok(AnyFunction::MaxAffine(serde_json::from_value(v)?))
        } else if v.get("cells").is_some() {
            Ok(AnyFunction::CellPA(serde_json::from_value(v)?))
        } else {
            Err(Error::InvalidInput("function JSON needs \"pieces\" or \"cells\"".into()))
        }
    }

    pub fn to_json(&self) -> Result<String> {
        match self {
            AnyFunction::MaxAffine(v) => to_json_string(v),
            AnyFunction::CellPA(u) => to_json_string(u),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AnyFunction::MaxAffine(v) => v.dim(),
            AnyFunction::CellPA(u) => u.dim(),
        }
    }

    pub fn into_cell_pa(self) -> Result<CellPA> {
        match self {
            AnyFunction::CellPA(u) => Ok(u),
            AnyFunction::MaxAffine(_) => Err(Error::InvalidInput("expected a function with bounded domain".into())),
        }
    }

    pub fn into_max_affine(self) -> Result<MaxAffine> {
        match self {
            AnyFunction::MaxAffine(v) => Ok(v),
            AnyFunction::CellPA(_) => Err(Error::InvalidInput("expected a finite max-affine function".into())),
        }
    }
}

/// `"1,2.5,-3"`.
pub fn parse_point(s: &str) -> Result<Point> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("not a number: {t:?}")))
        })
        .collect()
}

/// `"0,0;1,0;0,1"`.
pub fn parse_points(s: &str) -> Result<Vec<Point>> {
    s.split(';').map(parse_point).collect()
}

/// `"LO:HI"` with comma-separated corners, e.g. `-1,-1:1,1`.
pub fn parse_box(s: &str) -> Result<Polyhedron> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| Error::InvalidInput(format!("box must be LO:HI, got {s:?}")))?;
    let (lo, hi) = (parse_point(lo)?, parse_point(hi)?);
    if lo.len() != hi.len() {
        return Err(Error::DimensionMismatch { expected: lo.len(), got: hi.len() });
    }
    if lo.iter().zip(&hi).any(|(a, b)| a > b) {
        return Err(Error::InvalidInput(format!("box corners out of order: {s:?}")));
    }
    Polyhedron::cuboid(&lo, &hi)
}

/// Oracle read from a spec string. `controls` marks oracles that are not
/// valuations and are expected to fail the identity suites.
pub struct ParsedOracle<F> {
    pub oracle: ValuationOracle<F>,
    pub control: bool,
}

/// `zeta` (built-in weight), `zeta:PATH`, `const:C`, `sqvol`, `cellcount`.
pub fn oracle_on_cell_pa(spec: &str, dim: usize, read: &dyn Fn(&str) -> Result<String>) -> Result<ParsedOracle<CellPA>> {
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let parsed = match kind {
        "zeta" => ParsedOracle { oracle: zeta_oracle(&weight(arg, dim, read)?), control: false },
        "const" => ParsedOracle {
            oracle: ValuationOracle::constant(
                arg.parse().map_err(|_| Error::InvalidInput(format!("bad constant {arg:?}")))?,
            ),
            control: false,
        },
        "sqvol" => ParsedOracle { oracle: squared_volume_oracle(), control: true },
        "cellcount" => ParsedOracle { oracle: cell_count_oracle(), control: true },
        _ => return Err(Error::InvalidInput(format!("unknown oracle {spec:?}"))),
    };
    Ok(parsed)
}

/// `dual-zeta`, `dual-zeta:PATH`, `const:C` on finite max-affine functions.
pub fn oracle_on_max_affine(spec: &str, dim: usize, read: &dyn Fn(&str) -> Result<String>) -> Result<ValuationOracle<MaxAffine>> {
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    match kind {
        "dual-zeta" | "zeta" => Ok(dual_zeta_oracle(&weight(arg, dim, read)?)),
        "const" => Ok(ValuationOracle::constant(
            arg.parse().map_err(|_| Error::InvalidInput(format!("bad constant {arg:?}")))?,
        )),
        _ => Err(Error::InvalidInput(format!("unknown dual oracle {spec:?}"))),
    }
}

/// Test function from `path`, or the built-in weight when `path` is empty.
pub fn weight(path: &str, dim: usize, read: &dyn Fn(&str) -> Result<String>) -> Result<TestFunction> {
    if path.is_empty() {
        return Ok(reference_zeta(dim, 4.0));
    }
    let z: TestFunction = parse_json(&read(path)?)?;
    if z.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: z.dim() });
    }
    Ok(z)
}
