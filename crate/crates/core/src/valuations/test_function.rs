use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, Point};

type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Compactly supported weight `q(y) (1 - |y|^2 / rho^2)_+^k` with a polynomial
/// `q`, or an arbitrary callable accepted without support guarantees.
#[derive(Clone)]
pub struct TestFunction {
    dim: usize,
    terms: Vec<(Vec<u32>, f64)>,
    rho: f64,
    k: u32,
    custom: Option<ScalarFn>,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.custom {
            Some(_) => write!(f, "TestFunction(unchecked, dim={})", self.dim),
            None => f
                .debug_struct("TestFunction")
                .field("dim", &self.dim)
                .field("terms", &self.terms)
                .field("rho", &self.rho)
                .field("k", &self.k)
                .finish(),
        }
    }
}

impl TestFunction {
    pub fn new(dim: usize, terms: Vec<(Vec<u32>, f64)>, rho: f64, k: u32) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionUnsupported(0));
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::InvalidInput(format!("support radius must be positive, got {rho}")));
        }
        if k < 1 {
            return Err(Error::InvalidInput("smoothness exponent must be at least 1".into()));
        }
        for (e, c) in &terms {
            if e.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: e.len(),
                });
            }
            if !c.is_finite() {
                return Err(Error::InvalidInput("non-finite coefficient".into()));
            }
        }
        Ok(Self {
            dim,
            terms,
            rho,
            k,
            custom: None,
        })
    }

    /// `c (1 - |y|^2 / rho^2)_+^k`.
    pub fn bump(dim: usize, c: f64, rho: f64, k: u32) -> Result<Self> {
        Self::new(dim, vec![(vec![0; dim], c)], rho, k)
    }

    /// Arbitrary callable; support is not checked.
    pub fn unchecked(dim: usize, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            dim,
            terms: vec![],
            rho: f64::INFINITY,
            k: 1,
            custom: Some(Arc::new(f)),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Support radius; infinite for unchecked callables.
    pub fn radius(&self) -> f64 {
        self.rho
    }

    pub fn is_checked(&self) -> bool {
        self.custom.is_none()
    }

    pub fn polynomial(&self, y: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                c * e
                    .iter()
                    .zip(y)
                    .map(|(&p, &x)| x.powi(p as i32))
                    .product::<f64>()
            })
            .sum()
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        if let Some(f) = &self.custom {
            return f(y);
        }
        let r2 = dot(y, y) / (self.rho * self.rho);
        if r2 >= 1.0 {
            return 0.0;
        }
        self.polynomial(y) * (1.0 - r2).powi(self.k as i32)
    }
}

#[derive(Serialize, Deserialize)]
struct TestFunctionJson {
    dim: usize,
    poly: BTreeMap<String, f64>,
    rho: f64,
    k: u32,
}

impl Serialize for TestFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.custom.is_some() {
            return Err(serde::ser::Error::custom("unchecked test functions are not serializable"));
        }
        let mut poly = BTreeMap::new();
        for (e, c) in &self.terms {
            let key = e.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
            *poly.entry(key).or_insert(0.0) += c;
        }
        TestFunctionJson {
            dim: self.dim,
            poly,
            rho: self.rho,
            k: self.k,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TestFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = TestFunctionJson::deserialize(d)?;
        let mut terms = vec![];
        for (key, c) in raw.poly {
            let e = key
                .split(',')
                .map(|p| p.trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| D::Error::custom(format!("bad monomial key {key:?}")))?;
            terms.push((e, c));
        }
        TestFunction::new(raw.dim, terms, raw.rho, raw.k).map_err(D::Error::custom)
    }
}

/// One factor of a three-slot weight.
#[derive(Clone)]
pub enum Slot {
    One,
    Bump(TestFunction),
    /// Indicator of the closed box `[lo, hi]`.
    Box { lo: Point, hi: Point },
    Custom(ScalarFn),
}

impl fmt::Debug for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::One => write!(f, "One"),
            Slot::Bump(t) => write!(f, "Bump({t:?})"),
            Slot::Box { lo, hi } => write!(f, "Box({lo:?}, {hi:?})"),
            Slot::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl Slot {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Slot::One => 1.0,
            Slot::Bump(t) => t.eval(x),
            Slot::Box { lo, hi } => {
                let inside = x.iter().zip(lo.iter().zip(hi)).all(|(v, (a, b))| *a <= *v && *v <= *b);
                if inside {
                    1.0
                } else {
                    0.0
                }
            }
            Slot::Custom(f) => f(x),
        }
    }

    /// Box containing the support, if one is known.
    pub fn support_box(&self, dim: usize) -> Option<(Point, Point)> {
        match self {
            Slot::Bump(t) if t.is_checked() => Some((vec![-t.radius(); dim], vec![t.radius(); dim])),
            Slot::Box { lo, hi } => Some((lo.clone(), hi.clone())),
            _ => None,
        }
    }
}

/// Product weight `z0(t) z1(x) z2(y)` on values, points and gradients.
#[derive(Debug, Clone)]
pub struct TestFunction3 {
    pub value: Slot,
    pub point: Slot,
    pub gradient: Slot,
}

impl TestFunction3 {
    pub fn new(value: Slot, point: Slot, gradient: Slot) -> Self {
        Self {
            value,
            point,
            gradient,
        }
    }

    pub fn eval(&self, t: f64, x: &[f64], y: &[f64]) -> f64 {
        let a = self.point.eval(x);
        if a == 0.0 {
            return 0.0;
        }
        let b = self.gradient.eval(y);
        if b == 0.0 {
            return 0.0;
        }
        a * b * self.value.eval(&[t])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_is_exact() {
        let z = TestFunction::new(2, vec![(vec![1, 0], 2.0), (vec![0, 0], 1.0)], 1.5, 2).unwrap();
        assert_eq!(z.eval(&[1.5, 0.0]), 0.0);
        assert_eq!(z.eval(&[3.0, -1.0]), 0.0);
        let y = [0.5, 0.5];
        let want = (1.0 + 2.0 * 0.5) * (1.0f64 - 0.5 / 2.25).powi(2);
        assert!((z.eval(&y) - want).abs() < 1e-15);
    }

    #[test]
    fn json_roundtrip() {
        let s = r#"{"dim":2,"poly":{"0,0":1.0,"2,1":-0.5},"rho":2.0,"k":3}"#;
        let z: TestFunction = serde_json::from_str(s).unwrap();
        assert_eq!(z.eval(&[0.0, 0.0]), 1.0);
        let back: TestFunction = serde_json::from_str(&serde_json::to_string(&z).unwrap()).unwrap();
        assert_eq!(back.eval(&[0.3, -0.2]), z.eval(&[0.3, -0.2]));
        assert!(serde_json::from_str::<TestFunction>(r#"{"dim":1,"poly":{"0":1.0},"rho":-1.0,"k":1}"#).is_err());
        assert!(serde_json::from_str::<TestFunction>(r#"{"dim":1,"poly":{"x":1.0},"rho":1.0,"k":1}"#).is_err());
    }

    #[test]
    fn slots() {
        let w = TestFunction3::new(
            Slot::One,
            Slot::Box { lo: vec![0.0], hi: vec![1.0] },
            Slot::Bump(TestFunction::bump(1, 2.0, 1.0, 1).unwrap()),
        );
        assert_eq!(w.eval(5.0, &[0.5], &[0.0]), 2.0);
        assert_eq!(w.eval(5.0, &[1.5], &[0.0]), 0.0);
    }
}
