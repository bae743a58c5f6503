use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::convexfn::Conjugate;
use crate::error::Result;

/// Caller-asserted properties of an oracle. For oracles on finite functions,
/// `translation_invariant` refers to dual epi-translation invariance and
/// `degree` to ordinary homogeneity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OracleFlags {
    pub translation_invariant: bool,
    pub continuous: bool,
    pub degree: Option<usize>,
}

type Evaluator<F> = Arc<dyn Fn(&F) -> Result<f64> + Send + Sync>;

/// A black-box functional on convex functions of type `F`.
pub struct ValuationOracle<F> {
    name: String,
    flags: OracleFlags,
    eval: Evaluator<F>,
}

impl<F> Clone for ValuationOracle<F> {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            flags: self.flags,
            eval: self.eval.clone(),
        }
    }
}

impl<F> fmt::Debug for ValuationOracle<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ValuationOracle")
            .field("name", &self.name)
            .field("flags", &self.flags)
            .finish()
    }
}

impl<F: 'static> ValuationOracle<F> {
    pub fn new(
        name: impl Into<String>,
        flags: OracleFlags,
        eval: impl Fn(&F) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            flags,
            eval: Arc::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn flags(&self) -> OracleFlags {
        self.flags
    }

    pub fn eval(&self, u: &F) -> Result<f64> {
        (self.eval)(u)
    }

    pub fn constant(c: f64) -> Self {
        Self::new(
            format!("const:{c}"),
            OracleFlags {
                translation_invariant: true,
                continuous: true,
                degree: Some(0),
            },
            move |_| Ok(c),
        )
    }

    /// `u -> a + b Z(u)`.
    pub fn affine_combination(a: f64, b: f64, z: &ValuationOracle<F>) -> Self {
        let inner = z.clone();
        let degree = match (a == 0.0, b == 0.0) {
            (true, _) => z.flags.degree,
            (false, true) => Some(0),
            (false, false) if z.flags.degree == Some(0) => Some(0),
            _ => None,
        };
        Self::new(
            format!("{a} + {b}*{}", z.name),
            OracleFlags { degree, ..z.flags },
            move |u| Ok(a + b * inner.eval(u)?),
        )
    }

    /// `u -> Z1(u) + Z2(u)`.
    pub fn sum(z1: &ValuationOracle<F>, z2: &ValuationOracle<F>) -> Self {
        let (a, b) = (z1.clone(), z2.clone());
        let degree = if z1.flags.degree == z2.flags.degree { z1.flags.degree } else { None };
        Self::new(
            format!("{} + {}", z1.name, z2.name),
            OracleFlags {
                translation_invariant: z1.flags.translation_invariant && z2.flags.translation_invariant,
                continuous: z1.flags.continuous && z2.flags.continuous,
                degree,
            },
            move |u| Ok(a.eval(u)? + b.eval(u)?),
        )
    }

    pub fn with_flags(mut self, flags: OracleFlags) -> Self {
        self.flags = flags;
        self
    }
}

/// `Z*(v) = Z(v*)`. Translation invariance maps to dual translation
/// invariance and epi-homogeneity to homogeneity of the same degree.
pub fn dual_wrap<G>(z: &ValuationOracle<G::Dual>) -> ValuationOracle<G>
where
    G: Conjugate + 'static,
    G::Dual: 'static,
{
    let inner = z.clone();
    ValuationOracle::new(format!("dual({})", z.name()), z.flags(), move |v: &G| {
        inner.eval(&v.conjugate()?)
    })
}
