use crate::convexfn::CellPA;
use crate::valuations::{OracleFlags, ValuationOracle};

/// `u -> vol(dom u)^2`: translation invariant but not a valuation.
pub fn squared_volume_oracle() -> ValuationOracle<CellPA> {
    ValuationOracle::new(
        "sqvol",
        OracleFlags { translation_invariant: true, continuous: true, degree: None },
        |u: &CellPA| Ok(u.domain().volume()?.powi(2)),
    )
}

/// `u -> number of cells`: discontinuous under refinement.
pub fn cell_count_oracle() -> ValuationOracle<CellPA> {
    ValuationOracle::new(
        "cellcount",
        OracleFlags { translation_invariant: true, continuous: false, degree: None },
        |u: &CellPA| Ok(u.cells().len() as f64),
    )
}
