//! Seeded instance generators, property suites for the valuation identities,
//! continuity diagnostics and demonstrations of the degenerate cases.

mod controls;
mod demos;
mod generators;
mod report;
mod suites;

pub use controls::{cell_count_oracle, squared_volume_oracle};
pub use demos::{
    coercive_divergence_demo, growth_demo, growth_fit, growth_grid, polynomial_growth_control, CoerciveReport,
    CoerciveRow, GrowthReport, BALL_SIDES,
};
pub use generators::{
    case_seed, gen_cell_pa, gen_cell_pa_with, gen_inclusion_family, gen_lattice_pair, gen_max_affine,
    gen_max_affine_with, rng, LatticeConstruction, LatticePair,
};
pub use report::{CaseFailure, SuiteReport, NEGATIVE_CONTROL_FLOOR};
pub use suites::{
    continuity_suite, inclusion_exclusion_defect, inclusion_exclusion_suite, valuation_identity_suite,
    ContinuityReport, SmoothTarget, CONTINUITY_TOLERANCE, INCLUSION_EXCLUSION_TOLERANCE, VALUATION_TOLERANCE,
};
