//! Manufactured solutions, interpolation, error norms, convergence studies
//! and the structural verification suite.

pub mod convergence;
pub mod interpolation;
pub mod manufactured;
pub mod norms;
pub mod trig;
pub mod verify;

pub use convergence::{
    convergence_study, interpolation_study, solve_level, ConvergenceRecord, InterpolationRecord, Rates,
    StudyConfig,
};
pub use interpolation::{evaluate_field, interpolate_i, interpolate_i_discrete, interpolate_r};
pub use manufactured::{manufactured, manufactured_layer, manufactured_smooth, ExampleKind, ManufacturedSolution};
pub use norms::{error_norms, ErrorReport};
pub use verify::{
    discrete_poincare_eigenvalue, verify_commuting, verify_complex, verify_jump_property, verify_unisolvence,
};
