//! Cycle-time analysis for P-time event graphs and switched linear-dual
//! inequality systems over the max-plus/min-plus pair of semirings.
//!
//! | module | contents |
//! |---|---|
//! | [`scalar`] | extended-real scalars, the two products, exact-rational carrier |
//! | [`matrix`] | tropical matrices, Kleene star, circuit tests, maximum circuit mean |
//! | [`ncp`] | the nonpositive-circuit feasibility problem and its solver/oracle |
//! | [`pteg`] | P-time event graphs, compilation, analysis, synthesis |
//! | [`sldi`] | switched systems under fixed periodic schedules |
//! | [`trajectory`] | trajectory checking, unrolling, CSV interchange |
//! | [`model_io`] | JSON model files and result rendering |

pub mod error;
pub mod matrix;
pub mod model_io;
pub mod ncp;
pub mod pteg;
pub mod scalar;
pub mod sldi;
pub mod trajectory;

pub use error::{Error, Result};
pub use matrix::{CircuitClass, TropMatrix};
pub use model_io::{load_model, parse_model, Model};
pub use ncp::{oracle_ncp, solve_ncp, CycleTimeSet, PicInstance};
pub use pteg::{Place, Pteg, PtegNet};
pub use scalar::{Number, Rational, Trop};
pub use sldi::Sldi;
pub use trajectory::{ConstraintKind, TrajectoryReport, Violation};
