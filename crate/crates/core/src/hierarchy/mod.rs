//! Recursive cell hierarchy: exact sequences, parameters, cell geometry and
//! safety predicates.

pub mod cells;
pub mod params;
pub mod safety;
pub mod sequences;

use thiserror::Error;

pub use cells::{is_separated, subdivision, zone_offsets, CellCoord, Geometry, Side};
pub use params::{parse_exact_uint, HierarchyParams, Mode, Violation};
pub use safety::{Selection, SafetyContext};
pub use sequences::{level_product, time_budget};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HierarchyError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cells at different levels ({0} and {1})")]
    LevelMismatch(u32, u32),
    #[error("0-cells have no landing zones")]
    NoLandingZone,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parameters are not runnable: {0}")]
    NotRunnable(String),
}
