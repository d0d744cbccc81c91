//! Structure of quasi-extremizers: dyadic level sets, popular level triples,
//! the extraction pipeline ending in a progression, and the spatial/frequency
//! uncertainty product. All operations act on one-dimensional grids.

mod levels;
mod pipeline;
mod power;
mod uncertainty;

pub use levels::{
    default_window, indicator_pairing, level_decompose, level_decompose_base, level_index, select_level_triple, Level,
    LevelDecomposition, LevelTriple, LEVEL_WINDOW,
};
pub use pipeline::{quasi_extremizer_extract, StructureReport};
pub use power::{power_lift, PowerLift, PowerLiftSummary};
pub use uncertainty::{uncertainty_product, UncertaintyProduct};
