//! Sumsets, additive energy, multiprogressions and the searches built on
//! them: coprime progressions, Diophantine gap maps, large determinants,
//! rank-two Freiman covers, popular-sum extraction and Kneser-type covers.

mod bsg;
mod determinant;
mod example;
mod freiman;
mod gap;
mod intervals;
mod kneser;
mod progression;
mod sets;

pub use bsg::*;
pub use determinant::*;
pub use example::*;
pub use freiman::*;
pub use gap::*;
pub use intervals::*;
pub use kneser::*;
pub use progression::*;
pub use sets::*;
