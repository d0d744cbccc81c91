//! Second variation of the Hausdorff–Young functional at the Gaussian: the
//! quadratic form, the sharp/flat split, the operator 𝒯 with its Hermite
//! spectrum, pointwise expansion bounds and the sharpness family.

mod hermite;
mod operator;
mod pointwise;
mod quadratic;
mod sharpness;
mod spectral;
mod split;
mod taylor;

pub use hermite::*;
pub use operator::*;
pub use pointwise::*;
pub use quadratic::*;
pub use sharpness::*;
pub use spectral::*;
pub use split::*;
pub use taylor::*;
