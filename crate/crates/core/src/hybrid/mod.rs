//! Fourier analysis on ℤ×ℝ: hybrid functions, their transforms and mixed
//! norms, lifting of functions concentrated near ℤ, and concentration probes.

mod decomposition;
mod discrete;
mod function;
mod lift;
mod transform;

pub use decomposition::single_point_decomposition;
pub use discrete::{discrete_concentration, DiscreteConcentration};
pub use function::HybridFunction;
pub use lift::{lift, lift_near_extremizer_check, SUPPORT_TOLERANCE};
pub use transform::{
    hybrid_fourier, hybrid_fourier_at, hybrid_hy_ratio, mixed_norm, partial_transform, HybridSpectrum, TorusProduct,
    DEFAULT_THETA_RESOLUTION,
};
