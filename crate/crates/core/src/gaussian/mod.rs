//! The Gaussian extremizer manifold: parameters, sampling, closed-form
//! transforms, projection onto the manifold and distances to it.

mod distance;
mod optim;
mod poly;
mod projection;

pub use distance::{dist_to_gaussians, DistanceResult};
pub use optim::{bfgs, BfgsOptions, BfgsResult};
pub use poly::{basis_len, basis_monomials, gaussian_fourier, sample, tangent_basis, Gaussian, GaussianJson, QuadraticPolynomial};
pub use projection::{
    coords_distance, distance_to, moment_init, normal_residuals, project, project_from, ProjectionResult, BASIN_THRESHOLD,
    CONVERGENCE_TOL, MAX_ITER,
};
