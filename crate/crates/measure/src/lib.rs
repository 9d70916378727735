//! Measure-theoretic side of the push-out: Hausdorff measure estimates, the
//! radial-projection magnification `λ(y; z)`, the concentric search simplex
//! `σ_γ`, apex selection and the closed-form constants `φ`, `ψ`, `K`.

pub mod apex;
pub mod constants;
pub mod error;
pub mod hausdorff;
pub mod magnification;

pub use apex::{
    acceptance_frequency, admissible, default_gamma, face_integrands, select_z0, sigma_gamma,
    z0_in_y, SelectOptions, Z0Selection,
};
pub use constants::{
    binomial, filtrations, gamma_star, k_constants, phi, phi_constants, phi_tilde, psi, psi_m,
    ConstantsBundle, PhiConstants,
};
pub use error::{MeasureError, Result};
pub use hausdorff::{hausdorff_points, hausdorff_weighted, omega, MeasureEstimate, Method};
pub use magnification::{h_to_face, in_zeta, lambda_eig, magnification_bound, MagnificationBound};

/// Minimum apex-to-sample distance, relative to `diam σ`.
pub const APEX_GAP_REL: f64 = 1e-3;
