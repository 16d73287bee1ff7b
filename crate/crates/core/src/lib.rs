//! First and second order total variation denoising for circle-valued
//! signals and images.
//!
//! Angles are plain `f64` radians kept in `[-π, π)`. The main entry points
//! are [`cppa_denoise_1d`] and [`cppa_denoise_2d`]; the building blocks
//! (absolute cyclic differences, proximal maps, lifting) are public so they
//! can be tested and reused on their own.
//!
//! ```
//! use cyclic_tv::{cppa_denoise_1d, synth_signal_1d, Params1D};
//!
//! let f = synth_signal_1d(64).unwrap();
//! let report = cppa_denoise_1d(&f, &Params1D::new(0.5, 1.0).with_cycles(20)).unwrap();
//! assert_eq!(report.cycles_run, 20);
//! ```

pub mod cli;
pub mod cyclic;
pub mod error;
pub mod io;
pub mod lifting;
pub mod phase;
pub mod prox;
pub mod solver;
pub mod synth;

pub use cyclic::{
    abs_cyclic_diff_closed, abs_cyclic_diff_general, delta, geodesic_distance, geodesic_distance_value, sgn, wrap,
    wrap_value, Angle, DifferenceWeight, WeightOrder,
};
pub use error::{Error, Result};
pub use io::{read_phase_data, write_phase_data, Format};
pub use lifting::{
    check_convergence_conditions, check_convergence_conditions_1d, d_inf_between, d_inf_neighbors, lift,
    lift_near, lift_signal, lift_with_order, lifted_energy, ConvergenceCheck, LiftOrder, LiftedImage,
};
pub use phase::{PhaseGrid, PhaseImage, PhaseSignal};
pub use prox::{
    brute_force_prox, prox_cyclic_diff, prox_data_sq, prox_linear_abs_real, prox_linear_sq_real, prox_objective,
    Exponent, ProxConfig, ProxResult, RealProx,
};
pub use solver::{
    cppa_denoise_1d, cppa_denoise_2d, energy_1d, energy_2d, image_regularizers, lambda_at, ImageRegularizers,
    Params1D, Params2D, SolveReport,
};
pub use synth::{add_wrapped_gaussian, cmse, synth_signal_1d, synth_surface_2d, NoiseSpec, SyntheticSurface};
