//! Realization of the special Kähler structure as a parabolic affine sphere:
//! the graph of the potential `u` over Darboux coordinates, with Blaschke
//! metric `G = Hess u` and `det G = 1`.

mod congruence;
mod constancy;
mod darboux;
mod immerse;
mod potential;

pub use congruence::{paraboloid_congruence, Congruence, CongruenceResult};
pub use constancy::{constancy_certificates, spreads_of, ConstancySpreads, ConstancyValues};
pub use darboux::{darboux, ma_residual, metric_g, standard_complex_structure, DarbouxFrame};
pub use immerse::{
    flags, immerse, immerse_points, Grid, GridAxis, ImmersionSample, Immersion, Screening, DEFAULT_DEGENERATE_MARGIN,
};
pub use potential::{
    fd_potential_hessian, invert_darboux, potential_fd_config, potential_form, potential_on_segment, potential_u,
};
