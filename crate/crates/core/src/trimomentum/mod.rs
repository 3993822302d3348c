//! Tri-momentum maps, their polytope images, and the quaternary bracket.

pub mod certify;
pub mod grassmann;
pub mod nambu;

pub use certify::{
    calibrate_momentum_normalization, horizontality_check, left_mult_generator, modified_psi,
    momentum_identity_check, mu_diagonal, mu_standard, FormField, VectorField,
    MOMENTUM_NORMALIZATION,
};
pub use grassmann::{
    basis_change, grassmann_coords, matroid_hull_contains, orbit_scan, spheroid_act,
    GrassmannPoint, Hypersimplex, MomentumReport, SpheroidElement,
};
pub use nambu::{
    gradient, hamiltonian_field, nambu_flow, quaternary_bracket, xi_standard, FlowSpec,
    Hamiltonian, ScalarField, Trajectory, FD_STEP,
};
