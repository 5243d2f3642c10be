//! Sharp lower bounds for Poincare, p-Poincare and log-Sobolev constants of
//! one-dimensional weighted spaces satisfying curvature-dimension-diameter
//! conditions CDD(K, N, D).
//!
//! The library provides the model-measure machinery those bounds reduce to:
//! distorted means, the model density family with its canonical shift/scale
//! form, Neumann Sturm-Liouville and p-Laplacian eigenvalue solvers (with
//! singular-endpoint and infinite-interval exhaustion), Muckenhoupt and
//! Bobkov-Goetze two-sided estimators, and the case-table dispatch for the
//! three inequalities.

pub mod bounds;
pub mod curvature;
pub mod density;
pub mod error;
pub mod hardy;
mod interp;
pub mod means;
mod ode;
pub mod plap;
pub mod ptrig;
mod shoot;
pub mod sl;

pub use bounds::{
    compute_bound, diameter_sweep, log_sobolev_bound, monotonicity_sweep, p_poincare_bound,
    poincare_bound, BoundRequest, BoundResult, Diagnostics, Inequality, Method, SweepRow,
    SweepTable, SweepVerdict,
};
pub use curvature::{l_delta, CurvatureDimension};
pub use density::{
    canonical_form, cd_differential_check, cd_midpoint_check, model_density_value, model_support,
    sample_density, CanonicalForm, CaseTag, CdCheckReport, GridDensity, MidpointCheckReport,
    ModelMeasure, Profile,
};
pub use error::{Error, Result};
pub use hardy::{
    bobkov_gotze_estimate, build_distribution, cheeger_constant, isoperimetric_profile_flat,
    ledoux_constant, ls_bound_closed, ls_upsilon0, muckenhoupt_estimate, DistributionCache,
    Exactness, TwoSidedEstimate, DEFAULT_BG_BRACKET,
};
pub use means::{classical_mean, distorted_mean_m, distorted_mean_mtilde, sigma, tau};
pub use plap::{
    plap_first_eigenvalue, plap_first_eigenvalue_grid, plap_first_eigenvalue_profile,
    rayleigh_quotient_p, PlapResult,
};
pub use ptrig::{pi_p, PTrig};
pub use sl::{
    eigenvalue_boundary_derivative, rayleigh_quotient, sign_changes, sl_eigenvalue_exhaustion,
    sl_exhaustion_profile, sl_first_eigenvalue, sl_first_eigenvalue_grid,
    sl_first_eigenvalue_profile, EigenResult, Exhaustion, Side,
};
