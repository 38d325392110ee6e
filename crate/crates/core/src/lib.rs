//! Numerical construction, classification and verification of
//! translating solitons of the mean curvature flow in H^2 x R.
//!
//! The library integrates rotationally symmetric profile curves in
//! arc length, analyzes the associated phase plane, builds the bowl
//! soliton and the translating-catenoid family, extracts their
//! asymptotic behavior, and checks the soliton equation pointwise in
//! three equivalent formulations (prescribed mean curvature, weighted
//! minimality, conformal minimality).

pub mod asymptotics;
pub mod builders;
pub mod config;
pub mod error;
pub mod export;
pub mod hyperbolic;
pub mod ode;
pub mod phase;
pub mod profile;
pub mod verify;

pub use builders::{
    build_bowl, build_catenoid, c1_distance_to_bowl, solve_rotational_dirichlet, tau,
    tau_from_bowl, C1Distance, Catenoid, ProfileKind, RadialDirichlet, SolitonProfile,
    VerticalPlane, R_MAX_SUPPORTED,
};
pub use config::{IntegratorConfig, ASYMPTOTIC_WINDOW, INV_SQRT5};
pub use error::{Error, Result};
pub use export::{
    mesh_revolution, profile_rows, read_profile_csv, write_json, write_obj, write_profile_csv,
    CsvRow, Model, RevolutionMesh,
};
pub use hyperbolic::{AmbientPoint, HyperboloidPoint, PoincarePoint};
pub use profile::{Event, EventKind, ProfileState, Segment, StopSpec};
pub use verify::{
    height_extrema_census, soliton_residual, verify_profile, weighted_area_first_variation, Bump,
    CurvatureSample, VerificationReport,
};
