//! Delocalization (position-uncertainty) measures for quantum states on the
//! circle: the windowed angle variance Dφ(φ₀) and the measures built from it
//! (mean, minimum, packet-center value), the older centroid and logarithmic
//! measures, packet-center finding, and Schrödinger-Robertson-type
//! uncertainty relations.

pub mod circle_state;
pub mod cli;
pub mod error;
pub mod measures;
pub mod numerics;
pub mod windowed_moments;

pub use circle_state::{
    catalog, catalog_spec, make_cat, make_coherent, make_density_poly, make_eigenstate,
    make_from_samples, make_trig, CircleState, Phase, StateKind, StateSpec,
};
pub use error::{Error, Result};
pub use measures::{
    measure_a, measure_b, measure_c, measure_kr, measure_report, measure_tilde, mean_sq_cov,
    packet_centers, relation_report, Centers, MeasureReport, RelationId, RelationReport,
};
pub use numerics::{
    fixed_points, integrate_window, minimize_periodic, FixedPoints, Minimum, QuadratureConfig,
    ScanGrid,
};
pub use windowed_moments::{
    central_moment_phi, covariance_lz_phi, expectation_exp_ikphi, exp_2lz_moments, lz_moments,
    mean_phi, trig_moments, variance_phi, WindowEngine, WindowMoments,
};
