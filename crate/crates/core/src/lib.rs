//! Exact wall-and-chamber calculator for Bridgeland stability conditions on a
//! K3 surface `X` with `Pic X = Z·H`, `H² = 2d`.
//!
//! Everything is computed over the rationals on the slice `ω = tH`, `β = bH`,
//! parameterized by `(b, T = t²)`:
//!
//! - [`lattice`]: Mukai vectors, the Mukai pairing, and numerical autoequivalences.
//! - [`charge`]: central charges, phase comparison, slope/discrepancy, and the
//!   spherical-hole test for the geometric chamber.
//! - [`walls`]: numerical walls, destabilizer enumeration, the Gieseker-chamber
//!   bound, wall annotations, and spherical-class constraint solving.
//! - [`divisors`]: the nef class `w_σ`, its limits, and nef/movable cone data for
//!   Hilbert schemes of points.

pub mod charge;
pub mod divisors;
pub mod error;
pub mod exec;
pub mod lattice;
pub mod rational;
pub mod walls;

pub use charge::{
    central_charge, is_geometric, phase_compare, slope_and_discrepancy, ChargeValue,
    GeometricTest, SlopeData, StabilityPoint,
};
pub use divisors::{
    bb_square, curve_divisor_pairing, hilb_nef_cone, lagrangian_check, theta_hilb, w_limit_infinity,
    w_limit_zero, w_sigma, ConeKind, ConeResult, CurveClass, HilbDivisor, HilbNefCone,
    LagrangianData, OrthogonalClass,
};
pub use error::{Error, ParseRatError, Result};
pub use exec::Execution;
pub use lattice::{
    classify, mukai_pairing, spherical_reflect, tensor_line_bundle, ClassKind, Classification,
    MukaiClass, SurfaceData,
};
pub use rational::Rat;
pub use walls::{
    classify_wall, gieseker_bound, potential_destabilizers, spherical_solver, wall_of_pair,
    walls_on_vertical_path, Constraint, Destabilizer, GiesekerBoundReport, PathCrossing,
    RatInterval, Region, Wall, WallFlags, WallGeometry,
};
