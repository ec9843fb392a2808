//! Flat-pattern generation and verification for two intersecting
//! equal-radius cylindrical surfaces bounded by orthogonal planes.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`angles`] turns the design rotations (θ, ω, γ) into every forming
//!    angle: axis tilt, wing-plane angle, cut-curve phases, mirror slope,
//!    bend and trim.
//! 2. [`curves`] evaluates the two unwrapped sinusoid families (two-cylinder
//!    and plane-cylinder) and positions them with the A/B/C offsets.
//! 3. [`pattern`] stitches the curves and straight blank edges into a single
//!    closed cut loop and exports it ([`export`]).
//! 4. [`forming`] rolls and bends the flat pattern back into 3D, and
//!    [`verify`] measures seam closure and edge planarity against the
//!    orthogonal planes. [`oracle`] traces the true 3D intersection curves
//!    numerically as an independent check on the closed-form curves.
//!
//! All public angles are degrees; conversions live in [`units`].

pub mod angles;
pub mod curves;
pub mod error;
pub mod export;
pub mod forming;
pub mod mesh;
pub mod oracle;
pub mod pattern;
pub mod units;
pub mod verify;

mod geom;

pub use angles::{forming_parameters, AxisFrame, DesignInputs, FormingParameters};
pub use curves::{CurveKind, CurveSpec, Polyline2};
pub use error::{Error, Result};
pub use forming::{form_model, roll_map, FormedModel};
pub use pattern::{build_flat_pattern, FlatPattern};
pub use verify::{verify, ToleranceSet, VerificationReport};
