//! Angular forming parameters.
//!
//! The authoritative model is a 3D vector construction: the primary axis is
//! `p = (1, 0, 0)`, the wing axis starts at `w₀ = (−cos θ, sin θ, 0)` (a plan
//! rotation by θ) and is then turned by ω about the internal bisector
//! `â = unit(p + w₀)`. The global `z` axis is the normal of the horizontal
//! orthogonal plane. Every other angle (tilt, wing-plane angle, cut phases,
//! bend) is read off this frame, and the law-of-cosines closed forms are
//! kept as cross-checks in the tests.

use nalgebra::{Rotation3, Unit, Vector3};
use serde::{Deserialize, Serialize};

use crate::curves;
use crate::error::{Error, Result};
use crate::geom::{rotation, V3};
use crate::units::{cos_d, deg, rad, sin_d, tan_d, wrap_half_turn};

/// Smallest admissible wing tilt δ in degrees. Below this the sec/tan terms
/// of the interior-cut curve and the 1/cos δ end offset blow up.
pub const DELTA_MIN_DEG: f64 = 1.0;

/// User-chosen scalars for one geometry instance. Lengths in mm, angles in
/// degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignInputs {
    /// Radius of both cylinders.
    pub r: f64,
    /// Plan (top view) wing rotation θ.
    pub theta: f64,
    /// Front-view wing rotation ω.
    pub omega: f64,
    /// Angle from the horizontal orthogonal plane to the flat top surface.
    pub gamma: f64,
    /// Angular extent of the rolled primary band.
    pub arc_angle: f64,
    /// Height of the planar band above the tangent line.
    pub flat_top_height: f64,
    /// Overall axial width of the formed geometry.
    #[serde(rename = "X")]
    pub width: f64,
    /// Axial distance from the primary outer edge to the interior-curve apex.
    #[serde(rename = "I")]
    pub apex_distance: f64,
}

impl DesignInputs {
    /// The worked example: a 1778 mm moldboard with a 30°/20° wing. The
    /// widths are the single-wing halves of the symmetric blade.
    pub fn reference() -> Self {
        DesignInputs {
            r: 1778.0,
            theta: 30.0,
            omega: 20.0,
            gamma: 55.0,
            arc_angle: 71.448,
            flat_top_height: 900.0,
            width: 2822.885,
            apex_distance: 1856.400,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("r", self.r),
            ("theta", self.theta),
            ("omega", self.omega),
            ("gamma", self.gamma),
            ("arc_angle", self.arc_angle),
            ("flat_top_height", self.flat_top_height),
            ("X", self.width),
            ("I", self.apex_distance),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::input(name, format!("{v} is not finite")));
            }
        }
        if self.r <= 0.0 {
            return Err(Error::input("r", format!("radius must be positive, got {}", self.r)));
        }
        if !(self.theta > 0.0 && self.theta < 90.0) {
            return Err(Error::input(
                "theta",
                format!("must lie in (0°, 90°), got {}°", self.theta),
            ));
        }
        if !(self.omega > -90.0 && self.omega < 90.0) {
            return Err(Error::input(
                "omega",
                format!("must lie in (−90°, 90°), got {}°", self.omega),
            ));
        }
        if !(self.gamma > 0.0 && self.gamma < 90.0) {
            return Err(Error::input(
                "gamma",
                format!("must lie in (0°, 90°), got {}°", self.gamma),
            ));
        }
        if !(self.arc_angle > 0.0 && self.arc_angle < 180.0) {
            return Err(Error::input(
                "arc_angle",
                format!("must lie in (0°, 180°), got {}°", self.arc_angle),
            ));
        }
        if self.flat_top_height < 0.0 {
            return Err(Error::input("flat_top_height", "must be non-negative"));
        }
        if !(self.apex_distance > 0.0 && self.apex_distance < self.width) {
            return Err(Error::input(
                "I",
                format!("need 0 < I < X, got I = {} and X = {}", self.apex_distance, self.width),
            ));
        }
        Ok(())
    }

    /// Arc length of the rolled primary band, `r · arc_angle`.
    pub fn arc_length(&self) -> f64 {
        self.r * rad(self.arc_angle)
    }

    /// Same geometry at `k` times the size.
    pub fn scaled(&self, k: f64) -> Self {
        DesignInputs {
            r: self.r * k,
            flat_top_height: self.flat_top_height * k,
            width: self.width * k,
            apex_distance: self.apex_distance * k,
            ..*self
        }
    }
}

/// Unit axis directions of the two cylinders, both through the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisFrame {
    pub primary: Vector3<f64>,
    pub wing: Vector3<f64>,
    /// Axis of the ω rotation.
    pub hinge: Vector3<f64>,
}

/// Every derived angle (degrees) and offset (mm) needed to cut, roll and bend
/// one instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FormingParameters {
    /// Angle between the axes `p` and `w`.
    pub lambda: f64,
    /// Wing tilt, `180° − λ`.
    pub delta: f64,
    /// Horizontal plane to wing plane.
    pub sigma: f64,
    pub alpha_int: f64,
    pub beta_int: f64,
    pub rho_end: f64,
    pub phi_end: f64,
    pub nu_bot: f64,
    pub psi_bot: f64,
    /// Dihedral along the wing axis between the wing plane and the vertical.
    pub chi: f64,
    /// Elevation of the wing axis above the horizontal plane, `arcsin(w_z)`.
    pub wing_elevation: f64,
    pub mirror_slope: f64,
    pub mu: f64,
    pub tau: f64,
    pub kappa: f64,
    /// Side of the flat top the wing folds to: `+1` or `−1`.
    pub bend_sense: f64,
    pub trim_angle: f64,
    #[serde(rename = "A")]
    pub offset_a: f64,
    /// Wing width in the flat state.
    #[serde(rename = "c")]
    pub wing_width: f64,
    /// End-cut zero offset component.
    #[serde(rename = "d")]
    pub end_zero_offset: f64,
    #[serde(rename = "B")]
    pub offset_b: f64,
    pub x_end: f64,
    pub y_end: f64,
    /// `None` when the wing axis is horizontal: the bottom cut is then a
    /// straight ruling and Eq.-2 style positioning does not apply.
    #[serde(rename = "C")]
    pub offset_c: Option<f64>,
}

pub fn wing_axis_frame(theta: f64, omega: f64) -> AxisFrame {
    let primary = Vector3::x();
    let w0 = Vector3::new(-cos_d(theta), sin_d(theta), 0.0);
    let hinge = Vector3::new(sin_d(theta / 2.0), cos_d(theta / 2.0), 0.0);
    let wing = Rotation3::from_axis_angle(&Unit::new_normalize(hinge), rad(omega)) * w0;
    AxisFrame { primary, wing, hinge }
}

/// `(λ, δ)` in degrees.
pub fn resultant_axis_angles(theta: f64, omega: f64) -> (f64, f64) {
    let f = wing_axis_frame(theta, omega);
    let lambda = deg(f.primary.dot(&f.wing).clamp(-1.0, 1.0).acos());
    (lambda, 180.0 - lambda)
}

/// σ, the angle from the horizontal plane to the plane of both axes. Odd in ω.
pub fn wing_plane_angle(theta: f64, omega: f64) -> Result<f64> {
    let w = wing_axis_frame(theta, omega).wing;
    if w.y.abs() < 1e-12 {
        return Err(Error::geometry(
            "sigma",
            "wing axis has no horizontal lateral component",
        ));
    }
    Ok(deg((w.z / w.y).atan()))
}

fn check_delta(delta: f64) -> Result<()> {
    if delta < DELTA_MIN_DEG {
        return Err(Error::geometry(
            "delta",
            format!("wing tilt δ = {delta:.4}° is below δ_min = {DELTA_MIN_DEG}°"),
        ));
    }
    Ok(())
}

/// `(α_int, β_int)` for the interior (two-cylinder) cuts. Negative-angle
/// convention: `α = −(σ + 90° − γ)`, `β = δ − 90°`.
pub fn interior_cut_params(delta: f64, sigma: f64, gamma: f64) -> Result<(f64, f64)> {
    check_delta(delta)?;
    Ok((-(sigma + (90.0 - gamma)), delta - 90.0))
}

/// `(ρ, φ)` for the wing end cut.
pub fn end_cut_params(delta: f64, sigma: f64, gamma: f64) -> Result<(f64, f64)> {
    check_delta(delta)?;
    Ok((delta, gamma - sigma))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BottomCut {
    pub nu: f64,
    pub psi: f64,
    pub chi: f64,
    /// `arcsin(w_z)`.
    pub elevation: f64,
}

/// Parameters of the wing bottom cut, read from the irregular tetrahedron
/// spanned by the axis crossing `O`, a point `A` one unit out along the
/// wing, the foot `V` of the vertical plane through `A` on the primary
/// axis, and the vertical through `A`.
pub fn bottom_cut_params(theta: f64, omega: f64, gamma: f64, sigma: f64) -> Result<BottomCut> {
    let w = wing_axis_frame(theta, omega).wing;
    let o = V3::zeros();
    let a = o - w;
    let v = Vector3::x() * a.x;
    let up = a + Vector3::z();
    let chi = dihedral(o, a, v, up)
        .ok_or_else(|| Error::geometry("chi", "tetrahedron is degenerate (wing axis parallel to the primary)"))?;
    let elevation = deg(w.z.clamp(-1.0, 1.0).asin());
    let nu = -deg(w.z.clamp(-1.0, 1.0).acos());
    Ok(BottomCut {
        nu,
        psi: (gamma - sigma) - chi,
        chi,
        elevation,
    })
}

/// Dihedral angle (degrees) along edge `e0 → e1` between the half-planes
/// through `f1` and `f2`.
fn dihedral(e0: V3, e1: V3, f1: V3, f2: V3) -> Option<f64> {
    let edge = (e1 - e0).normalize();
    let u = (f1 - e1) - edge * (f1 - e1).dot(&edge);
    let v = (f2 - e1) - edge * (f2 - e1).dot(&edge);
    if u.norm() < 1e-12 || v.norm() < 1e-12 {
        return None;
    }
    Some(deg(u.angle(&v)))
}

/// Slope of the mirror line at the apex and its angle μ.
pub fn mirror_line(alpha_int: f64, beta_int: f64) -> Result<(f64, f64)> {
    let cb = cos_d(beta_int);
    if cb.abs() < 1e-12 {
        return Err(Error::geometry(
            "beta_int",
            "cos β = 0, the interior curve is unbounded",
        ));
    }
    let slope = (1.0 / cb + tan_d(beta_int)) * -sin_d(alpha_int);
    Ok((slope, deg(slope.atan())))
}

/// `(τ, κ)`: the fold between the two flat tops that brings the tangent
/// lines (at ±(90° − μ) to the bend line) to the axis angle λ.
pub fn bend_angles(lambda: f64, mu: f64) -> Result<(f64, f64)> {
    check_delta(180.0 - lambda)?;
    let sec_mu = 1.0 / cos_d(mu);
    let chord_sq = 2.0 * sec_mu * sec_mu * (1.0 - cos_d(lambda));
    let cos_tau = 1.0 - chord_sq / 2.0;
    if cos_tau < -1.0 - 1e-12 {
        return Err(Error::geometry(
            "mu",
            format!("no fold reaches λ = {lambda:.4}° with a mirror line at μ = {mu:.4}°"),
        ));
    }
    let tau = deg(cos_tau.clamp(-1.0, 1.0).acos());
    Ok((tau, 180.0 - tau))
}

/// Which way the wing folds. The interior curve's apex curvature flips sign
/// with `cos α_int`, and the fold follows it.
pub fn bend_sense(alpha_int: f64) -> f64 {
    if cos_d(alpha_int) >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// In-plane rotation (degrees, counter-clockwise in the flat frame) of the
/// wing's top edge about its bend-line end, so that after folding it lies in
/// the tertiary plane.
///
/// Untrimmed, the wing top edge continues the primary top edge (the flat
/// `+y` direction). Work in the primary flat frame: flat top `z = 0`, bend
/// line `b = (cos μ, sin μ, 0)`, tertiary plane normal `x̂`.
pub fn wing_top_trim_angle(mu: f64, kappa: f64, bend_sense: f64) -> f64 {
    let b = Vector3::new(cos_d(mu), sin_d(mu), 0.0);
    let fold = rotation(b, -bend_sense * rad(kappa));
    let along = fold * Vector3::y();
    let across = fold * Vector3::z().cross(&Vector3::y());
    wrap_half_turn(deg((-along.x).atan2(across.x)))
}

/// Runs the whole parameter chain for one instance.
pub fn forming_parameters(inputs: &DesignInputs) -> Result<FormingParameters> {
    inputs.validate()?;
    let DesignInputs {
        r, theta, omega, gamma, ..
    } = *inputs;

    let (lambda, delta) = resultant_axis_angles(theta, omega);
    check_delta(delta)?;
    let sigma = wing_plane_angle(theta, omega)?;
    let (alpha_int, beta_int) = interior_cut_params(delta, sigma, gamma)?;
    let (rho_end, phi_end) = end_cut_params(delta, sigma, gamma)?;
    let bottom = bottom_cut_params(theta, omega, gamma, sigma)?;
    let (mirror_slope, mu) = mirror_line(alpha_int, beta_int)?;
    let (tau, kappa) = bend_angles(lambda, mu)?;
    let sense = bend_sense(alpha_int);
    let trim_angle = wing_top_trim_angle(mu, kappa, sense);

    let offset_a = curves::offset_a(r, alpha_int, beta_int)?;
    let end = curves::offset_b(inputs.width, inputs.apex_distance, delta, r, rho_end, phi_end)?;
    let bottom_off = curves::bottom_offset(
        r,
        inputs.arc_angle,
        alpha_int,
        beta_int,
        offset_a,
        bottom.psi,
        bottom.nu,
    )?;

    Ok(FormingParameters {
        lambda,
        delta,
        sigma,
        alpha_int,
        beta_int,
        rho_end,
        phi_end,
        nu_bot: bottom.nu,
        psi_bot: bottom.psi,
        chi: bottom.chi,
        wing_elevation: bottom.elevation,
        mirror_slope,
        mu,
        tau,
        kappa,
        bend_sense: sense,
        trim_angle,
        offset_a,
        wing_width: end.c,
        end_zero_offset: end.d,
        offset_b: end.b,
        x_end: bottom_off.x_end,
        y_end: bottom_off.y_end,
        offset_c: bottom_off.c,
    })
}
