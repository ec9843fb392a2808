//! The two unwrapped sinusoid families and their origin offsets.
//!
//! Both evaluators contain the term `sqrt(r² − (r·sin u)²)`. It is evaluated
//! as the signed `r·cos u`: the two agree on the half period |u| ≤ 90° and
//! the signed form is the analytic continuation that keeps the unrolled
//! intersection curve smooth past it. The absolute value would fold the curve
//! back at the quarter period.

use nalgebra::Point2;
use serde::{Deserialize, Serialize};

use crate::angles::{DesignInputs, FormingParameters, DELTA_MIN_DEG};
use crate::error::{Error, Result};
use crate::units::{cos_d, rad, sin_d, tan_d};

/// Points per sampled curve unless configured otherwise.
pub const DEFAULT_SAMPLES: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveKind {
    /// Intersection of two equal-radius cylinders, unrolled.
    TwoCylinder,
    /// Intersection of a cylinder and a plane, unrolled.
    PlaneCylinder,
}

/// How the plane-cylinder offset enters the curve: added (end cut) or
/// subtracted (bottom cut).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OffsetSign {
    PlusB,
    MinusC,
}

/// One sinusoidal cutting curve over an arc-length interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub kind: CurveKind,
    pub r: f64,
    pub alpha: f64,
    pub beta: f64,
    /// `A` for a two-cylinder curve (subtracted); the signed additive term
    /// for a plane-cylinder curve.
    pub offset: f64,
    pub x_domain: (f64, f64),
}

impl CurveSpec {
    pub fn two_cylinder(r: f64, alpha: f64, beta: f64, a: f64, x_domain: (f64, f64)) -> Self {
        CurveSpec {
            kind: CurveKind::TwoCylinder,
            r,
            alpha,
            beta,
            offset: a,
            x_domain,
        }
    }

    pub fn plane_cylinder(r: f64, alpha: f64, beta: f64, offset: f64, sign: OffsetSign, x_domain: (f64, f64)) -> Self {
        CurveSpec {
            kind: CurveKind::PlaneCylinder,
            r,
            alpha,
            beta,
            offset: signed(offset, sign),
            x_domain,
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self.kind {
            CurveKind::TwoCylinder => eval_two_cylinder(x, self.r, self.alpha, self.beta, self.offset),
            CurveKind::PlaneCylinder => {
                eval_plane_cylinder(x, self.r, self.alpha, self.beta, self.offset, OffsetSign::PlusB)
            }
        }
    }

    /// `dy/dx` at `x`.
    pub fn slope(&self, x: f64) -> Result<f64> {
        check_beta(self.beta)?;
        let u = x / self.r + rad(self.alpha);
        Ok(match self.kind {
            CurveKind::TwoCylinder => -u.sin() * sec_plus_tan(self.beta),
            CurveKind::PlaneCylinder => -tan_d(self.beta) * u.cos(),
        })
    }
}

/// An ordered point list in a flat frame (mm).
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline2 {
    pub points: Vec<Point2<f64>>,
    pub closed: bool,
}

impl Polyline2 {
    pub fn open(points: Vec<Point2<f64>>) -> Self {
        Polyline2 { points, closed: false }
    }

    /// Checks the structural invariants: at least two points, consecutive
    /// points at least `min_spacing` apart.
    pub fn validate(&self, min_spacing: f64) -> Result<()> {
        if self.points.len() < 2 {
            return Err(Error::geometry("polyline", "fewer than two points"));
        }
        for (i, w) in self.points.windows(2).enumerate() {
            if (w[1] - w[0]).norm() < min_spacing {
                return Err(Error::geometry(
                    "polyline",
                    format!("points {i} and {} coincide", i + 1),
                ));
            }
        }
        Ok(())
    }

    pub fn first(&self) -> Point2<f64> {
        self.points[0]
    }

    pub fn last(&self) -> Point2<f64> {
        self.points[self.points.len() - 1]
    }

    /// Total length along the points (including the closing segment when
    /// closed).
    pub fn length(&self) -> f64 {
        let open: f64 = self.points.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
        if self.closed && self.points.len() > 2 {
            open + (self.first() - self.last()).norm()
        } else {
            open
        }
    }

    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Polyline2 {
            points,
            closed: self.closed,
        }
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if cos_d(beta).abs() < 1e-12 {
        return Err(Error::geometry("beta", format!("cos β = 0 at β = {beta}°")));
    }
    Ok(())
}

fn sec_plus_tan(beta: f64) -> f64 {
    1.0 / cos_d(beta) + tan_d(beta)
}

fn signed(offset: f64, sign: OffsetSign) -> f64 {
    match sign {
        OffsetSign::PlusB => offset,
        OffsetSign::MinusC => -offset,
    }
}

/// Two-cylinder curve: `r·cos(x/r + α)·(sec β + tan β) − r·tan β − A`.
pub fn eval_two_cylinder(x: f64, r: f64, alpha: f64, beta: f64, a: f64) -> Result<f64> {
    check_beta(beta)?;
    let u = x / r + rad(alpha);
    Ok(r * u.cos() * sec_plus_tan(beta) - r * tan_d(beta) - a)
}

/// Plane-cylinder curve: `−tan β·(r·sin(x/r)·cos α + r·cos(x/r)·sin α) ± offset`.
pub fn eval_plane_cylinder(x: f64, r: f64, alpha: f64, beta: f64, offset: f64, sign: OffsetSign) -> Result<f64> {
    check_beta(beta)?;
    let t = x / r;
    Ok(-tan_d(beta) * (r * t.sin() * cos_d(alpha) + r * t.cos() * sin_d(alpha)) + signed(offset, sign))
}

/// `A`: the two-cylinder curve's raw value at `x = 0`.
pub fn offset_a(r: f64, alpha: f64, beta: f64) -> Result<f64> {
    eval_two_cylinder(0.0, r, alpha, beta, 0.0)
}

/// Components of the end-cut offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndOffset {
    /// Axial distance from the apex to the width-X plane, `X − I`.
    pub a: f64,
    /// Wing width in the flat state, `a / cos δ`.
    pub c: f64,
    /// End-cut value at `x = 0` with no offset.
    pub d: f64,
    /// `c − d`.
    pub b: f64,
}

pub fn offset_b(x_width: f64, apex: f64, delta: f64, r: f64, rho_end: f64, phi_end: f64) -> Result<EndOffset> {
    if x_width <= apex {
        return Err(Error::input(
            "I",
            format!("need I < X, got I = {apex} and X = {x_width}"),
        ));
    }
    if delta < DELTA_MIN_DEG {
        return Err(Error::geometry(
            "delta",
            format!("δ = {delta}° is below δ_min = {DELTA_MIN_DEG}°"),
        ));
    }
    let cd = cos_d(delta);
    if cd < 1e-9 {
        return Err(Error::geometry(
            "delta",
            format!("cos δ ≤ 0 at δ = {delta}°, the wing folds back past the end plane"),
        ));
    }
    let a = x_width - apex;
    let c = a / cd;
    let d = eval_plane_cylinder(0.0, r, phi_end, rho_end, 0.0, OffsetSign::PlusB)?;
    Ok(EndOffset { a, c, d, b: c - d })
}

/// Endpoint of the interior cut and the bottom-cut offset positioned through
/// it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BottomOffset {
    pub x_end: f64,
    pub y_end: f64,
    /// `None` when `ν = −90°`: the wing axis is level, and the bottom cut is
    /// the straight ruling `x′ = x_end`.
    pub c: Option<f64>,
}

/// Positions the bottom cut so it passes through the wing interior-curve
/// endpoint `(x_end, −y_end)` in the wing frame.
pub fn bottom_offset(
    r: f64,
    arc_angle: f64,
    alpha_int: f64,
    beta_int: f64,
    a: f64,
    psi: f64,
    nu: f64,
) -> Result<BottomOffset> {
    if !(arc_angle > 0.0 && arc_angle < 180.0) {
        return Err(Error::geometry(
            "arc_angle",
            format!("x_end = r·{arc_angle}° leaves the curve's half period"),
        ));
    }
    let x_end = r * rad(arc_angle);
    let y_end = eval_two_cylinder(x_end, r, alpha_int, beta_int, a)?;
    let c = if cos_d(nu).abs() < 1e-9 {
        None
    } else {
        Some(eval_plane_cylinder(x_end, r, psi, nu, 0.0, OffsetSign::PlusB)? + y_end)
    };
    Ok(BottomOffset { x_end, y_end, c })
}

/// `(x_end, y_end, C)` for a full parameter record.
pub fn offset_c(inputs: &DesignInputs, fp: &FormingParameters) -> Result<BottomOffset> {
    bottom_offset(
        inputs.r,
        inputs.arc_angle,
        fp.alpha_int,
        fp.beta_int,
        fp.offset_a,
        fp.psi_bot,
        fp.nu_bot,
    )
}

/// Reflection across the line through the origin at angle `mu`.
pub fn reflect_point(p: Point2<f64>, mu: f64) -> Point2<f64> {
    let (s, c) = rad(2.0 * mu).sin_cos();
    Point2::new(p.x * c + p.y * s, p.x * s - p.y * c)
}

pub fn reflect_across_mirror(poly: &Polyline2, mu: f64) -> Polyline2 {
    Polyline2 {
        points: poly.points.iter().map(|&p| reflect_point(p, mu)).collect(),
        closed: poly.closed,
    }
}

/// `n` points at uniform `x` spacing over the curve's domain.
pub fn sample_curve(spec: &CurveSpec, n: usize) -> Result<Polyline2> {
    if n < 2 {
        return Err(Error::input("samples", format!("need at least 2 samples, got {n}")));
    }
    let (x0, x1) = spec.x_domain;
    let points = (0..n)
        .map(|i| {
            let x = if i == n - 1 {
                x1
            } else {
                x0 + (x1 - x0) * i as f64 / (n - 1) as f64
            };
            spec.eval(x).map(|y| Point2::new(x, y))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Polyline2::open(points))
}
