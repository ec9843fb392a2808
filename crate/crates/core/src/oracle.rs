//! Numerical reference for the closed-form curves.
//!
//! Intersection curves are traced directly on the 3D surfaces: for each
//! ruling of the developed cylinder, Newton iteration solves the implicit
//! cut equation for the axial coordinate, marching from ruling to ruling with
//! step halving. The result is unrolled isometrically. Nothing here touches
//! the sinusoid formulas.

use nalgebra::Point2;

use crate::angles::AxisFrame;
use crate::curves::Polyline2;
use crate::error::{Error, Result};
use crate::geom::{bisect, V3};
use crate::units::{cos_d, sin_d};

/// What cuts the developed cylinder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cut {
    /// The other cylinder of the pair (same radius, axis through the origin).
    Cylinder,
    /// `normal · P = offset`.
    Plane { normal: V3, offset: f64 },
}

/// An isometric development of one of the two cylinders, both of radius `r`
/// with axes through the origin.
///
/// The primary surface point at development coordinates `(x, y)` is
/// `(y + apex)·p + r·(cos φ·n + sin φ·t)` with `φ = x/r`, where `n` points from
/// the axis to the tangent line and `t` is the roll direction. The wing
/// development is the primary one seen through the reflection that swaps the
/// two axes, with `y` negated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Development {
    pub r: f64,
    /// Primary axis `p`.
    pub axis: V3,
    /// Wing axis `w`.
    pub wing_axis: V3,
    pub normal: V3,
    pub roll: V3,
    /// Axial coordinate of the development origin.
    pub apex: f64,
    /// Develops the wing cylinder rather than the primary one.
    pub is_wing: bool,
}

impl Development {
    /// Development of the primary cylinder with the flat top at `gamma` to
    /// the horizontal. The origin is the seam point on the tangent ruling.
    pub fn primary(frame: &AxisFrame, r: f64, gamma: f64) -> Result<Self> {
        let mut d = Development {
            r,
            axis: frame.primary,
            wing_axis: frame.wing,
            normal: V3::new(0.0, sin_d(gamma), -cos_d(gamma)),
            roll: V3::new(0.0, cos_d(gamma), sin_d(gamma)),
            apex: 0.0,
            is_wing: false,
        };
        d.apex = d.seam_start(0.0)?;
        Ok(d)
    }

    /// Development of the wing cylinder matching the primary one along the
    /// seam.
    pub fn wing(&self) -> Self {
        Development { is_wing: true, ..*self }
    }

    fn mirror(&self) -> V3 {
        (self.axis - self.wing_axis).normalize()
    }

    fn reflect(&self, v: V3) -> V3 {
        if self.is_wing {
            let m = self.mirror();
            v - m * (2.0 * v.dot(&m))
        } else {
            v
        }
    }

    /// 3D point at development coordinates `(x, y)`.
    pub fn point(&self, x: f64, y: f64) -> V3 {
        let phi = x / self.r;
        let y = if self.is_wing { -y } else { y };
        self.reflect(self.axis * (y + self.apex) + (self.normal * phi.cos() + self.roll * phi.sin()) * self.r)
    }

    /// `∂P/∂y`.
    fn ruling(&self) -> V3 {
        if self.is_wing {
            -self.reflect(self.axis)
        } else {
            self.axis
        }
    }

    /// Development coordinates of a 3D point on the surface.
    pub fn unroll(&self, p: V3) -> Point2<f64> {
        let q = self.reflect(p);
        let phi = q.dot(&self.roll).atan2(q.dot(&self.normal));
        let y = q.dot(&self.axis) - self.apex;
        Point2::new(self.r * phi, if self.is_wing { -y } else { y })
    }

    fn residual(&self, cut: &Cut, p: V3) -> (f64, V3) {
        match *cut {
            Cut::Cylinder => {
                let a = if self.is_wing { self.axis } else { self.wing_axis };
                let radial = p - a * p.dot(&a);
                (radial.norm_squared() - self.r * self.r, radial * 2.0)
            }
            Cut::Plane { normal, offset } => (normal.dot(&p) - offset, normal),
        }
    }

    /// Seam root on the ruling at `x`, bracketed over a long axial range.
    /// Of the two seam branches, the one on the mitre plane with normal
    /// `p − w` is kept.
    fn seam_start(&self, x: f64) -> Result<f64> {
        let f = |y: f64| self.residual(&Cut::Cylinder, self.point(x, y)).0;
        let span = 50.0 * self.r;
        let steps = 20_000;
        let mitre = self.mirror();
        let mut best: Option<(f64, f64)> = None;
        let mut y0 = -span;
        let mut f0 = f(y0);
        for i in 1..=steps {
            let y1 = -span + 2.0 * span * i as f64 / steps as f64;
            let f1 = f(y1);
            if (f0 < 0.0) != (f1 < 0.0) {
                let root = bisect(f, y0, y1, 1e-13 * self.r);
                let off = self.point(x, root).dot(&mitre).abs();
                if best.is_none_or(|(_, b)| off < b) {
                    best = Some((root, off));
                }
            }
            y0 = y1;
            f0 = f1;
        }
        best.map(|(y, _)| y)
            .ok_or_else(|| Error::NoIntersection("the cylinders do not meet on the tangent ruling".into()))
    }

    /// Newton solve for `y` on the ruling at `x`.
    fn newton(&self, cut: &Cut, x: f64, mut y: f64) -> Option<f64> {
        let dir = self.ruling();
        for _ in 0..60 {
            let (g, grad) = self.residual(cut, self.point(x, y));
            let slope = grad.dot(&dir);
            if slope.abs() < 1e-300 {
                return None;
            }
            let step = g / slope;
            y -= step;
            if !y.is_finite() {
                return None;
            }
            if step.abs() <= 1e-13 * self.r.max(y.abs()) {
                return Some(y);
            }
        }
        None
    }
}

/// Traces the cut on the development at `n` uniformly spaced `x` values over
/// `x_domain` and returns the unrolled points.
pub fn unwrap_oracle(dev: &Development, cut: &Cut, x_domain: (f64, f64), n: usize) -> Result<Polyline2> {
    if n < 2 {
        return Err(Error::input("samples", "need at least 2 samples"));
    }
    let (x0, x1) = x_domain;
    let xs: Vec<f64> = (0..n).map(|i| x0 + (x1 - x0) * i as f64 / (n - 1) as f64).collect();

    let seed = match cut {
        Cut::Cylinder => dev.seam_start(x0)?,
        Cut::Plane { .. } => 0.0,
    };
    let start = dev
        .newton(cut, x0, seed)
        .ok_or_else(|| Error::NoIntersection(format!("cut not found on the ruling at x = {x0}")))?;

    let mut pts = vec![Point2::new(x0, start)];
    let (mut x, mut y, mut dy) = (x0, start, 0.0);
    for &target in &xs[1..] {
        let mut h = target - x;
        while x != target {
            let trial = if (x + h - target).abs() < 1e-15 * dev.r {
                target
            } else {
                x + h
            };
            let guess = y + dy * (trial - x);
            match dev.newton(cut, trial, guess) {
                Some(y1) if (y1 - guess).abs() <= 0.05 * dev.r => {
                    dy = (y1 - y) / (trial - x);
                    x = trial;
                    y = y1;
                    h = target - x;
                }
                _ => {
                    h *= 0.5;
                    if h.abs() < 1e-9 * dev.r {
                        return Err(Error::NoIntersection(format!("tracing lost the curve near x = {x}")));
                    }
                }
            }
        }
        pts.push(Point2::new(x, y));
    }
    Ok(Polyline2::open(pts))
}
