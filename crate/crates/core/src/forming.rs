//! Flat pattern back to 3D: roll both pieces to radius `r`, fold the wing by
//! κ about the bend line, and place the result in the global frame of the
//! orthogonal planes.
//!
//! Global frame: `x` is the primary axis `p`, `z` is the normal of the
//! horizontal plane, and the flat top makes the angle γ with the horizontal.
//! Both formed axes pass through the origin.

use nalgebra::{Matrix3, Point2, Vector3};
use serde::{Deserialize, Serialize};

use crate::angles::{wing_axis_frame, AxisFrame};
use crate::error::{Error, Result};
use crate::geom::{rotation, V3};
use crate::pattern::{EdgeKind, FlatPattern, Piece};
use crate::units::{cos_d, rad, sin_d};

/// Placement of one piece's flat frame in 3D. The tangent line is the flat
/// `y` axis; the cylinder axis sits at `origin − r·normal`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PieceFrame {
    pub origin: V3,
    /// Roll direction at the tangent line.
    pub x_axis: V3,
    /// Cylinder axis direction.
    pub y_axis: V3,
    /// Flat-top normal, pointing away from the cylinder axis.
    pub normal: V3,
}

impl PieceFrame {
    fn local() -> Self {
        PieceFrame {
            origin: V3::zeros(),
            x_axis: V3::x(),
            y_axis: V3::y(),
            normal: V3::z(),
        }
    }

    fn transformed(&self, m: &Matrix3<f64>, shift: V3) -> Self {
        PieceFrame {
            origin: m * self.origin + shift,
            x_axis: m * self.x_axis,
            y_axis: m * self.y_axis,
            normal: m * self.normal,
        }
    }

    pub fn axis(&self, r: f64) -> Line {
        Line {
            point: self.origin - self.normal * r,
            dir: self.y_axis,
        }
    }
}

/// Flat point to 3D. `x ≤ 0` stays in the flat-top plane; `x > 0` wraps onto
/// the radius-`r` cylinder tangent to it along the `x = 0` line.
pub fn roll_map(p: Point2<f64>, r: f64, frame: &PieceFrame) -> V3 {
    if p.x <= 0.0 {
        frame.origin + frame.x_axis * p.x + frame.y_axis * p.y
    } else {
        let f = p.x / r;
        frame.origin + frame.x_axis * (r * f.sin()) + frame.y_axis * p.y - frame.normal * (r * (1.0 - f.cos()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub point: V3,
    pub dir: V3,
}

/// `normal · P = offset`, unit normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plane {
    pub normal: V3,
    pub offset: f64,
}

impl Plane {
    pub fn distance(&self, p: &V3) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Planes {
    pub horizontal: Plane,
    /// Perpendicular to the primary axis at axial width X.
    pub vertical: Plane,
    /// Normal to the flat top through its top edge.
    pub tertiary: Plane,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormedEdge {
    pub kind: EdgeKind,
    pub points: Vec<V3>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FormOptions {
    /// Fold angle in degrees to use instead of κ.
    pub bend_override: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct FormedModel {
    pub pattern: FlatPattern,
    pub primary_frame: PieceFrame,
    pub wing_frame: PieceFrame,
    pub edges: Vec<FormedEdge>,
    pub planes: Planes,
    /// Design axes the model should reproduce.
    pub axis_frame: AxisFrame,
    pub primary_axis: Line,
    pub wing_axis: Line,
    /// Closest distance between the two formed axes.
    pub axis_skew: f64,
    /// Fold angle actually applied, degrees.
    pub fold: f64,
}

impl FormedModel {
    pub fn frame(&self, piece: Piece) -> &PieceFrame {
        match piece {
            Piece::Primary => &self.primary_frame,
            Piece::Wing => &self.wing_frame,
        }
    }

    /// 3D image of a point given in its piece's flat frame.
    pub fn map(&self, piece: Piece, local: Point2<f64>) -> V3 {
        roll_map(local, self.pattern.inputs.r, self.frame(piece))
    }

    pub fn edge(&self, kind: EdgeKind) -> Option<&FormedEdge> {
        self.edges.iter().find(|e| e.kind == kind)
    }

    pub fn primary_points(&self) -> impl Iterator<Item = (EdgeKind, &V3)> {
        self.piece_points(Piece::Primary)
    }

    pub fn wing_points(&self) -> impl Iterator<Item = (EdgeKind, &V3)> {
        self.piece_points(Piece::Wing)
    }

    fn piece_points(&self, piece: Piece) -> impl Iterator<Item = (EdgeKind, &V3)> {
        self.edges
            .iter()
            .filter(move |e| e.kind.piece() == piece)
            .flat_map(|e| e.points.iter().map(move |p| (e.kind, p)))
    }
}

/// Closest points of two lines as parameters along each; `None` if parallel.
fn closest_params(a: &Line, b: &Line) -> Option<(f64, f64)> {
    let w = a.point - b.point;
    let (aa, ab, bb) = (a.dir.dot(&a.dir), a.dir.dot(&b.dir), b.dir.dot(&b.dir));
    let (aw, bw) = (a.dir.dot(&w), b.dir.dot(&w));
    let den = aa * bb - ab * ab;
    if den.abs() < 1e-14 * aa * bb {
        return None;
    }
    Some(((ab * bw - bb * aw) / den, (aa * bw - ab * aw) / den))
}

pub fn form_model(pattern: &FlatPattern) -> Result<FormedModel> {
    form_model_with(pattern, &FormOptions::default())
}

pub fn form_model_with(pattern: &FlatPattern, opts: &FormOptions) -> Result<FormedModel> {
    let inputs = &pattern.inputs;
    let fp = &pattern.forming_parameters;
    let r = inputs.r;

    // Local frame: the shared flat top is z = 0 with CS1 axes as x and y.
    let mu = fp.mu;
    let fold = opts.bend_override.unwrap_or(fp.kappa);
    let bend = V3::new(cos_d(mu), sin_d(mu), 0.0);
    let fold_rot = rotation(bend, -fp.bend_sense * rad(fold));
    let two_mu = 2.0 * mu;
    let e1 = V3::new(cos_d(two_mu), sin_d(two_mu), 0.0);
    let e2 = V3::new(-sin_d(two_mu), cos_d(two_mu), 0.0);
    let primary_local = PieceFrame::local();
    let wing_local = PieceFrame {
        origin: V3::zeros(),
        x_axis: fold_rot * e1,
        y_axis: fold_rot * e2,
        normal: fold_rot * V3::z(),
    };

    let pa = primary_local.axis(r);
    let wa = wing_local.axis(r);
    let (t, s) = closest_params(&pa, &wa).ok_or_else(|| Error::geometry("mu", "formed cylinder axes are parallel"))?;
    let on_primary = pa.point + pa.dir * t;
    let axis_skew = (on_primary - (wa.point + wa.dir * s)).norm();

    let (sg, cg) = (sin_d(inputs.gamma), cos_d(inputs.gamma));
    let g = Matrix3::from_columns(&[V3::new(0.0, cg, sg), V3::x(), V3::new(0.0, sg, -cg)]);
    let shift = -(g * on_primary);
    let primary_frame = primary_local.transformed(&g, shift);
    let wing_frame = wing_local.transformed(&g, shift);

    let edges = pattern
        .edges
        .iter()
        .map(|e| {
            let frame = match e.kind.piece() {
                Piece::Primary => &primary_frame,
                Piece::Wing => &wing_frame,
            };
            FormedEdge {
                kind: e.kind,
                points: pattern
                    .local_points(e)
                    .into_iter()
                    .map(|q| roll_map(q, r, frame))
                    .collect(),
            }
        })
        .collect();

    let horizontal = Plane {
        normal: Vector3::z(),
        offset: roll_map(Point2::new(fp.x_end, 0.0), r, &primary_frame).z,
    };
    let apex = primary_frame.origin;
    let vertical = Plane {
        normal: Vector3::x(),
        offset: apex.x + (inputs.width - inputs.apex_distance),
    };
    let tertiary_n = primary_frame.x_axis;
    let tertiary = Plane {
        normal: tertiary_n,
        offset: tertiary_n.dot(&roll_map(Point2::new(-inputs.flat_top_height, 0.0), r, &primary_frame)),
    };

    Ok(FormedModel {
        pattern: pattern.clone(),
        primary_frame,
        wing_frame,
        edges,
        planes: Planes {
            horizontal,
            vertical,
            tertiary,
        },
        axis_frame: wing_axis_frame(inputs.theta, inputs.omega),
        primary_axis: primary_frame.axis(r),
        wing_axis: wing_frame.axis(r),
        axis_skew,
        fold,
    })
}
