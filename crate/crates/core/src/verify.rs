//! Residual measurements on a formed model.

use nalgebra::{Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::angles::DesignInputs;
use crate::forming::{FormedModel, Plane};
use crate::geom::V3;
use crate::pattern::EdgeKind;
use crate::units::{deg, wrap_half_turn};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceSet {
    /// Largest admissible seam gap, mm.
    pub seam: f64,
    /// Largest admissible edge-to-plane distance, mm.
    pub plane: f64,
    /// Largest admissible normal deviation, degrees.
    pub normal_deg: f64,
}

impl ToleranceSet {
    /// `1e−5·r` for the seam, `1e−4·X` for plane distance, 0.01° for normals.
    pub fn for_inputs(inputs: &DesignInputs) -> Self {
        ToleranceSet {
            seam: 1e-5 * inputs.r,
            plane: 1e-4 * inputs.width,
            normal_deg: 0.01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaneKind {
    Horizontal,
    Vertical,
    Tertiary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgePlanarity {
    pub edge: String,
    pub plane: PlaneKind,
    pub rms_distance: f64,
    pub max_distance: f64,
    /// Angle between the fitted edge plane and the target plane. For a
    /// straight edge, the angle between the edge line and the target plane.
    pub normal_deviation: f64,
    /// Reported but not counted towards `pass`.
    pub control: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub seam_gap_max: f64,
    pub seam_gap_rms: f64,
    pub planarity: Vec<EdgePlanarity>,
    /// Angle between the formed wing axis and the design wing axis, degrees.
    pub wing_axis_deviation: f64,
    /// Distance between the two formed axes at their closest point, mm.
    pub axis_skew: f64,
    pub pass: bool,
    pub tolerances: ToleranceSet,
}

impl VerificationReport {
    pub fn planarity_max(&self) -> f64 {
        self.planarity.iter().map(|p| p.max_distance).fold(0.0, f64::max)
    }

    pub fn edge(&self, name: &str) -> Option<&EdgePlanarity> {
        self.planarity.iter().find(|p| p.edge == name)
    }
}

/// Distances of `points` to `plane` and the orientation mismatch.
pub fn measure_planarity(points: &[V3], plane: &Plane) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let d: Vec<f64> = points.iter().map(|p| plane.distance(p).abs()).collect();
    let max = d.iter().copied().fold(0.0, f64::max);
    let rms = (d.iter().map(|x| x * x).sum::<f64>() / n).sqrt();

    let centroid = points.iter().fold(V3::zeros(), |a, p| a + p) / n;
    let cov = points.iter().fold(Matrix3::zeros(), |a, p| {
        let q = p - centroid;
        a + q * q.transpose()
    });
    let eig = SymmetricEigen::new(cov);
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let (big, mid) = (eig.eigenvalues[idx[0]], eig.eigenvalues[idx[1]]);
    let deviation = if mid <= 1e-12 * big {
        let dir = eig.eigenvectors.column(idx[0]).into_owned();
        deg(dir.dot(&plane.normal).abs().clamp(0.0, 1.0).asin())
    } else {
        let normal = eig.eigenvectors.column(idx[2]).into_owned();
        deg(normal.dot(&plane.normal).abs().clamp(0.0, 1.0).acos())
    };
    (rms, max, deviation)
}

pub fn verify(m: &FormedModel, tol: &ToleranceSet) -> VerificationReport {
    let pts = |k: EdgeKind| m.edge(k).map(|e| e.points.clone()).unwrap_or_default();

    let prim = pts(EdgeKind::PrimaryInterior);
    let wing = pts(EdgeKind::WingInterior);
    let gaps: Vec<f64> = prim.iter().rev().zip(&wing).map(|(a, b)| (a - b).norm()).collect();
    let seam_gap_max = gaps.iter().copied().fold(0.0, f64::max);
    let seam_gap_rms = (gaps.iter().map(|g| g * g).sum::<f64>() / gaps.len().max(1) as f64).sqrt();

    let mut end = pts(EdgeKind::WingEndRolled);
    end.extend(pts(EdgeKind::WingEndFlat));
    let checks = [
        ("wing_end", end, PlaneKind::Vertical, false),
        ("wing_bottom", pts(EdgeKind::WingBottom), PlaneKind::Horizontal, false),
        ("wing_top", pts(EdgeKind::WingTop), PlaneKind::Tertiary, false),
        (
            "primary_bottom",
            pts(EdgeKind::PrimaryBottom),
            PlaneKind::Horizontal,
            true,
        ),
    ];
    let planarity: Vec<EdgePlanarity> = checks
        .into_iter()
        .filter(|(_, p, _, _)| p.len() >= 2)
        .map(|(name, points, kind, control)| {
            let plane = match kind {
                PlaneKind::Horizontal => &m.planes.horizontal,
                PlaneKind::Vertical => &m.planes.vertical,
                PlaneKind::Tertiary => &m.planes.tertiary,
            };
            let (rms_distance, max_distance, normal_deviation) = measure_planarity(&points, plane);
            EdgePlanarity {
                edge: name.to_string(),
                plane: kind,
                rms_distance,
                max_distance,
                normal_deviation,
                control,
            }
        })
        .collect();

    let wing_axis_deviation = deg(m.wing_axis.dir.angle(&-m.axis_frame.wing));
    let pass = seam_gap_max <= tol.seam
        && planarity
            .iter()
            .all(|p| p.max_distance <= tol.plane && p.normal_deviation <= tol.normal_deg)
        && wing_axis_deviation <= tol.normal_deg
        && m.axis_skew <= tol.seam;

    VerificationReport {
        seam_gap_max,
        seam_gap_rms,
        planarity,
        wing_axis_deviation,
        axis_skew: m.axis_skew,
        pass,
        tolerances: *tol,
    }
}

/// In-plane rotation (degrees, counter-clockwise in the flat frame) that
/// would bring the formed wing top edge into the tertiary plane. Zero for a
/// correctly trimmed model; the trim angle itself for an untrimmed one.
pub fn measure_trim_misalignment(m: &FormedModel) -> Option<f64> {
    let top = &m.edge(EdgeKind::WingTop)?.points;
    let (from, to) = (top[top.len() - 1], top[0]);
    let d = (to - from).normalize();
    let across = m.wing_frame.normal.cross(&d);
    let n = m.planes.tertiary.normal;
    Some(wrap_half_turn(deg((-d.dot(&n)).atan2(across.dot(&n)))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forming::form_model;
    use crate::pattern::{build_flat_pattern, build_flat_pattern_with, PatternOptions};
    use approx::assert_abs_diff_eq;

    #[test]
    fn reference_passes() {
        let inputs = DesignInputs::reference();
        let m = form_model(&build_flat_pattern(&inputs).unwrap()).unwrap();
        let rep = verify(&m, &ToleranceSet::for_inputs(&inputs));
        assert!(rep.pass, "{rep:#?}");
        assert!(rep.seam_gap_max <= 1e-5 * inputs.r);
        assert!(rep.edge("primary_bottom").unwrap().max_distance < 1e-9);
    }

    #[test]
    fn planarity_of_known_sets() {
        let plane = Plane {
            normal: V3::z(),
            offset: 2.0,
        };
        let flat = [V3::new(0.0, 0.0, 2.0), V3::new(1.0, 0.0, 2.0), V3::new(0.0, 1.0, 2.0)];
        let (rms, max, dev) = measure_planarity(&flat, &plane);
        assert_eq!((rms, max), (0.0, 0.0));
        assert!(dev < 1e-9);
        let tilted = [
            V3::new(0.0, 0.0, 2.0),
            V3::new(1.0, 0.0, 2.0 + 1.0f64.to_radians().tan()),
        ];
        let (_, _, dev) = measure_planarity(&tilted, &plane);
        assert_abs_diff_eq!(dev, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn trim_matches_measured_misalignment() {
        for (theta, omega) in [(30.0, 20.0), (30.0, 10.0), (20.0, -10.0)] {
            let inputs = DesignInputs {
                theta,
                omega,
                ..DesignInputs::reference()
            };
            let raw = build_flat_pattern_with(
                &inputs,
                &PatternOptions {
                    apply_trim: false,
                    ..Default::default()
                },
            )
            .unwrap();
            let measured = measure_trim_misalignment(&form_model(&raw).unwrap()).unwrap();
            assert_abs_diff_eq!(measured, raw.forming_parameters.trim_angle, epsilon = 1e-9);
            let trimmed = form_model(&build_flat_pattern(&inputs).unwrap()).unwrap();
            assert!(measure_trim_misalignment(&trimmed).unwrap().abs() < 1e-6);
        }
    }
}
