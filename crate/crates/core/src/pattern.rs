//! The one-piece flat blank.
//!
//! Frame CS1 has its origin at the interior-curve apex on the primary
//! tangent line, `x` along the roll direction (`x > 0` is the rolled band,
//! `x < 0` the flat top) and `y` along the primary axis. Frame CS2 shares the
//! origin and is CS1 turned by `2μ`; a CS1 point reflected across the mirror
//! line `(x, y)` has CS2 coordinates `(x, −y)`. Wing curves are generated in
//! CS2 and stored, like every edge, in CS1.

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use crate::angles::{forming_parameters, DesignInputs, FormingParameters};
use crate::curves::{self, CurveSpec, OffsetSign, Polyline2, DEFAULT_SAMPLES};
use crate::error::{Error, Result};
use crate::geom::{bisect, line_intersection, segments_cross, P2};
use crate::units::{cos_d, sin_d, tan_d};

/// Boundary edges of the blank, listed in cut-loop order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    PrimaryOuter,
    PrimaryBottom,
    PrimaryInterior,
    WingInterior,
    WingBottom,
    WingEndRolled,
    WingEndFlat,
    WingTop,
    PrimaryTop,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 9] = [
        EdgeKind::PrimaryOuter,
        EdgeKind::PrimaryBottom,
        EdgeKind::PrimaryInterior,
        EdgeKind::WingInterior,
        EdgeKind::WingBottom,
        EdgeKind::WingEndRolled,
        EdgeKind::WingEndFlat,
        EdgeKind::WingTop,
        EdgeKind::PrimaryTop,
    ];

    pub fn piece(self) -> Piece {
        match self {
            EdgeKind::PrimaryOuter | EdgeKind::PrimaryBottom | EdgeKind::PrimaryInterior | EdgeKind::PrimaryTop => {
                Piece::Primary
            }
            _ => Piece::Wing,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EdgeKind::PrimaryOuter => "primary_outer",
            EdgeKind::PrimaryBottom => "primary_bottom",
            EdgeKind::PrimaryInterior => "primary_interior",
            EdgeKind::WingInterior => "wing_interior",
            EdgeKind::WingBottom => "wing_bottom",
            EdgeKind::WingEndRolled => "wing_end_rolled",
            EdgeKind::WingEndFlat => "wing_end_flat",
            EdgeKind::WingTop => "wing_top",
            EdgeKind::PrimaryTop => "primary_top",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Piece {
    Primary,
    Wing,
}

/// What generated an edge. Curve specs are in the frame of the edge's piece
/// (CS1 for the primary, CS2 for the wing).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeSource {
    Curve(CurveSpec),
    Reflected(CurveSpec),
    Straight(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub kind: EdgeKind,
    pub source: EdgeSource,
    /// CS1 coordinates, oriented along the cut loop.
    pub points: Vec<P2>,
}

impl Edge {
    pub fn first(&self) -> P2 {
        self.points[0]
    }

    pub fn last(&self) -> P2 {
        self.points[self.points.len() - 1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    TangentLinePrimary,
    TangentLineWing,
    MirrorLine,
    BendLine,
    /// The untrimmed wing top edge, kept as a reference mark.
    TrimLine,
}

impl FeatureKind {
    pub fn name(self) -> &'static str {
        match self {
            FeatureKind::TangentLinePrimary => "tangent_line_primary",
            FeatureKind::TangentLineWing => "tangent_line_wing",
            FeatureKind::MirrorLine => "mirror_line",
            FeatureKind::BendLine => "bend_line",
            FeatureKind::TrimLine => "trim_line",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureLine {
    pub kind: FeatureKind,
    pub segment: [P2; 2],
}

/// A 2D frame given in CS1: origin and the direction of its `x` axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub origin: P2,
    /// Degrees, counter-clockwise from the CS1 `x` axis.
    pub angle: f64,
}

impl Frame {
    fn axes(&self) -> (Vector2<f64>, Vector2<f64>) {
        let (s, c) = (sin_d(self.angle), cos_d(self.angle));
        (Vector2::new(c, s), Vector2::new(-s, c))
    }

    /// CS1 point to frame coordinates.
    pub fn to_local(&self, q: P2) -> P2 {
        let (e1, e2) = self.axes();
        let d = q - self.origin;
        P2::new(d.dot(&e1), d.dot(&e2))
    }

    /// Frame coordinates to a CS1 point.
    pub fn to_cs1(&self, l: P2) -> P2 {
        let (e1, e2) = self.axes();
        self.origin + e1 * l.x + e2 * l.y
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frames {
    pub cs1: Frame,
    pub cs2: Frame,
}

/// Named points of the blank, CS1 coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Landmarks {
    /// Bend line meets the top edge.
    pub bend_top: P2,
    /// Trimmed wing top edge meets the wing end cut.
    pub wing_top_end: P2,
    /// Wing bottom cut meets the wing end cut.
    pub wing_bottom_end: P2,
    /// CS2 `x′` of `wing_bottom_end`.
    pub corner_x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatPattern {
    pub inputs: DesignInputs,
    pub forming_parameters: FormingParameters,
    pub trimmed: bool,
    pub edges: Vec<Edge>,
    pub feature_lines: Vec<FeatureLine>,
    pub frames: Frames,
    pub landmarks: Landmarks,
    /// Where the two developments overlap, when the build allowed it. Such a
    /// blank still forms correctly but cannot be cut from one sheet.
    pub overlap: Option<String>,
}

impl FlatPattern {
    pub fn edge(&self, kind: EdgeKind) -> Option<&Edge> {
        self.edges.iter().find(|e| e.kind == kind)
    }

    /// The closed cut boundary with joints stored once.
    pub fn outer_loop(&self) -> Polyline2 {
        let mut points: Vec<P2> = Vec::new();
        for e in &self.edges {
            let skip = usize::from(!points.is_empty());
            points.extend(e.points.iter().skip(skip));
        }
        if points.len() > 1 {
            points.pop();
        }
        Polyline2 { points, closed: true }
    }

    /// Edge points in the frame of the edge's piece.
    pub fn local_points(&self, edge: &Edge) -> Vec<P2> {
        match edge.kind.piece() {
            Piece::Primary => edge.points.clone(),
            Piece::Wing => edge.points.iter().map(|&q| self.frames.cs2.to_local(q)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternOptions {
    /// Points per sampled edge.
    pub samples: usize,
    /// Rotate the wing top edge by the trim angle. Turning it off yields the
    /// straight continuation of the primary top edge.
    pub apply_trim: bool,
    /// Record a self-overlapping blank in [`FlatPattern::overlap`] instead
    /// of failing.
    pub allow_overlap: bool,
}

impl Default for PatternOptions {
    fn default() -> Self {
        PatternOptions {
            samples: DEFAULT_SAMPLES,
            apply_trim: true,
            allow_overlap: false,
        }
    }
}

pub fn build_flat_pattern(inputs: &DesignInputs) -> Result<FlatPattern> {
    build_flat_pattern_with(inputs, &PatternOptions::default())
}

fn straight(a: P2, b: P2, n: usize) -> Vec<P2> {
    (0..n)
        .map(|i| {
            if i == n - 1 {
                b
            } else {
                a + (b - a) * (i as f64 / (n - 1) as f64)
            }
        })
        .collect()
}

/// Every root of `f` on `(lo, hi)`, located by a uniform scan plus bisection.
fn roots(f: impl Fn(f64) -> f64, lo: f64, hi: f64, steps: usize, tol: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let h = (hi - lo) / steps as f64;
    let mut x0 = lo;
    let mut f0 = f(x0);
    for i in 1..=steps {
        let x1 = lo + h * i as f64;
        let f1 = f(x1);
        if f0 == 0.0 {
            out.push(x0);
        } else if (f0 < 0.0) != (f1 < 0.0) && f1 != 0.0 {
            out.push(bisect(&f, x0, x1, tol));
        }
        x0 = x1;
        f0 = f1;
    }
    out
}

pub fn build_flat_pattern_with(inputs: &DesignInputs, opts: &PatternOptions) -> Result<FlatPattern> {
    if opts.samples < 2 {
        return Err(Error::input(
            "samples",
            format!("need at least 2 samples, got {}", opts.samples),
        ));
    }
    let fp = forming_parameters(inputs)?;
    let n = opts.samples;
    let r = inputs.r;
    let h = inputs.flat_top_height;
    let i_dist = inputs.apex_distance;
    let x_end = fp.x_end;
    let cs1 = Frame {
        origin: P2::origin(),
        angle: 0.0,
    };
    let cs2 = Frame {
        origin: P2::origin(),
        angle: 2.0 * fp.mu,
    };

    let bend_top = P2::new(-h, -h * tan_d(fp.mu));
    if bend_top.y <= -i_dist {
        return Err(Error::geometry(
            "flat_top_height",
            "the bend line leaves the primary flat top through its outer edge",
        ));
    }

    let interior = CurveSpec::two_cylinder(r, fp.alpha_int, fp.beta_int, fp.offset_a, (0.0, x_end));
    let end = CurveSpec::plane_cylinder(r, fp.phi_end, fp.rho_end, fp.offset_b, OffsetSign::PlusB, (0.0, 0.0));
    let bottom = fp
        .offset_c
        .map(|c| CurveSpec::plane_cylinder(r, fp.psi_bot, fp.nu_bot, c, OffsetSign::MinusC, (x_end, x_end)));

    // Corner of the wing bottom and end cuts, CS2.
    let corner_x = match &bottom {
        None => x_end,
        Some(b) => {
            let gap = |x: f64| b.eval(x).unwrap_or(f64::NAN) - end.eval(x).unwrap_or(f64::NAN);
            roots(gap, 1e-9 * r, std::f64::consts::PI * r, 4096, 1e-12 * r)
                .into_iter()
                .min_by(|a, b| (a - x_end).abs().total_cmp(&(b - x_end).abs()))
                .ok_or_else(|| Error::NoIntersection("wing bottom cut never meets the wing end cut".into()))?
        }
    };
    let corner_y = end.eval(corner_x)?;

    // Wing top edge: from the bend-line end, turned by the trim.
    let trim = if opts.apply_trim { fp.trim_angle } else { 0.0 };
    let top_dir = Vector2::new(-sin_d(trim), cos_d(trim));
    let flat_slope = end.slope(0.0)?;
    let end_base = cs2.to_cs1(P2::new(0.0, fp.wing_width));
    let end_dir = cs2.to_cs1(P2::new(1.0, fp.wing_width + flat_slope)) - end_base;
    let (s_top, t_end) = line_intersection(bend_top, top_dir, end_base, end_dir)
        .ok_or_else(|| Error::NoIntersection("wing top edge is parallel to the wing end cut".into()))?;
    if s_top <= 0.0 || t_end > 1e-9 * r {
        return Err(Error::geometry(
            "flat_top_height",
            format!(
                "{h} mm is too short: the wing top edge meets the end cut {:.1} mm into the rolled band",
                t_end.max(0.0)
            ),
        ));
    }
    let wing_top_end = end_base + end_dir * t_end;

    let along = |spec: &CurveSpec, x0: f64, x1: f64| -> Result<Vec<P2>> {
        let poly = curves::sample_curve(
            &CurveSpec {
                x_domain: (x0, x1),
                ..*spec
            },
            n,
        )?;
        Ok(poly.points)
    };
    let in_cs2 = |pts: Vec<P2>| pts.into_iter().map(|p| cs2.to_cs1(p)).collect::<Vec<_>>();

    let primary_interior = along(&interior, 0.0, x_end)?;
    let wing_interior = curves::reflect_across_mirror(&Polyline2::open(primary_interior.clone()), fp.mu).points;
    let mut primary_interior_rev = primary_interior;
    primary_interior_rev.reverse();

    let mut outer = vec![P2::new(-h, -i_dist)];
    outer.extend(straight(P2::new(0.0, -i_dist), P2::new(x_end, -i_dist), n));
    if h == 0.0 {
        outer.remove(0);
    }

    let y_end = fp.y_end;
    let wing_bottom = match &bottom {
        Some(b) => in_cs2(along(b, x_end, corner_x)?),
        None => in_cs2(straight(P2::new(x_end, -y_end), P2::new(x_end, corner_y), n)),
    };

    let edges = vec![
        Edge {
            kind: EdgeKind::PrimaryOuter,
            source: EdgeSource::Straight(format!("y = −I = {}", -i_dist)),
            points: outer,
        },
        Edge {
            kind: EdgeKind::PrimaryBottom,
            source: EdgeSource::Straight(format!("x = x_end = {x_end}")),
            points: straight(P2::new(x_end, -i_dist), P2::new(x_end, y_end), n),
        },
        Edge {
            kind: EdgeKind::PrimaryInterior,
            source: EdgeSource::Curve(interior),
            points: primary_interior_rev,
        },
        Edge {
            kind: EdgeKind::WingInterior,
            source: EdgeSource::Reflected(interior),
            points: wing_interior,
        },
        Edge {
            kind: EdgeKind::WingBottom,
            source: match bottom {
                Some(b) => EdgeSource::Curve(CurveSpec {
                    x_domain: (x_end, corner_x),
                    ..b
                }),
                None => EdgeSource::Straight(format!("x′ = x_end = {x_end}")),
            },
            points: wing_bottom,
        },
        Edge {
            kind: EdgeKind::WingEndRolled,
            source: EdgeSource::Curve(CurveSpec {
                x_domain: (corner_x, 0.0),
                ..end
            }),
            points: in_cs2(along(&end, corner_x, 0.0)?),
        },
        Edge {
            kind: EdgeKind::WingEndFlat,
            source: EdgeSource::Straight(format!("y′ = c + {flat_slope}·x′")),
            points: straight(end_base, wing_top_end, n),
        },
        Edge {
            kind: EdgeKind::WingTop,
            source: EdgeSource::Straight(format!("top edge turned {trim}° about the bend line")),
            points: straight(wing_top_end, bend_top, n),
        },
        Edge {
            kind: EdgeKind::PrimaryTop,
            source: EdgeSource::Straight(format!("x = −h = {}", -h)),
            points: straight(bend_top, P2::new(-h, -i_dist), n),
        },
    ];

    let mut feature_lines = vec![
        FeatureLine {
            kind: FeatureKind::TangentLinePrimary,
            segment: [P2::new(0.0, -i_dist), P2::origin()],
        },
        FeatureLine {
            kind: FeatureKind::TangentLineWing,
            segment: [P2::origin(), end_base],
        },
        FeatureLine {
            kind: FeatureKind::MirrorLine,
            segment: [P2::origin(), P2::new(x_end, x_end * tan_d(fp.mu))],
        },
        FeatureLine {
            kind: FeatureKind::BendLine,
            segment: [bend_top, P2::origin()],
        },
    ];
    if trim != 0.0 {
        feature_lines.push(FeatureLine {
            kind: FeatureKind::TrimLine,
            segment: [bend_top, bend_top + Vector2::y() * (wing_top_end - bend_top).norm()],
        });
    }

    let mut pattern = FlatPattern {
        inputs: *inputs,
        forming_parameters: fp,
        trimmed: opts.apply_trim,
        edges,
        feature_lines,
        frames: Frames { cs1, cs2 },
        landmarks: Landmarks {
            bend_top,
            wing_top_end,
            wing_bottom_end: cs2.to_cs1(P2::new(corner_x, corner_y)),
            corner_x,
        },
        overlap: None,
    };
    check_corners(&pattern, 1e-6 * r)?;
    match check_simple(&pattern.outer_loop()) {
        Err(Error::SelfIntersection(msg)) if opts.allow_overlap => pattern.overlap = Some(msg),
        other => other?,
    }
    Ok(pattern)
}

/// Adjacent edges must share their joint within `tol`.
pub fn check_corners(p: &FlatPattern, tol: f64) -> Result<()> {
    let k = p.edges.len();
    for i in 0..k {
        let (a, b) = (&p.edges[i], &p.edges[(i + 1) % k]);
        let gap = (a.last() - b.first()).norm();
        if gap > tol {
            return Err(Error::CornerGap {
                from: a.kind.name().into(),
                to: b.kind.name().into(),
                gap,
            });
        }
    }
    Ok(())
}

/// Fails on any proper crossing between non-adjacent loop segments.
pub fn check_simple(lp: &Polyline2) -> Result<()> {
    let pts = &lp.points;
    let m = pts.len();
    let seg = |i: usize| (pts[i], pts[(i + 1) % m]);
    let bbox = |(a, b): (P2, P2)| (a.x.min(b.x), a.x.max(b.x), a.y.min(b.y), a.y.max(b.y));
    let boxes: Vec<_> = (0..m).map(|i| bbox(seg(i))).collect();
    // Sweep over segments sorted by their left edge.
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| boxes[i].0.total_cmp(&boxes[j].0));
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if boxes[j].0 > boxes[i].1 {
                break;
            }
            let adjacent = (i + 1) % m == j || (j + 1) % m == i;
            if adjacent || boxes[j].2 > boxes[i].3 || boxes[j].3 < boxes[i].2 {
                continue;
            }
            let (p1, p2) = seg(i);
            let (q1, q2) = seg(j);
            if segments_cross(p1, p2, q1, q2) {
                return Err(Error::SelfIntersection(format!(
                    "segment {i} ({:.3}, {:.3}) crosses segment {j} ({:.3}, {:.3})",
                    p1.x, p1.y, q1.x, q1.y
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn reference() -> FlatPattern {
        build_flat_pattern(&DesignInputs::reference()).unwrap()
    }

    #[test]
    fn interior_spans_arc_length() {
        let p = reference();
        let e = p.edge(EdgeKind::PrimaryInterior).unwrap();
        assert_eq!(e.last(), P2::origin());
        assert_abs_diff_eq!(e.first().x, 2217.16, epsilon = 0.2);
        assert_eq!(p.edges.len(), 9);
    }

    #[test]
    fn wing_interior_is_reflection() {
        let p = reference();
        let prim = p.edge(EdgeKind::PrimaryInterior).unwrap();
        let wing = p.edge(EdgeKind::WingInterior).unwrap();
        let mu = p.forming_parameters.mu;
        for (a, b) in prim.points.iter().rev().zip(&wing.points) {
            assert!((curves::reflect_point(*a, mu) - b).norm() <= 1e-9 * 1778.0);
        }
    }

    #[test]
    fn frames_round_trip() {
        let p = reference();
        let q = P2::new(123.0, -456.0);
        let back = p.frames.cs2.to_cs1(p.frames.cs2.to_local(q));
        assert_abs_diff_eq!(back, q, epsilon = 1e-9);
        // Reflected point reads (x, −y) in CS2.
        let l = p.frames.cs2.to_local(curves::reflect_point(q, p.forming_parameters.mu));
        assert_abs_diff_eq!(l, P2::new(q.x, -q.y), epsilon = 1e-9);
    }

    #[test]
    fn outer_loop_is_closed_and_simple() {
        let p = reference();
        let lp = p.outer_loop();
        assert!(lp.closed);
        check_simple(&lp).unwrap();
        lp.validate(1e-9 * 1778.0).unwrap();
    }

    #[test]
    fn detects_crossing_loop() {
        let bow = Polyline2 {
            points: vec![
                P2::new(0.0, 0.0),
                P2::new(1.0, 1.0),
                P2::new(1.0, 0.0),
                P2::new(0.0, 1.0),
            ],
            closed: true,
        };
        assert!(matches!(check_simple(&bow), Err(Error::SelfIntersection(_))));
    }

    #[test]
    fn short_flat_top_is_rejected() {
        let inputs = DesignInputs {
            flat_top_height: 100.0,
            ..DesignInputs::reference()
        };
        match build_flat_pattern(&inputs) {
            Err(Error::InvalidGeometry { param, .. }) => assert_eq!(param, "flat_top_height"),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn corner_gap_is_reported() {
        let mut p = reference();
        p.edges[4].points[0].x += 1.0;
        assert!(matches!(check_corners(&p, 1e-6 * 1778.0), Err(Error::CornerGap { .. })));
    }

    #[test]
    fn untrimmed_top_continues_primary_top() {
        let p = build_flat_pattern_with(
            &DesignInputs::reference(),
            &PatternOptions {
                apply_trim: false,
                ..Default::default()
            },
        )
        .unwrap();
        let top = p.edge(EdgeKind::WingTop).unwrap();
        assert_abs_diff_eq!(top.first().x, -900.0, epsilon = 1e-9);
        assert!(p.feature_lines.iter().all(|f| f.kind != FeatureKind::TrimLine));
    }
}
