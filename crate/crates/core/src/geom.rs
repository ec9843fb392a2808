use nalgebra::{Point2, Rotation3, Unit, Vector2, Vector3};

pub(crate) type P2 = Point2<f64>;
pub(crate) type V3 = Vector3<f64>;

/// Rotation by `angle` radians about the unit vector `axis`.
pub(crate) fn rotation(axis: V3, angle: f64) -> Rotation3<f64> {
    Rotation3::from_axis_angle(&Unit::new_normalize(axis), angle)
}

/// Intersection of the lines `a + s·da` and `b + t·db`; `None` when parallel.
pub(crate) fn line_intersection(a: P2, da: Vector2<f64>, b: P2, db: Vector2<f64>) -> Option<(f64, f64)> {
    let den = da.perp(&db);
    if den.abs() < 1e-15 * da.norm() * db.norm() {
        return None;
    }
    let w = b - a;
    Some((w.perp(&db) / den, w.perp(&da) / den))
}

/// Proper-crossing test for segments `p1p2` and `q1q2` (shared endpoints and
/// collinear touching are not counted).
pub(crate) fn segments_cross(p1: P2, p2: P2, q1: P2, q2: P2) -> bool {
    let o = |a: P2, b: P2, c: P2| (b - a).perp(&(c - a));
    let d1 = o(q1, q2, p1);
    let d2 = o(q1, q2, p2);
    let d3 = o(p1, p2, q1);
    let d4 = o(p1, p2, q2);
    (d1 > 0.0) != (d2 > 0.0) && (d3 > 0.0) != (d4 > 0.0) && d1 != 0.0 && d2 != 0.0 && d3 != 0.0 && d4 != 0.0
}

/// Bisection on a sign change of `f` over `[a, b]`.
pub(crate) fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 || (b - a).abs() < tol {
            return m;
        }
        if (fa < 0.0) == (fm < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
