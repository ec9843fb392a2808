//! Degree/radian conversions. Every public angle in this crate is in
//! degrees; trigonometry happens in radians through these helpers only.

#[inline]
pub fn rad(deg: f64) -> f64 {
    deg.to_radians()
}

#[inline]
pub fn deg(rad: f64) -> f64 {
    rad.to_degrees()
}

#[inline]
pub fn sin_d(deg: f64) -> f64 {
    rad(deg).sin()
}

#[inline]
pub fn cos_d(deg: f64) -> f64 {
    rad(deg).cos()
}

#[inline]
pub fn tan_d(deg: f64) -> f64 {
    rad(deg).tan()
}

/// Wraps a line direction angle into (−90°, 90°].
pub fn wrap_half_turn(deg: f64) -> f64 {
    let mut a = deg % 180.0;
    if a <= -90.0 {
        a += 180.0;
    } else if a > 90.0 {
        a -= 180.0;
    }
    a
}
