//! Identities of the axis construction over the whole design grid.

use cyl_unwrap::angles::{
    forming_parameters, mirror_line, resultant_axis_angles, wing_axis_frame, wing_plane_angle, DesignInputs,
};
use cyl_unwrap::curves::eval_two_cylinder;
use proptest::prelude::*;

fn closed_form_cos_delta(theta: f64, omega: f64) -> f64 {
    let (ct, co) = (theta.to_radians().cos(), omega.to_radians().cos());
    (1.0 + ct) * (1.0 + co) / 2.0 - 1.0
}

#[test]
fn tilt_matches_closed_form_on_grid() {
    for t in 1..=89 {
        for o in -89..=89 {
            let (theta, omega) = (t as f64, o as f64);
            let f = wing_axis_frame(theta, omega);
            let cos_delta = -f.primary.dot(&f.wing);
            assert!(
                (cos_delta - closed_form_cos_delta(theta, omega)).abs() <= 1e-12,
                "θ={theta} ω={omega}"
            );
            assert!(
                (f.wing.z.asin()
                    - (theta.to_radians() / 2.0)
                        .cos()
                        .mul_add(omega.to_radians().sin(), 0.0)
                        .asin())
                .abs()
                    <= 1e-12
            );
            if o >= 1 {
                let a = resultant_axis_angles(theta, omega).1;
                let b = resultant_axis_angles(omega, theta).1;
                assert!((a - b).abs() <= 1e-9, "θ={theta} ω={omega}");
            }
        }
    }
}

#[test]
fn level_wing_identities_are_exact() {
    for t in 1..=89 {
        let theta = t as f64;
        assert_eq!(wing_plane_angle(theta, 0.0).unwrap(), 0.0);
        let delta = resultant_axis_angles(theta, 0.0).1;
        assert!((delta - theta).abs() <= 1e-12, "θ={theta}: δ={delta}");
        assert_eq!(wing_axis_frame(theta, 0.0).wing.z, 0.0);
    }
}

#[test]
fn unit_vectors_stay_unit() {
    for t in (1..=89).step_by(4) {
        for o in (-89..=89).step_by(4) {
            let f = wing_axis_frame(t as f64, o as f64);
            for v in [f.primary, f.wing, f.hinge] {
                assert!((v.norm() - 1.0).abs() <= 1e-12);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn wing_plane_angle_is_odd(theta in 1.0f64..89.0, omega in 0.5f64..89.0) {
        let a = wing_plane_angle(theta, omega).unwrap();
        let b = wing_plane_angle(theta, -omega).unwrap();
        prop_assert!((a + b).abs() <= 1e-12);
        prop_assert!(a > 0.0);
    }

    #[test]
    fn mirror_slope_is_apex_derivative(r in 10.0f64..1e4, alpha in -85.0f64..85.0, beta in -80.0f64..80.0) {
        let (slope, mu) = mirror_line(alpha, beta).unwrap();
        prop_assert_eq!(mu, slope.atan().to_degrees());
        let h = 1e-6 * r;
        let fd = (eval_two_cylinder(h, r, alpha, beta, 0.0).unwrap() - eval_two_cylinder(-h, r, alpha, beta, 0.0).unwrap()) / (2.0 * h);
        prop_assert!((fd - slope).abs() <= 1e-8 * slope.abs().max(1.0), "fd {} slope {}", fd, slope);
    }

    #[test]
    fn parameter_record_invariants(theta in 2.0f64..80.0, omega in -60.0f64..60.0, gamma in 20.0f64..80.0) {
        let inp = DesignInputs { theta, omega, gamma, ..DesignInputs::reference() };
        if let Ok(fp) = forming_parameters(&inp) {
            prop_assert_eq!(fp.delta, 180.0 - fp.lambda);
            prop_assert_eq!(fp.kappa, 180.0 - fp.tau);
            prop_assert_eq!(fp.mu, fp.mirror_slope.atan().to_degrees());
            prop_assert_eq!(fp.rho_end, fp.delta);
            prop_assert!((fp.phi_end - (gamma - fp.sigma)).abs() <= 1e-12);
            prop_assert!((fp.offset_b - (fp.wing_width - fp.end_zero_offset)).abs() <= 1e-9);
            prop_assert!(fp.trim_angle.abs() < 90.0);
            prop_assert!(fp.sigma.signum() == omega.signum() || omega == 0.0);
        }
    }
}
