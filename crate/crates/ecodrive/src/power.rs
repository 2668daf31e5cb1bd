//! Phase-average and instantaneous tractive power.
//!
//! Ramp powers are phase averages over a constant-power speed profile
//! (speed squared linear in time); that profile is what produces the
//! 2/3 rolling and 1/5 aero averaging factors of the classic
//! zero-to-speed acceleration formula, and it generalizes the formula
//! to ramps between two nonzero speeds. `instantaneous_power` is the
//! pointwise force-times-speed used by the numerical-integration
//! backend.

use crate::error::{Error, Result};
use crate::units::VehicleParams;

/// Direction of a speed ramp. Acceleration and braking share one power
/// magnitude; the kind decides the sign of the phase energy downstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RampKind {
    Accelerate,
    Brake,
}

/// Average tractive (or braking) power over a ramp from `v_lo` to
/// `v_hi` m/s lasting `duration` seconds.
///
/// The kinetic term carries a `v_base²` correction for the
/// constant-torque region whenever the ramp's lower endpoint sits below
/// the drive's base speed. Ramps entirely above base speed omit it.
/// Resistive terms enter with positive sign for both ramp kinds.
pub fn ramp_power(
    p: &VehicleParams,
    v_base: f64,
    v_lo: f64,
    v_hi: f64,
    duration: f64,
    _kind: RampKind,
) -> Result<f64> {
    if duration <= 0.0 {
        return Err(Error::NonPositiveDuration(duration));
    }
    if v_lo < 0.0 {
        return Err(Error::NegativeSpeed(v_lo));
    }
    if v_hi <= v_lo {
        return Err(Error::DegenerateRamp { v_lo, v_hi });
    }
    let base_term = if v_lo < v_base { v_base * v_base } else { 0.0 };
    let kinetic =
        p.mass_factor * p.mass * (v_hi * v_hi - v_lo * v_lo + base_term) / (2.0 * duration);
    Ok(kinetic + ramp_resistive_power(p, v_lo, v_hi))
}

/// Average rolling plus aerodynamic power over a ramp from `v_lo` to
/// `v_hi`, independent of the ramp duration.
pub fn ramp_resistive_power(p: &VehicleParams, v_lo: f64, v_hi: f64) -> f64 {
    let v2 = v_hi * v_hi - v_lo * v_lo;
    let v3 = v_hi.powi(3) - v_lo.powi(3);
    let v5 = v_hi.powi(5) - v_lo.powi(5);
    let roll = p.mass * p.gravity * p.rolling_coeff * (2.0 / 3.0) * v3 / v2;
    let aero = 0.5 * p.air_density * p.drag_coeff * p.frontal_area * (2.0 / 5.0) * v5 / v2;
    roll + aero
}

/// Traction power needed to hold a constant speed `v` m/s.
pub fn cruise_power(p: &VehicleParams, v: f64) -> Result<f64> {
    if v < 0.0 {
        return Err(Error::NegativeSpeed(v));
    }
    Ok(p.mass * p.gravity * p.rolling_coeff * v
        + 0.5 * p.air_density * p.drag_coeff * p.frontal_area * v.powi(3))
}

/// Wheel power at speed `v` with acceleration `accel`: total road-load
/// force times speed. Negative when decelerating hard enough for the
/// inertial term to dominate the resistances.
pub fn instantaneous_power(p: &VehicleParams, v: f64, accel: f64) -> Result<f64> {
    if v < 0.0 {
        return Err(Error::NegativeSpeed(v));
    }
    let force = p.mass_factor * p.mass * accel
        + p.mass * p.gravity * p.rolling_coeff
        + 0.5 * p.air_density * p.drag_coeff * p.frontal_area * v * v;
    Ok(force * v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::mph_to_mps;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn reference() -> VehicleParams {
        VehicleParams::default()
    }

    /// Literal transcription of the zero-to-speed formula, used as the
    /// oracle for the generalized ramp.
    fn zero_ramp_reference(p: &VehicleParams, v_base: f64, v: f64, t: f64) -> f64 {
        p.mass_factor * p.mass / (2.0 * t) * (v * v + v_base * v_base)
            + (2.0 / 3.0) * p.mass * p.gravity * p.rolling_coeff * v
            + (1.0 / 5.0) * p.air_density * p.drag_coeff * p.frontal_area * v.powi(3)
    }

    #[test]
    fn acceleration_power_reference_value() {
        let p = reference();
        let v_base = p.base_speed(mph_to_mps(75.0));
        let v = mph_to_mps(49.6);
        let got = ramp_power(&p, v_base, 0.0, v, 6.2, RampKind::Accelerate).unwrap();
        assert_relative_eq!(got, 98_430.0, max_relative = 0.005);
    }

    #[test]
    fn braking_power_reference_value() {
        let p = reference();
        let v_base = p.base_speed(mph_to_mps(75.0));
        let v = mph_to_mps(49.6);
        let got = ramp_power(&p, v_base, 0.0, v, 99.2, RampKind::Brake).unwrap();
        assert_relative_eq!(got, 10_070.0, max_relative = 0.005);
    }

    #[test]
    fn pure_kinetic_ramp() {
        let p = VehicleParams {
            air_density: 0.0,
            rolling_coeff: 0.0,
            mass_factor: 1.0,
            mass: 2000.0,
            ..reference()
        };
        // v_base = 0: no constant-torque correction.
        let got = ramp_power(&p, 0.0, 0.0, 10.0, 10.0, RampKind::Accelerate).unwrap();
        assert_relative_eq!(got, 10_000.0, max_relative = 1e-12);
    }

    #[test]
    fn ramp_errors() {
        let p = reference();
        assert!(matches!(
            ramp_power(&p, 8.0, 0.0, 10.0, 0.0, RampKind::Accelerate),
            Err(Error::NonPositiveDuration(_))
        ));
        assert!(matches!(
            ramp_power(&p, 8.0, 10.0, 10.0, 5.0, RampKind::Accelerate),
            Err(Error::DegenerateRamp { .. })
        ));
        assert!(matches!(
            ramp_power(&p, 8.0, 12.0, 10.0, 5.0, RampKind::Brake),
            Err(Error::DegenerateRamp { .. })
        ));
    }

    #[test]
    fn cruise_power_values() {
        let p = reference();
        assert_eq!(cruise_power(&p, 0.0).unwrap(), 0.0);
        assert_relative_eq!(
            cruise_power(&p, mph_to_mps(49.6)).unwrap(),
            7_542.0,
            max_relative = 0.005
        );
        assert_relative_eq!(
            cruise_power(&p, mph_to_mps(50.4)).unwrap(),
            7_769.0,
            max_relative = 0.005
        );
        assert!(matches!(
            cruise_power(&p, -1.0),
            Err(Error::NegativeSpeed(_))
        ));
    }

    #[test]
    fn instantaneous_power_values() {
        let p = reference();
        assert_eq!(instantaneous_power(&p, 0.0, 3.0).unwrap(), 0.0);
        let v = mph_to_mps(49.6);
        assert_relative_eq!(
            instantaneous_power(&p, v, 0.0).unwrap(),
            cruise_power(&p, v).unwrap(),
            max_relative = 1e-12
        );
        let simple = VehicleParams {
            mass: 2000.0,
            mass_factor: 1.0,
            rolling_coeff: 0.0,
            air_density: 0.0,
            ..reference()
        };
        assert_relative_eq!(
            instantaneous_power(&simple, 10.0, 1.0).unwrap(),
            20_000.0,
            max_relative = 1e-12
        );
        assert!(matches!(
            instantaneous_power(&p, -0.1, 0.0),
            Err(Error::NegativeSpeed(_))
        ));
    }

    #[test]
    fn resistive_average_matches_quadrature() {
        // Time-average the pointwise resistances over the constant-power
        // profile v(s) = sqrt(v_lo^2 + (v_hi^2 - v_lo^2) s/t) and compare
        // with the closed-form phase averages.
        let p = reference();
        let cases = [(0.0, 22.0), (5.0, 30.0), (11.0, 33.5), (0.0, 5.0)];
        for (v_lo, v_hi) in cases {
            let n = 10_000;
            let mut roll_sum = 0.0;
            let mut aero_sum = 0.0;
            let v_at = |s: f64| (v_lo * v_lo + (v_hi * v_hi - v_lo * v_lo) * s).sqrt();
            for i in 0..n {
                let a = v_at(i as f64 / n as f64);
                let b = v_at((i + 1) as f64 / n as f64);
                roll_sum += (a + b) / 2.0;
                aero_sum += (a.powi(3) + b.powi(3)) / 2.0;
            }
            let roll_avg = p.mass * p.gravity * p.rolling_coeff * roll_sum / n as f64;
            let aero_avg =
                0.5 * p.air_density * p.drag_coeff * p.frontal_area * aero_sum / n as f64;
            let closed = ramp_resistive_power(&p, v_lo, v_hi);
            assert_relative_eq!(closed, roll_avg + aero_avg, max_relative = 1e-3);
        }
    }

    #[test]
    fn resistive_average_approaches_cruise_power() {
        let p = reference();
        for v in [5.0, 15.0, 30.0] {
            let resistive = ramp_resistive_power(&p, v - 1e-3, v);
            let cruise = cruise_power(&p, v).unwrap();
            assert_relative_eq!(resistive, cruise, max_relative = 1e-3);
        }
    }

    proptest! {
        #[test]
        fn zero_ramp_reduces_to_reference(
            v in 0.5f64..40.0,
            t in 0.5f64..300.0,
            v_base in 0.0f64..12.0,
            mass in 500.0f64..4000.0,
            delta in 1.0f64..1.3,
        ) {
            let p = VehicleParams { mass, mass_factor: delta, ..reference() };
            let got = ramp_power(&p, v_base, 0.0, v, t, RampKind::Accelerate).unwrap();
            let want = zero_ramp_reference(&p, v_base, v, t);
            prop_assert!(((got - want) / want).abs() < 1e-12);
        }

        #[test]
        fn cruise_power_strictly_increasing(v in 0.01f64..40.0, dv in 0.01f64..5.0) {
            let p = reference();
            let lo = cruise_power(&p, v).unwrap();
            let hi = cruise_power(&p, v + dv).unwrap();
            prop_assert!(hi > lo);
        }

        #[test]
        fn ramp_power_strictly_positive(
            v_lo in 0.0f64..30.0,
            dv in 0.1f64..10.0,
            t in 0.1f64..500.0,
        ) {
            let p = reference();
            let got = ramp_power(&p, 8.382, v_lo, v_lo + dv, t, RampKind::Brake).unwrap();
            prop_assert!(got > 0.0);
        }
    }
}
