//! Unit conversions and the validated vehicle/road parameter sets.
//!
//! Everything downstream of this module works in SI (m, s, kg, W, J).
//! Miles, mph and kWh exist only at I/O boundaries: config files, CSV
//! columns and CLI flags.

use crate::error::{Error, Result};

/// Exactly 1 mph in m/s.
pub const MPS_PER_MPH: f64 = 0.44704;
/// Exactly 1 mile in meters.
pub const METERS_PER_MILE: f64 = 1609.344;
/// Exactly 1 kWh in joules.
pub const JOULES_PER_KWH: f64 = 3.6e6;
/// Default gravitational acceleration in m/s².
pub const DEFAULT_GRAVITY: f64 = 9.81;

pub fn mph_to_mps(v: f64) -> f64 {
    v * MPS_PER_MPH
}

pub fn mps_to_mph(v: f64) -> f64 {
    v / MPS_PER_MPH
}

pub fn miles_to_meters(d: f64) -> f64 {
    d * METERS_PER_MILE
}

pub fn meters_to_miles(d: f64) -> f64 {
    d / METERS_PER_MILE
}

pub fn joules_to_kwh(e: f64) -> f64 {
    e / JOULES_PER_KWH
}

pub fn kwh_to_joules(e: f64) -> f64 {
    e * JOULES_PER_KWH
}

/// Physical and drivetrain constants of the vehicle, in SI units.
///
/// `wheel_radius`, `final_drive_ratio`, `transmission_ratio` and
/// `wind_speed` are stored and validated but not consumed by any of the
/// implemented power equations; they are kept for motor-side extensions.
#[derive(Debug, Clone, PartialEq)]
pub struct VehicleParams {
    /// Vehicle mass, kg.
    pub mass: f64,
    /// Air density, kg/m³.
    pub air_density: f64,
    /// Aerodynamic drag coefficient.
    pub drag_coeff: f64,
    /// Frontal area, m².
    pub frontal_area: f64,
    /// Rolling resistance coefficient.
    pub rolling_coeff: f64,
    /// Wheel radius, m. Unused by the power model.
    pub wheel_radius: f64,
    /// Wind speed, m/s. Unused by the power model (assumed still air).
    pub wind_speed: f64,
    /// Mass factor accounting for rotational inertia, ≥ 1.
    pub mass_factor: f64,
    /// Final drive / differential gear ratio. Unused by the power model.
    pub final_drive_ratio: f64,
    /// Transmission gear ratio. Unused by the power model.
    pub transmission_ratio: f64,
    /// Ratio of maximum cruising speed to the traction drive's base speed, ≥ 1.
    pub speed_ratio: f64,
    /// Traction motor efficiency, fraction in (0, 1].
    pub motor_eff: f64,
    /// Inverter efficiency, fraction in (0, 1].
    pub inverter_eff: f64,
    /// Gearbox and final drive efficiency, fraction in (0, 1].
    pub gearbox_eff: f64,
    /// Overall regenerative efficiency, fraction in [0, 1].
    pub regen_eff: f64,
    /// Gravitational acceleration, m/s².
    pub gravity: f64,
}

impl Default for VehicleParams {
    /// Reference mid-size EV used by the built-in scenarios.
    fn default() -> Self {
        VehicleParams {
            mass: 2000.0,
            air_density: 1.22,
            drag_coeff: 0.3,
            frontal_area: 1.6,
            rolling_coeff: 0.01,
            wheel_radius: 0.28,
            wind_speed: 0.0,
            mass_factor: 1.04,
            final_drive_ratio: 4.18,
            transmission_ratio: 1.3,
            speed_ratio: 4.0,
            motor_eff: 0.85,
            inverter_eff: 0.95,
            gearbox_eff: 0.90,
            regen_eff: 0.5,
            gravity: DEFAULT_GRAVITY,
        }
    }
}

impl VehicleParams {
    /// Checks every field against its physical range.
    pub fn validate(&self) -> Result<()> {
        fn check(ok: bool, msg: &str, value: f64) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!("{msg}, got {value}")))
            }
        }
        check(
            self.mass.is_finite() && self.mass > 0.0,
            "mass must be positive",
            self.mass,
        )?;
        check(
            self.air_density.is_finite() && self.air_density >= 0.0,
            "air_density must be non-negative",
            self.air_density,
        )?;
        check(
            self.drag_coeff.is_finite() && self.drag_coeff >= 0.0,
            "drag_coeff must be non-negative",
            self.drag_coeff,
        )?;
        check(
            self.frontal_area.is_finite() && self.frontal_area > 0.0,
            "frontal_area must be positive",
            self.frontal_area,
        )?;
        check(
            self.rolling_coeff.is_finite() && self.rolling_coeff >= 0.0,
            "rolling_coeff must be non-negative",
            self.rolling_coeff,
        )?;
        check(
            self.wheel_radius.is_finite() && self.wheel_radius > 0.0,
            "wheel_radius must be positive",
            self.wheel_radius,
        )?;
        check(
            self.wind_speed.is_finite() && self.wind_speed >= 0.0,
            "wind_speed must be non-negative",
            self.wind_speed,
        )?;
        check(
            self.mass_factor.is_finite() && self.mass_factor >= 1.0,
            "mass_factor must be at least 1",
            self.mass_factor,
        )?;
        check(
            self.final_drive_ratio.is_finite() && self.final_drive_ratio > 0.0,
            "final_drive_ratio must be positive",
            self.final_drive_ratio,
        )?;
        check(
            self.transmission_ratio.is_finite() && self.transmission_ratio > 0.0,
            "transmission_ratio must be positive",
            self.transmission_ratio,
        )?;
        check(
            self.speed_ratio.is_finite() && self.speed_ratio >= 1.0,
            "speed_ratio must be at least 1",
            self.speed_ratio,
        )?;
        for (name, eff) in [
            ("motor_eff", self.motor_eff),
            ("inverter_eff", self.inverter_eff),
            ("gearbox_eff", self.gearbox_eff),
        ] {
            check(
                eff.is_finite() && eff > 0.0 && eff <= 1.0,
                &format!("{name} must be in (0, 1]"),
                eff,
            )?;
        }
        check(
            self.regen_eff.is_finite() && (0.0..=1.0).contains(&self.regen_eff),
            "regen_eff must be in [0, 1]",
            self.regen_eff,
        )?;
        check(
            self.gravity.is_finite() && self.gravity > 0.0,
            "gravity must be positive",
            self.gravity,
        )?;
        Ok(())
    }

    /// Validating constructor for use after struct-literal construction.
    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// Base speed of the traction drive for a given maximum cruising
    /// speed: the boundary between constant-torque and constant-power
    /// operation, `v_max / speed_ratio`.
    pub fn base_speed(&self, v_max: f64) -> f64 {
        v_max / self.speed_ratio
    }

    /// Combined battery-to-wheel efficiency: motor × inverter × gearbox.
    pub fn drivetrain_efficiency(&self) -> f64 {
        self.motor_eff * self.inverter_eff * self.gearbox_eff
    }
}

/// One stretch of road with a uniform speed limit, in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    /// Segment length, m.
    pub length: f64,
    /// Speed limit over the segment, m/s.
    pub speed_limit: f64,
}

/// Road definition and driving constraints, in SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Total distance to cover, m.
    pub total_distance: f64,
    /// Maximum total travel time, s.
    pub max_time: f64,
    /// Maximum acceleration, m/s².
    pub max_accel: f64,
    /// Maximum cruising speed, m/s.
    pub max_speed: f64,
    /// Ordered road segments. Lengths must sum to `total_distance`.
    pub segments: Vec<Segment>,
}

impl Scenario {
    /// A 5-mile unrestricted road: 420 s budget, 8 mph/s acceleration
    /// cap, 75 mph speed cap.
    pub fn five_mile_simple() -> Self {
        let s = miles_to_meters(5.0);
        let v_max = mph_to_mps(75.0);
        Scenario {
            total_distance: s,
            max_time: 420.0,
            max_accel: mph_to_mps(8.0),
            max_speed: v_max,
            segments: vec![Segment {
                length: s,
                speed_limit: v_max,
            }],
        }
    }

    /// A 5-mile road whose middle mile is limited to 25 mph; outer
    /// segments carry the 75 mph cap.
    pub fn five_mile_restricted() -> Self {
        let outer = Segment {
            length: miles_to_meters(2.0),
            speed_limit: mph_to_mps(75.0),
        };
        let middle = Segment {
            length: miles_to_meters(1.0),
            speed_limit: mph_to_mps(25.0),
        };
        Scenario {
            total_distance: miles_to_meters(5.0),
            max_time: 420.0,
            max_accel: mph_to_mps(8.0),
            max_speed: mph_to_mps(75.0),
            segments: vec![outer, middle, outer],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.total_distance.is_finite() && self.total_distance > 0.0) {
            return Err(Error::InvalidParams(format!(
                "total_distance must be positive, got {}",
                self.total_distance
            )));
        }
        if !(self.max_time.is_finite() && self.max_time > 0.0) {
            return Err(Error::InvalidParams(format!(
                "max_time must be positive, got {}",
                self.max_time
            )));
        }
        if !(self.max_accel.is_finite() && self.max_accel > 0.0) {
            return Err(Error::InvalidParams(format!(
                "max_accel must be positive, got {}",
                self.max_accel
            )));
        }
        if !(self.max_speed.is_finite() && self.max_speed > 0.0) {
            return Err(Error::InvalidParams(format!(
                "max_speed must be positive, got {}",
                self.max_speed
            )));
        }
        if self.segments.is_empty() {
            return Err(Error::InvalidParams(
                "scenario needs at least one segment".into(),
            ));
        }
        let mut sum = 0.0;
        for (i, seg) in self.segments.iter().enumerate() {
            if !(seg.length.is_finite() && seg.length > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "segment {i} length must be positive, got {}",
                    seg.length
                )));
            }
            if !(seg.speed_limit.is_finite() && seg.speed_limit > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "segment {i} speed_limit must be positive, got {}",
                    seg.speed_limit
                )));
            }
            if seg.speed_limit > self.max_speed {
                return Err(Error::InvalidParams(format!(
                    "segment {i} speed_limit {} exceeds max_speed {}",
                    seg.speed_limit, self.max_speed
                )));
            }
            sum += seg.length;
        }
        if ((sum - self.total_distance) / self.total_distance).abs() > 1e-9 {
            return Err(Error::InvalidParams(format!(
                "segment lengths sum to {sum} but total_distance is {}",
                self.total_distance
            )));
        }
        Ok(())
    }

    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// Lowest speed limit over the whole road, capped by `max_speed`.
    pub fn min_speed_limit(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| s.speed_limit)
            .fold(self.max_speed, f64::min)
    }
}
