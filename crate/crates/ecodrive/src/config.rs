//! Flat `key = value` config files for vehicle and road parameters.
//!
//! The file uses road-sign units: kg, mph, miles, seconds, and percent
//! for efficiencies. Everything is converted to SI on load. `#` starts
//! a comment, blank lines are ignored.
//!
//! ```text
//! mass = 2000              # kg
//! max_speed = 75           # mph
//! motor_eff = 85           # percent
//! segments = 2:75, 1:25, 2:75   # length_miles:limit_mph
//! ```

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::units::{
    miles_to_meters, mph_to_mps, Scenario, Segment, VehicleParams, DEFAULT_GRAVITY,
};

/// Vehicle and scenario loaded from one config file, already in SI.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedConfig {
    pub vehicle: VehicleParams,
    pub scenario: Scenario,
}

const VEHICLE_KEYS: &[&str] = &[
    "mass",
    "air_density",
    "drag_coeff",
    "frontal_area",
    "rolling_coeff",
    "wheel_radius",
    "wind_speed",
    "mass_factor",
    "final_drive_ratio",
    "transmission_ratio",
    "speed_ratio",
    "motor_eff",
    "inverter_eff",
    "gearbox_eff",
    "regen_eff",
];

const SCENARIO_KEYS: &[&str] = &["total_distance", "max_time", "max_accel", "max_speed"];

pub fn load_config(path: &Path) -> Result<LoadedConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<LoadedConfig> {
    let mut entries: HashMap<String, String> = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidConfig(format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if entries.insert(key.clone(), value).is_some() {
            return Err(Error::InvalidConfig(format!("duplicate key `{key}`")));
        }
    }

    let mut keys: Vec<&String> = entries.keys().collect();
    keys.sort();
    for key in keys {
        let known = VEHICLE_KEYS.contains(&key.as_str())
            || SCENARIO_KEYS.contains(&key.as_str())
            || key == "gravity"
            || key == "segments";
        if !known {
            return Err(Error::InvalidConfig(format!("unknown key `{key}`")));
        }
    }

    let number = |key: &str| -> Result<f64> {
        let raw = entries
            .get(key)
            .ok_or_else(|| Error::InvalidConfig(format!("missing key `{key}`")))?;
        raw.parse::<f64>()
            .map_err(|_| Error::InvalidConfig(format!("key `{key}`: `{raw}` is not a number")))
    };
    let percent = |key: &str| -> Result<f64> { Ok(number(key)? / 100.0) };

    let vehicle = VehicleParams {
        mass: number("mass")?,
        air_density: number("air_density")?,
        drag_coeff: number("drag_coeff")?,
        frontal_area: number("frontal_area")?,
        rolling_coeff: number("rolling_coeff")?,
        wheel_radius: number("wheel_radius")?,
        wind_speed: number("wind_speed")?,
        mass_factor: number("mass_factor")?,
        final_drive_ratio: number("final_drive_ratio")?,
        transmission_ratio: number("transmission_ratio")?,
        speed_ratio: number("speed_ratio")?,
        motor_eff: percent("motor_eff")?,
        inverter_eff: percent("inverter_eff")?,
        gearbox_eff: percent("gearbox_eff")?,
        regen_eff: percent("regen_eff")?,
        gravity: match entries.get("gravity") {
            Some(_) => number("gravity")?,
            None => DEFAULT_GRAVITY,
        },
    };
    vehicle
        .validate()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;

    let total_distance = miles_to_meters(number("total_distance")?);
    let max_speed = mph_to_mps(number("max_speed")?);
    let segments = match entries.get("segments") {
        Some(raw) => parse_segments(raw)?,
        None => vec![Segment {
            length: total_distance,
            speed_limit: max_speed,
        }],
    };
    let scenario = Scenario {
        total_distance,
        max_time: number("max_time")?,
        max_accel: mph_to_mps(number("max_accel")?),
        max_speed,
        segments,
    };
    scenario
        .validate()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;

    Ok(LoadedConfig { vehicle, scenario })
}

/// Parses `length_miles:limit_mph` pairs separated by commas.
fn parse_segments(raw: &str) -> Result<Vec<Segment>> {
    let mut segments = Vec::new();
    for part in raw.split(',') {
        let part = part.trim();
        let (len, limit) = part.split_once(':').ok_or_else(|| {
            Error::InvalidConfig(format!(
                "segment `{part}`: expected `length_miles:limit_mph`"
            ))
        })?;
        let len: f64 = len
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("segment `{part}`: bad length `{len}`")))?;
        let limit: f64 = limit
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("segment `{part}`: bad limit `{limit}`")))?;
        segments.push(Segment {
            length: miles_to_meters(len),
            speed_limit: mph_to_mps(limit),
        });
    }
    Ok(segments)
}

/// The config text matching the built-in defaults, used by `--init-config`
/// style tooling and as documentation of the format.
pub fn default_config_text() -> String {
    "\
# Vehicle
mass = 2000              # kg
air_density = 1.22       # kg/m^3
drag_coeff = 0.3
frontal_area = 1.6       # m^2
rolling_coeff = 0.01
wheel_radius = 0.28      # m
wind_speed = 0           # m/s
mass_factor = 1.04
final_drive_ratio = 4.18
transmission_ratio = 1.3
speed_ratio = 4
motor_eff = 85           # percent
inverter_eff = 95        # percent
gearbox_eff = 90         # percent
regen_eff = 50           # percent
gravity = 9.81           # m/s^2

# Road
total_distance = 5       # miles
max_time = 420           # seconds
max_accel = 8            # mph/s
max_speed = 75           # mph
# segments = 2:75, 1:25, 2:75   # length_miles:limit_mph; omit for a single segment
"
    .to_string()
}
