//! Piecewise-trapezoidal driving cycles and their feasibility rules.
//!
//! A cycle is an ordered list of ramp and cruise phases. Builders solve
//! the cruise durations from the distance constraint using
//! constant-acceleration kinematics (ramp distance = mean speed times
//! duration) and reject candidates that violate the road constraints.
//! Infeasibility is a value, not an error: optimizers score it as zero
//! fitness.

use crate::error::{Error, Result};
use crate::power::RampKind;
use crate::units::Scenario;

/// Slack for cruise durations that solve to a tiny negative number from
/// floating-point cancellation; anything below is a real overshoot.
const DURATION_EPS: f64 = 1e-9;

/// Which scenario family a candidate belongs to.
///
/// `Case1` is a single-segment road driven accelerate-cruise-brake.
/// `Case2` is a three-segment road whose middle segment carries a lower
/// speed limit, driven as a seven-phase double-trapezoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseId {
    Case1,
    Case2,
}

impl std::fmt::Display for CaseId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CaseId::Case1 => write!(f, "case1"),
            CaseId::Case2 => write!(f, "case2"),
        }
    }
}

/// Search variables for a single-segment cycle, in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Case1Params {
    /// Acceleration rate, m/s².
    pub accel: f64,
    /// Deceleration rate, m/s².
    pub decel: f64,
    /// Cruise speed, m/s.
    pub cruise_speed: f64,
}

/// Search variables for the restricted-middle cycle, in SI units.
/// Suffix 1 is the road before the restricted segment, 2 the restricted
/// segment itself, 3 the road after it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Case2Params {
    pub accel1: f64,
    pub cruise1: f64,
    pub decel1: f64,
    pub cruise2: f64,
    pub accel2: f64,
    pub cruise3: f64,
    pub decel2: f64,
}

/// One decoded candidate for either scenario family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CandidateParams {
    Case1(Case1Params),
    Case2(Case2Params),
}

impl CandidateParams {
    pub fn case(&self) -> CaseId {
        match self {
            CandidateParams::Case1(_) => CaseId::Case1,
            CandidateParams::Case2(_) => CaseId::Case2,
        }
    }
}

/// Why a candidate failed to produce a drivable cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InfeasibleReason {
    /// A cruise speed of zero cannot cover any distance.
    ZeroCruiseSpeed,
    /// A ramp rate was zero or negative.
    NonPositiveRate,
    /// The cruise speeds do not form the required profile shape
    /// (outer cruises must not be slower than the restricted one).
    ProfileShapeViolated,
    /// Ramp distances alone exceed the segment (or road) length.
    SegmentOvershoot,
    /// A cruise speed exceeds its segment limit or the global cap.
    SpeedLimitExceeded,
    /// A ramp rate exceeds the acceleration cap.
    AccelLimitExceeded,
    /// The cycle takes longer than the time budget.
    TimeExceeded {
        /// Computed total travel time, s.
        total_time: f64,
    },
}

impl std::fmt::Display for InfeasibleReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InfeasibleReason::ZeroCruiseSpeed => write!(f, "cruise speed is zero"),
            InfeasibleReason::NonPositiveRate => write!(f, "ramp rate is not positive"),
            InfeasibleReason::ProfileShapeViolated => {
                write!(f, "cruise speeds violate the profile shape")
            }
            InfeasibleReason::SegmentOvershoot => {
                write!(f, "ramp distances exceed the segment length")
            }
            InfeasibleReason::SpeedLimitExceeded => write!(f, "speed limit exceeded"),
            InfeasibleReason::AccelLimitExceeded => write!(f, "acceleration limit exceeded"),
            InfeasibleReason::TimeExceeded { total_time } => {
                write!(f, "total time {total_time} s exceeds the limit")
            }
        }
    }
}

/// Phase movement type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseKind {
    Ramp(RampKind),
    Cruise,
}

impl PhaseKind {
    pub fn label(&self) -> &'static str {
        match self {
            PhaseKind::Ramp(RampKind::Accelerate) => "accelerate",
            PhaseKind::Ramp(RampKind::Brake) => "brake",
            PhaseKind::Cruise => "cruise",
        }
    }
}

/// One constant-acceleration (or constant-speed) stretch of a cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phase {
    pub kind: PhaseKind,
    /// Speed entering the phase, m/s.
    pub v_start: f64,
    /// Speed leaving the phase, m/s.
    pub v_end: f64,
    /// Phase duration, s.
    pub duration: f64,
    /// Distance covered, m.
    pub distance: f64,
}

impl Phase {
    pub fn ramp(kind: RampKind, v_start: f64, v_end: f64, duration: f64) -> Self {
        Phase {
            kind: PhaseKind::Ramp(kind),
            v_start,
            v_end,
            duration,
            distance: (v_start + v_end) / 2.0 * duration,
        }
    }

    pub fn cruise(v: f64, duration: f64) -> Self {
        Phase {
            kind: PhaseKind::Cruise,
            v_start: v,
            v_end: v,
            duration,
            distance: v * duration,
        }
    }

    /// Signed acceleration over the phase, m/s².
    pub fn accel(&self) -> f64 {
        (self.v_end - self.v_start) / self.duration
    }
}

/// A complete speed-vs-time profile over a scenario's road.
#[derive(Debug, Clone, PartialEq)]
pub struct DrivingCycle {
    phases: Vec<Phase>,
    scenario: Scenario,
}

impl DrivingCycle {
    /// Assembles a cycle from prebuilt phases, checking structural
    /// sanity: phases exist, durations are positive, ramps actually
    /// ramp, cruises hold speed, and speeds chain continuously.
    pub fn from_phases(phases: Vec<Phase>, scenario: Scenario) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::InvalidParams("cycle has no phases".into()));
        }
        for (i, ph) in phases.iter().enumerate() {
            if ph.duration <= 0.0 {
                return Err(Error::NonPositiveDuration(ph.duration));
            }
            if ph.v_start < 0.0 || ph.v_end < 0.0 {
                return Err(Error::NegativeSpeed(ph.v_start.min(ph.v_end)));
            }
            match ph.kind {
                PhaseKind::Cruise if ph.v_start != ph.v_end => {
                    return Err(Error::InvalidParams(format!(
                        "phase {i}: cruise must hold speed"
                    )));
                }
                PhaseKind::Ramp(_) if ph.v_start == ph.v_end => {
                    return Err(Error::InvalidParams(format!(
                        "phase {i}: ramp must change speed"
                    )));
                }
                _ => {}
            }
            if i > 0 && phases[i - 1].v_end != ph.v_start {
                return Err(Error::InvalidParams(format!(
                    "phase {i}: speed discontinuity ({} -> {})",
                    phases[i - 1].v_end,
                    ph.v_start
                )));
            }
        }
        Ok(DrivingCycle { phases, scenario })
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn total_duration(&self) -> f64 {
        self.phases.iter().map(|p| p.duration).sum()
    }

    pub fn total_distance(&self) -> f64 {
        self.phases.iter().map(|p| p.distance).sum()
    }

    pub fn max_speed(&self) -> f64 {
        self.phases
            .iter()
            .map(|p| p.v_start.max(p.v_end))
            .fold(0.0, f64::max)
    }

    /// Speed at time `t`, linearly interpolated within the containing
    /// phase; clamps to the boundary speeds outside `[0, T]`.
    pub fn speed_at(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.phases[0].v_start;
        }
        let mut start = 0.0;
        for ph in &self.phases {
            let end = start + ph.duration;
            if t <= end {
                let frac = (t - start) / ph.duration;
                return ph.v_start + (ph.v_end - ph.v_start) * frac;
            }
            start = end;
        }
        self.phases[self.phases.len() - 1].v_end
    }
}

/// Builds the accelerate-cruise-brake cycle for a single-segment road,
/// solving the cruise duration from the distance constraint.
pub fn build_case1(
    sc: &Scenario,
    p: &Case1Params,
) -> std::result::Result<DrivingCycle, InfeasibleReason> {
    if p.accel <= 0.0 || p.decel <= 0.0 {
        return Err(InfeasibleReason::NonPositiveRate);
    }
    if p.cruise_speed <= 0.0 {
        return Err(InfeasibleReason::ZeroCruiseSpeed);
    }
    if p.accel > sc.max_accel {
        return Err(InfeasibleReason::AccelLimitExceeded);
    }
    if p.cruise_speed > sc.min_speed_limit() {
        return Err(InfeasibleReason::SpeedLimitExceeded);
    }
    let v = p.cruise_speed;
    let t_accel = v / p.accel;
    let t_brake = v / p.decel;
    // Mean ramp speed is v/2, so the two ramps cover (t_accel + t_brake)/2
    // worth of cruise distance.
    let t_cruise = sc.total_distance / v - (t_accel + t_brake) / 2.0;
    if t_cruise < -DURATION_EPS {
        return Err(InfeasibleReason::SegmentOvershoot);
    }
    let t_cruise = t_cruise.max(0.0);
    let total = t_accel + t_cruise + t_brake;
    if total > sc.max_time {
        return Err(InfeasibleReason::TimeExceeded { total_time: total });
    }

    let mut phases = vec![Phase::ramp(RampKind::Accelerate, 0.0, v, t_accel)];
    if t_cruise > 0.0 {
        phases.push(Phase::cruise(v, t_cruise));
    }
    phases.push(Phase::ramp(RampKind::Brake, v, 0.0, t_brake));
    Ok(DrivingCycle {
        phases,
        scenario: sc.clone(),
    })
}

/// Builds the seven-phase cycle for a three-segment road with a
/// restricted middle: the entry deceleration completes exactly at the
/// restricted segment's start and the exit acceleration begins exactly
/// at its end, so the whole restricted stretch is driven at `cruise2`.
///
/// Requires a scenario with exactly three segments (checked by
/// [`crate::problem::Problem::new`]; asserted here).
pub fn build_case2(
    sc: &Scenario,
    p: &Case2Params,
) -> std::result::Result<DrivingCycle, InfeasibleReason> {
    assert_eq!(
        sc.segments.len(),
        3,
        "restricted-middle builder needs a 3-segment scenario"
    );
    let rates = [p.accel1, p.decel1, p.accel2, p.decel2];
    if rates.iter().any(|&r| r <= 0.0) {
        return Err(InfeasibleReason::NonPositiveRate);
    }
    if rates.iter().any(|&r| r > sc.max_accel) {
        return Err(InfeasibleReason::AccelLimitExceeded);
    }
    if p.cruise2 <= 0.0 {
        return Err(InfeasibleReason::ZeroCruiseSpeed);
    }
    if p.cruise1 < p.cruise2 || p.cruise3 < p.cruise2 {
        return Err(InfeasibleReason::ProfileShapeViolated);
    }
    let limits = [
        sc.segments[0].speed_limit,
        sc.segments[1].speed_limit,
        sc.segments[2].speed_limit,
    ];
    if p.cruise1 > limits[0].min(sc.max_speed)
        || p.cruise2 > limits[1].min(sc.max_speed)
        || p.cruise3 > limits[2].min(sc.max_speed)
    {
        return Err(InfeasibleReason::SpeedLimitExceeded);
    }

    // Entry segment: 0 -> cruise1, cruise, cruise1 -> cruise2.
    let t1 = p.cruise1 / p.accel1;
    let d1 = p.cruise1 / 2.0 * t1;
    let t3 = (p.cruise1 - p.cruise2) / p.decel1;
    let d3 = (p.cruise1 + p.cruise2) / 2.0 * t3;
    let t2 = (sc.segments[0].length - d1 - d3) / p.cruise1;
    if t2 < -DURATION_EPS {
        return Err(InfeasibleReason::SegmentOvershoot);
    }
    let t2 = t2.max(0.0);

    // Restricted segment driven flat.
    let t4 = sc.segments[1].length / p.cruise2;

    // Exit segment: cruise2 -> cruise3, cruise, cruise3 -> 0.
    let t5 = (p.cruise3 - p.cruise2) / p.accel2;
    let d5 = (p.cruise2 + p.cruise3) / 2.0 * t5;
    let t7 = p.cruise3 / p.decel2;
    let d7 = p.cruise3 / 2.0 * t7;
    let t6 = (sc.segments[2].length - d5 - d7) / p.cruise3;
    if t6 < -DURATION_EPS {
        return Err(InfeasibleReason::SegmentOvershoot);
    }
    let t6 = t6.max(0.0);

    let total = t1 + t2 + t3 + t4 + t5 + t6 + t7;
    if total > sc.max_time {
        return Err(InfeasibleReason::TimeExceeded { total_time: total });
    }

    let mut phases = Vec::with_capacity(7);
    phases.push(Phase::ramp(RampKind::Accelerate, 0.0, p.cruise1, t1));
    if t2 > 0.0 {
        phases.push(Phase::cruise(p.cruise1, t2));
    }
    if t3 > 0.0 {
        phases.push(Phase::ramp(RampKind::Brake, p.cruise1, p.cruise2, t3));
    }
    phases.push(Phase::cruise(p.cruise2, t4));
    if t5 > 0.0 {
        phases.push(Phase::ramp(RampKind::Accelerate, p.cruise2, p.cruise3, t5));
    }
    if t6 > 0.0 {
        phases.push(Phase::cruise(p.cruise3, t6));
    }
    phases.push(Phase::ramp(RampKind::Brake, p.cruise3, 0.0, t7));
    Ok(DrivingCycle {
        phases,
        scenario: sc.clone(),
    })
}

/// Dispatches to the matching builder. Panics if the candidate's case
/// does not fit the params variant the caller paired it with.
pub fn build_cycle(
    sc: &Scenario,
    params: &CandidateParams,
) -> std::result::Result<DrivingCycle, InfeasibleReason> {
    match params {
        CandidateParams::Case1(p) => build_case1(sc, p),
        CandidateParams::Case2(p) => build_case2(sc, p),
    }
}

/// One violated road constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConstraintViolation {
    /// Covered distance does not match the scenario's total.
    Distance { actual: f64 },
    /// Some phase speed exceeds the global cruising cap.
    SpeedLimit { speed: f64 },
    /// Some acceleration ramp exceeds the acceleration cap.
    AccelLimit { accel: f64 },
    /// Total travel time exceeds the budget.
    TimeLimit { total_time: f64 },
}

/// Checks the four road constraints: distance covered, global speed
/// cap, acceleration cap, and time budget. Empty result means the
/// cycle satisfies all of them.
pub fn check_constraints(cy: &DrivingCycle, sc: &Scenario) -> Vec<ConstraintViolation> {
    let mut violations = Vec::new();
    let distance = cy.total_distance();
    if ((distance - sc.total_distance) / sc.total_distance).abs() > 1e-6 {
        violations.push(ConstraintViolation::Distance { actual: distance });
    }
    let top_speed = cy.max_speed();
    if top_speed > sc.max_speed {
        violations.push(ConstraintViolation::SpeedLimit { speed: top_speed });
    }
    let max_accel = cy
        .phases()
        .iter()
        .filter(|p| matches!(p.kind, PhaseKind::Ramp(RampKind::Accelerate)))
        .map(Phase::accel)
        .fold(0.0, f64::max);
    // Relative slack: rates reconstructed from duration are only exact
    // to rounding.
    if max_accel > sc.max_accel * (1.0 + 1e-9) {
        violations.push(ConstraintViolation::AccelLimit { accel: max_accel });
    }
    let total_time = cy.total_duration();
    if total_time > sc.max_time * (1.0 + 1e-9) {
        violations.push(ConstraintViolation::TimeLimit { total_time });
    }
    violations
}

/// Piecewise-linear speed samples every `dt` seconds, always including
/// both endpoints.
pub fn sample_profile(cy: &DrivingCycle, dt: f64) -> Result<Vec<(f64, f64)>> {
    if dt <= 0.0 {
        return Err(Error::NonPositiveStep(dt));
    }
    let total = cy.total_duration();
    let mut samples = Vec::new();
    let mut k = 0u64;
    loop {
        let t = k as f64 * dt;
        if t >= total {
            break;
        }
        samples.push((t, cy.speed_at(t)));
        k += 1;
    }
    samples.push((total, cy.phases()[cy.phases().len() - 1].v_end));
    Ok(samples)
}
