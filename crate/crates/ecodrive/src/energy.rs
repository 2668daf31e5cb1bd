//! Battery energy for a driving cycle: closed-form phase sums, the
//! fitness transform, and an independent numerical-integration backend.

use crate::cycle::{DrivingCycle, PhaseKind};
use crate::error::{Error, Result};
use crate::power::{cruise_power, instantaneous_power, ramp_power, RampKind};
use crate::units::{joules_to_kwh, VehicleParams};

/// How drivetrain efficiency and the regeneration credit compose into
/// battery energy.
///
/// `WheelNet` nets the regeneration credit against traction at the
/// wheel and divides the remainder by the drivetrain efficiency.
/// `SplitPath` divides only the traction side and credits regenerated
/// energy directly. `WheelNet` is the default; it reproduces the
/// reference energies for both scenario families, while `SplitPath`
/// stays available as a config switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EfficiencyModel {
    #[default]
    WheelNet,
    SplitPath,
}

impl EfficiencyModel {
    /// Battery energy from wheel-side traction and (pre-credit)
    /// braking energies, both in joules.
    pub fn battery_energy(self, p: &VehicleParams, traction: f64, regen: f64) -> f64 {
        let eta_drive = p.drivetrain_efficiency();
        match self {
            EfficiencyModel::WheelNet => (traction - p.regen_eff * regen) / eta_drive,
            EfficiencyModel::SplitPath => traction / eta_drive - p.regen_eff * regen,
        }
    }
}

impl std::fmt::Display for EfficiencyModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EfficiencyModel::WheelNet => write!(f, "wheel-net"),
            EfficiencyModel::SplitPath => write!(f, "split-path"),
        }
    }
}

/// Wheel energy of one phase, signed: braking is negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseEnergy {
    pub index: usize,
    pub kind: PhaseKind,
    pub duration: f64,
    /// Signed wheel energy, J.
    pub wheel_energy: f64,
}

/// Energy bookkeeping for one cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyBreakdown {
    pub phases: Vec<PhaseEnergy>,
    /// Wheel energy spent in traction phases, J.
    pub traction_total: f64,
    /// Wheel energy released in braking phases before the
    /// regeneration efficiency is applied, J (non-negative).
    pub regen_total: f64,
    /// Battery energy per the selected model, J.
    pub battery_total: f64,
    /// Battery energy, kWh.
    pub battery_total_kwh: f64,
}

impl EnergyBreakdown {
    fn from_phase_energies(
        p: &VehicleParams,
        model: EfficiencyModel,
        phases: Vec<PhaseEnergy>,
    ) -> Self {
        let traction_total: f64 = phases.iter().map(|ph| ph.wheel_energy.max(0.0)).sum();
        let regen_total: f64 = phases.iter().map(|ph| (-ph.wheel_energy).max(0.0)).sum();
        let battery_total = model.battery_energy(p, traction_total, regen_total);
        EnergyBreakdown {
            phases,
            traction_total,
            regen_total,
            battery_total,
            battery_total_kwh: joules_to_kwh(battery_total),
        }
    }

    /// CSV rows `phase_idx,kind,duration_s,wheel_energy_j` plus a
    /// trailing `battery_total_kwh` summary row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("phase_idx,kind,duration_s,wheel_energy_j\n");
        for ph in &self.phases {
            out.push_str(&format!(
                "{},{},{},{}\n",
                ph.index,
                ph.kind.label(),
                ph.duration,
                ph.wheel_energy
            ));
        }
        out.push_str(&format!("battery_total_kwh,{}\n", self.battery_total_kwh));
        out
    }
}

/// Closed-form battery energy: each phase contributes its average
/// power times duration; braking phases enter as regeneration credit.
pub fn cycle_energy(
    p: &VehicleParams,
    cy: &DrivingCycle,
    model: EfficiencyModel,
) -> Result<EnergyBreakdown> {
    let v_base = p.base_speed(cy.scenario().max_speed);
    let mut phases = Vec::with_capacity(cy.phases().len());
    for (index, ph) in cy.phases().iter().enumerate() {
        let wheel_energy = match ph.kind {
            PhaseKind::Cruise => cruise_power(p, ph.v_start)? * ph.duration,
            PhaseKind::Ramp(RampKind::Accelerate) => {
                ramp_power(
                    p,
                    v_base,
                    ph.v_start,
                    ph.v_end,
                    ph.duration,
                    RampKind::Accelerate,
                )? * ph.duration
            }
            PhaseKind::Ramp(RampKind::Brake) => {
                -(ramp_power(
                    p,
                    v_base,
                    ph.v_end,
                    ph.v_start,
                    ph.duration,
                    RampKind::Brake,
                )? * ph.duration)
            }
        };
        phases.push(PhaseEnergy {
            index,
            kind: ph.kind,
            duration: ph.duration,
            wheel_energy,
        });
    }
    Ok(EnergyBreakdown::from_phase_energies(p, model, phases))
}

/// Fitness of a candidate: `1 / (1 + E)` with `E` in kWh for feasible
/// candidates, zero for infeasible ones. Strictly decreasing in energy,
/// so maximizing fitness minimizes energy.
pub fn fitness(energy_kwh: f64, feasible: bool) -> f64 {
    if feasible {
        1.0 / (1.0 + energy_kwh)
    } else {
        0.0
    }
}

/// Numerical-integration backend: trapezoidal quadrature of the
/// instantaneous wheel power over the constant-acceleration speed
/// profile. Positive power accumulates as traction, negative as
/// regeneration credit. Unlike the closed form, this backend carries no
/// constant-torque correction and lets resistances reduce the braking
/// credit, so the two agree only loosely on cycles with ramps; it
/// exists to quantify exactly that gap.
pub fn numerical_energy(
    p: &VehicleParams,
    cy: &DrivingCycle,
    model: EfficiencyModel,
    dt: f64,
) -> Result<EnergyBreakdown> {
    if dt <= 0.0 {
        return Err(Error::NonPositiveStep(dt));
    }
    let mut phases = Vec::with_capacity(cy.phases().len());
    for (index, ph) in cy.phases().iter().enumerate() {
        let accel = ph.accel();
        let steps = (ph.duration / dt).ceil().max(1.0) as u64;
        let h = ph.duration / steps as f64;
        let speed_at = |i: u64| ph.v_start + (ph.v_end - ph.v_start) * (i as f64 / steps as f64);
        let mut wheel_energy = 0.0;
        let mut prev = instantaneous_power(p, speed_at(0), accel)?;
        for i in 1..=steps {
            let next = instantaneous_power(p, speed_at(i), accel)?;
            wheel_energy += (prev + next) / 2.0 * h;
            prev = next;
        }
        phases.push(PhaseEnergy {
            index,
            kind: ph.kind,
            duration: ph.duration,
            wheel_energy,
        });
    }
    Ok(EnergyBreakdown::from_phase_energies(p, model, phases))
}
