//! Binds a vehicle, a road and an efficiency model into the objective
//! the optimizers search.

use crate::cycle::{build_cycle, CandidateParams, CaseId, DrivingCycle, InfeasibleReason};
use crate::encoding::{Chromosome, Layout};
use crate::energy::{cycle_energy, fitness, EfficiencyModel, EnergyBreakdown};
use crate::error::{Error, Result};
use crate::units::{Scenario, VehicleParams};

/// Fitness of one chromosome. Infeasible candidates score zero and
/// carry no energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub fitness: f64,
    pub energy_kwh: Option<f64>,
}

impl Evaluation {
    pub fn feasible(&self) -> bool {
        self.energy_kwh.is_some()
    }
}

/// Anything an optimizer can search: a fitness landscape over
/// chromosomes plus the decode used for reporting.
pub trait Objective {
    fn evaluate(&self, c: &Chromosome) -> Evaluation;
    fn decode(&self, c: &Chromosome) -> CandidateParams;
}

/// A fully specified optimization problem.
#[derive(Debug, Clone)]
pub struct Problem {
    vehicle: VehicleParams,
    scenario: Scenario,
    case: CaseId,
    model: EfficiencyModel,
    layout: Layout,
}

impl Problem {
    /// Validates the ingredients and checks that the scenario fits the
    /// case: the restricted-road builder needs exactly three segments.
    pub fn new(
        case: CaseId,
        vehicle: VehicleParams,
        scenario: Scenario,
        model: EfficiencyModel,
    ) -> Result<Self> {
        vehicle.validate()?;
        scenario.validate()?;
        if case == CaseId::Case2 && scenario.segments.len() != 3 {
            return Err(Error::InvalidConfig(format!(
                "case2 needs a 3-segment scenario, got {} segment(s)",
                scenario.segments.len()
            )));
        }
        let layout = Layout::for_case(case);
        Ok(Problem {
            vehicle,
            scenario,
            case,
            model,
            layout,
        })
    }

    /// Default vehicle on the 5-mile unrestricted road.
    pub fn case1_default() -> Self {
        Problem::new(
            CaseId::Case1,
            VehicleParams::default(),
            Scenario::five_mile_simple(),
            EfficiencyModel::default(),
        )
        .expect("built-in scenario must validate")
    }

    /// Default vehicle on the 5-mile road with the restricted middle mile.
    pub fn case2_default() -> Self {
        Problem::new(
            CaseId::Case2,
            VehicleParams::default(),
            Scenario::five_mile_restricted(),
            EfficiencyModel::default(),
        )
        .expect("built-in scenario must validate")
    }

    pub fn case(&self) -> CaseId {
        self.case
    }

    pub fn vehicle(&self) -> &VehicleParams {
        &self.vehicle
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn model(&self) -> EfficiencyModel {
        self.model
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    /// Cycle for an explicit candidate, or why it is infeasible.
    pub fn build(
        &self,
        params: &CandidateParams,
    ) -> std::result::Result<DrivingCycle, InfeasibleReason> {
        assert_eq!(
            params.case(),
            self.case,
            "candidate case does not match the problem case"
        );
        build_cycle(&self.scenario, params)
    }

    /// Full energy bookkeeping for an explicit candidate.
    pub fn evaluate_params(
        &self,
        params: &CandidateParams,
    ) -> std::result::Result<(DrivingCycle, EnergyBreakdown), InfeasibleReason> {
        let cycle = self.build(params)?;
        let breakdown = cycle_energy(&self.vehicle, &cycle, self.model)
            .expect("a built cycle is always energy-evaluable");
        Ok((cycle, breakdown))
    }
}

impl Objective for Problem {
    fn evaluate(&self, c: &Chromosome) -> Evaluation {
        let params = self.decode(c);
        match self.evaluate_params(&params) {
            Ok((_, breakdown)) => Evaluation {
                fitness: fitness(breakdown.battery_total_kwh, true),
                energy_kwh: Some(breakdown.battery_total_kwh),
            },
            Err(_) => Evaluation {
                fitness: 0.0,
                energy_kwh: None,
            },
        }
    }

    fn decode(&self, c: &Chromosome) -> CandidateParams {
        self.layout
            .decode(c)
            .expect("layout and chromosome widths match by construction")
    }
}
