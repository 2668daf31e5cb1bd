//! Minimum-energy driving profiles for an electric vehicle with
//! regenerative braking.
//!
//! The library models trapezoidal driving cycles over a constrained
//! road, evaluates their battery energy with closed-form phase powers
//! (plus a numerical-integration cross-check), and searches the
//! discretized parameter space with a binary genetic algorithm,
//! benchmarked against a stochastic hill climber and exhaustive
//! search.

pub mod config;
pub mod cycle;
pub mod encoding;
pub mod energy;
pub mod error;
pub mod experiment;
pub mod optimizer;
pub mod power;
pub mod problem;
pub mod units;

pub use cycle::{
    build_case1, build_case2, build_cycle, check_constraints, sample_profile, CandidateParams,
    Case1Params, Case2Params, CaseId, ConstraintViolation, DrivingCycle, InfeasibleReason, Phase,
    PhaseKind,
};
pub use encoding::{
    enumerate_all, enumerate_all_with_guard, enumerate_width, random_chromosome, Chromosome,
    FieldDecode, Layout,
};
pub use energy::{cycle_energy, fitness, numerical_energy, EfficiencyModel, EnergyBreakdown};
pub use error::{Error, Result};
pub use experiment::{
    export_best_profile, export_histogram, run_experiment, Algo, ExperimentConfig,
    ExperimentSummary,
};
pub use optimizer::{
    crossover, crossover_at, mutate, run_exhaustive, run_ga, run_shc, select_elitist, GaConfig,
    Neighborhood, RunReport, ShcConfig, TracePoint,
};
pub use problem::{Evaluation, Objective, Problem};
pub use units::{Scenario, Segment, VehicleParams};
