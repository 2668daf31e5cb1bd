//! Directional comparison of the two stochastic optimizers: the
//! genetic algorithm should land tighter (lower spread) than the hill
//! climber on both roads, and never worse in minimum energy.

use ecodrive::cycle::{CandidateParams, CaseId};
use ecodrive::experiment::sample_std;
use ecodrive::optimizer::{run_ga, run_shc, GaConfig, ShcConfig};
use ecodrive::problem::Problem;
use ecodrive::units::mps_to_mph;

#[test]
fn case1_shc_spread_exceeds_ga_spread() {
    let problem = Problem::case1_default();
    let runs = 30u64;

    let mut ga = Vec::new();
    for seed in 0..runs {
        let cfg = GaConfig {
            rng_seed: seed,
            ..GaConfig::default()
        };
        ga.push(
            run_ga(&problem, problem.layout(), &cfg)
                .unwrap()
                .best_energy_kwh,
        );
    }
    let mut shc = Vec::new();
    for seed in 0..runs {
        let cfg = ShcConfig {
            max_iterations: 2000,
            rng_seed: 500 + seed,
            ..ShcConfig::default()
        };
        shc.push(
            run_shc(&problem, problem.layout(), &cfg)
                .unwrap()
                .best_energy_kwh,
        );
    }
    let ga_sigma = sample_std(&ga);
    let shc_sigma = sample_std(&shc);
    assert!(
        shc_sigma > ga_sigma,
        "expected the hill climber to spread wider: {shc_sigma} vs {ga_sigma}"
    );
    let ga_min = ga.iter().copied().fold(f64::INFINITY, f64::min);
    let shc_min = shc.iter().copied().fold(f64::INFINITY, f64::min);
    assert!(ga_min <= shc_min);
}

#[test]
fn case2_best_profile_has_the_double_plateau_shape() {
    let problem = Problem::case2_default();
    let cfg = GaConfig {
        rng_seed: 3,
        ..GaConfig::default_for_case(CaseId::Case2)
    };
    let report = run_ga(&problem, problem.layout(), &cfg).unwrap();
    let params = match report.best_params {
        CandidateParams::Case2(p) => p,
        _ => panic!("case2 problem must decode case2 candidates"),
    };
    let cycle = problem.build(&report.best_params).unwrap();

    // Restricted middle: a cruise at the decoded restricted speed whose
    // duration covers the whole restricted mile.
    let restricted = cycle
        .phases()
        .iter()
        .find(|ph| ph.kind == ecodrive::cycle::PhaseKind::Cruise && ph.v_start == params.cruise2)
        .expect("restricted plateau present");
    assert!(
        restricted.duration >= 143.9,
        "plateau {} s",
        restricted.duration
    );
    assert!(mps_to_mph(params.cruise2) <= 25.0 + 1e-9);

    // Outer cruises sit above the restricted speed.
    assert!(params.cruise1 >= params.cruise2);
    assert!(params.cruise3 >= params.cruise2);
    assert_eq!(cycle.phases()[0].v_start, 0.0);
    assert_eq!(cycle.phases()[cycle.phases().len() - 1].v_end, 0.0);
}
