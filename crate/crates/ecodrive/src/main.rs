//! Command-line interface: evaluate explicit candidates, run single
//! optimizations, and reproduce the multi-run experiments.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ecodrive::config::load_config;
use ecodrive::cycle::{CandidateParams, Case1Params, Case2Params, CaseId};
use ecodrive::energy::EfficiencyModel;
use ecodrive::error::Error;
use ecodrive::experiment::{run_experiment, trace_csv, Algo, ExperimentConfig};
use ecodrive::optimizer::{run_exhaustive, run_ga, run_shc, GaConfig, Neighborhood, ShcConfig};
use ecodrive::problem::Problem;
use ecodrive::units::{mph_to_mps, mps_to_mph, Scenario, VehicleParams};

const EXIT_CONFIG: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "ecodrive",
    version,
    about = "Minimum-energy speed profiles for an EV with regenerative braking"
)]
struct Cli {
    /// Vehicle and road config file (key = value, road-sign units).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// How drivetrain efficiency composes with the regeneration credit.
    #[arg(long, global = true, value_enum, default_value_t = ModelArg::WheelNet)]
    efficiency_model: ModelArg,
    /// Directory for CSV artifacts.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    WheelNet,
    SplitPath,
}

impl From<ModelArg> for EfficiencyModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::WheelNet => EfficiencyModel::WheelNet,
            ModelArg::SplitPath => EfficiencyModel::SplitPath,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    Case1,
    Case2,
}

impl From<CaseArg> for CaseId {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::Case1 => CaseId::Case1,
            CaseArg::Case2 => CaseId::Case2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Ga,
    Shc,
    Exhaustive,
}

impl From<AlgoArg> for Algo {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Ga => Algo::Ga,
            AlgoArg::Shc => Algo::Shc,
            AlgoArg::Exhaustive => Algo::Exhaustive,
        }
    }
}

#[derive(Args, Clone)]
struct OptimizerKnobs {
    /// GA population size (defaults per case: 40, 100).
    #[arg(long)]
    population: Option<usize>,
    /// GA generation count.
    #[arg(long)]
    generations: Option<usize>,
    /// GA crossover probability per offspring pair.
    #[arg(long)]
    crossover_prob: Option<f64>,
    /// GA single-bit mutation probability per offspring.
    #[arg(long)]
    mutation_prob: Option<f64>,
    /// GA elite count.
    #[arg(long)]
    elite: Option<usize>,
    /// Hill-climber iteration budget.
    #[arg(long)]
    shc_iterations: Option<usize>,
    /// Hill-climber proposal scheme.
    #[arg(long, value_enum)]
    shc_neighborhood: Option<NeighborhoodArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum NeighborhoodArg {
    BitFlip,
    UniformRandom,
}

impl OptimizerKnobs {
    fn ga_config(&self, case: CaseId, seed: u64) -> GaConfig {
        let mut ga = GaConfig::default_for_case(case);
        ga.rng_seed = seed;
        if let Some(v) = self.population {
            ga.population_size = v;
        }
        if let Some(v) = self.generations {
            ga.generations = v;
        }
        if let Some(v) = self.crossover_prob {
            ga.crossover_prob = v;
        }
        if let Some(v) = self.mutation_prob {
            ga.mutation_prob = v;
        }
        if let Some(v) = self.elite {
            ga.elite_count = v;
        }
        ga
    }

    fn shc_config(&self, seed: u64) -> ShcConfig {
        let mut shc = ShcConfig {
            rng_seed: seed,
            ..ShcConfig::default()
        };
        if let Some(v) = self.shc_iterations {
            shc.max_iterations = v;
        }
        if let Some(n) = self.shc_neighborhood {
            shc.neighborhood = match n {
                NeighborhoodArg::BitFlip => Neighborhood::BitFlip,
                NeighborhoodArg::UniformRandom => Neighborhood::UniformRandom,
            };
        }
        shc
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the energy of explicit candidate parameters.
    Evaluate {
        #[arg(long, value_enum)]
        case: CaseArg,
        /// case1 acceleration, mph/s.
        #[arg(long)]
        accel: Option<f64>,
        /// case1 deceleration, mph/s.
        #[arg(long)]
        decel: Option<f64>,
        /// case1 cruise speed, mph.
        #[arg(long)]
        cruise: Option<f64>,
        /// case2 first acceleration, mph/s.
        #[arg(long)]
        accel1: Option<f64>,
        /// case2 first cruise speed, mph.
        #[arg(long)]
        cruise1: Option<f64>,
        /// case2 first deceleration, mph/s.
        #[arg(long)]
        decel1: Option<f64>,
        /// case2 restricted-segment speed, mph.
        #[arg(long)]
        cruise2: Option<f64>,
        /// case2 second acceleration, mph/s.
        #[arg(long)]
        accel2: Option<f64>,
        /// case2 last cruise speed, mph.
        #[arg(long)]
        cruise3: Option<f64>,
        /// case2 final deceleration, mph/s.
        #[arg(long)]
        decel2: Option<f64>,
    },
    /// Run one optimizer once and write its convergence trace.
    Optimize {
        #[arg(long, value_enum)]
        case: CaseArg,
        #[arg(long, value_enum)]
        algo: AlgoArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        knobs: OptimizerKnobs,
    },
    /// Run a seeded multi-run experiment and write all CSV artifacts.
    Experiment {
        #[arg(long, value_enum)]
        case: CaseArg,
        #[arg(long, value_enum)]
        algo: AlgoArg,
        #[arg(long, default_value_t = 30)]
        runs: usize,
        #[arg(long, default_value_t = 1)]
        base_seed: u64,
        /// Histogram bin width, kWh (defaults per case: 0.01, 0.05).
        #[arg(long)]
        bin_width: Option<f64>,
        #[command(flatten)]
        knobs: OptimizerKnobs,
    },
    /// Optimize once and export the best speed profile as CSV.
    Profile {
        #[arg(long, value_enum)]
        case: CaseArg,
        #[arg(long, value_enum)]
        algo: AlgoArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Sampling step, s.
        #[arg(long, default_value_t = 1.0)]
        dt: f64,
        #[command(flatten)]
        knobs: OptimizerKnobs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(CliError::Infeasible(msg)) => {
            eprintln!("infeasible: {msg}");
            ExitCode::from(EXIT_INFEASIBLE)
        }
        Err(CliError::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

enum CliError {
    Config(String),
    Infeasible(String),
    Other(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_)
            | Error::InvalidParams(_)
            | Error::SpaceTooLarge { .. }
            | Error::OffGrid { .. } => CliError::Config(e.to_string()),
            Error::Infeasible(_) => CliError::Infeasible(e.to_string()),
            other => CliError::Other(other.to_string()),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let model: EfficiencyModel = cli.efficiency_model.into();
    let problem_for = |case: CaseId| -> Result<Problem, CliError> {
        let (vehicle, scenario) = match &cli.config {
            Some(path) => {
                let loaded = load_config(path)?;
                (loaded.vehicle, loaded.scenario)
            }
            None => {
                let scenario = match case {
                    CaseId::Case1 => Scenario::five_mile_simple(),
                    CaseId::Case2 => Scenario::five_mile_restricted(),
                };
                (VehicleParams::default(), scenario)
            }
        };
        Ok(Problem::new(case, vehicle, scenario, model)?)
    };

    match cli.command {
        Command::Evaluate {
            case,
            accel,
            decel,
            cruise,
            accel1,
            cruise1,
            decel1,
            cruise2,
            accel2,
            cruise3,
            decel2,
        } => {
            let case: CaseId = case.into();
            let problem = problem_for(case)?;
            let params = match case {
                CaseId::Case1 => {
                    let (a, d, v) = match (accel, decel, cruise) {
                        (Some(a), Some(d), Some(v)) => (a, d, v),
                        _ => {
                            return Err(CliError::Config(
                                "case1 needs --accel, --decel and --cruise".into(),
                            ))
                        }
                    };
                    CandidateParams::Case1(Case1Params {
                        accel: mph_to_mps(a),
                        decel: mph_to_mps(d),
                        cruise_speed: mph_to_mps(v),
                    })
                }
                CaseId::Case2 => {
                    let fields = [accel1, cruise1, decel1, cruise2, accel2, cruise3, decel2];
                    if fields.iter().any(Option::is_none) {
                        return Err(CliError::Config(
                            "case2 needs --accel1, --cruise1, --decel1, --cruise2, --accel2, \
                             --cruise3 and --decel2"
                                .into(),
                        ));
                    }
                    let f: Vec<f64> = fields.iter().map(|v| mph_to_mps(v.unwrap())).collect();
                    CandidateParams::Case2(Case2Params {
                        accel1: f[0],
                        cruise1: f[1],
                        decel1: f[2],
                        cruise2: f[3],
                        accel2: f[4],
                        cruise3: f[5],
                        decel2: f[6],
                    })
                }
            };
            let (cycle, breakdown) = problem
                .evaluate_params(&params)
                .map_err(|reason| CliError::Infeasible(reason.to_string()))?;
            eprintln!(
                "feasible: total_time_s={} total_distance_m={}",
                cycle.total_duration(),
                cycle.total_distance()
            );
            print!("{}", breakdown.to_csv());
            Ok(())
        }

        Command::Optimize {
            case,
            algo,
            seed,
            knobs,
        } => {
            let case: CaseId = case.into();
            let algo: Algo = algo.into();
            let problem = problem_for(case)?;
            let report = match algo {
                Algo::Ga => run_ga(&problem, problem.layout(), &knobs.ga_config(case, seed))?,
                Algo::Shc => run_shc(&problem, problem.layout(), &knobs.shc_config(seed))?,
                Algo::Exhaustive => run_exhaustive(&problem, problem.layout())?,
            };
            std::fs::create_dir_all(&cli.out_dir).map_err(|e| CliError::Other(e.to_string()))?;
            let trace_path = cli
                .out_dir
                .join(format!("{case}_{algo}_seed{seed}_trace.csv"));
            std::fs::write(&trace_path, trace_csv(&report))
                .map_err(|e| CliError::Other(e.to_string()))?;
            println!("case: {case}");
            println!("algo: {algo}");
            println!("seed: {seed}");
            println!("best_chromosome: {}", report.best_chromosome);
            println!("best_params: {}", describe_params(&report.best_params));
            println!("best_energy_kwh: {}", report.best_energy_kwh);
            println!("best_fitness: {}", report.best_fitness);
            println!("evaluations: {}", report.evaluations);
            println!("trace: {}", trace_path.display());
            Ok(())
        }

        Command::Experiment {
            case,
            algo,
            runs,
            base_seed,
            bin_width,
            knobs,
        } => {
            let case: CaseId = case.into();
            let algo: Algo = algo.into();
            let problem = problem_for(case)?;
            let mut cfg = ExperimentConfig::new(case, algo, cli.out_dir.clone());
            cfg.runs = runs;
            cfg.base_seed = base_seed;
            cfg.bin_width = bin_width;
            cfg.ga = knobs.ga_config(case, base_seed);
            cfg.shc = knobs.shc_config(base_seed);
            let summary = run_experiment(&problem, &cfg)?;
            println!("case: {case}");
            println!("algo: {algo}");
            println!("runs: {}", summary.runs);
            println!("e_min_kwh: {}", summary.e_min);
            println!("e_avg_kwh: {}", summary.e_avg);
            println!("sigma_kwh: {}", summary.sigma);
            println!("best_params: {}", describe_params(&summary.best_params));
            println!("out_dir: {}", cli.out_dir.display());
            Ok(())
        }

        Command::Profile {
            case,
            algo,
            seed,
            dt,
            knobs,
        } => {
            let case: CaseId = case.into();
            let algo: Algo = algo.into();
            let problem = problem_for(case)?;
            let report = match algo {
                Algo::Ga => run_ga(&problem, problem.layout(), &knobs.ga_config(case, seed))?,
                Algo::Shc => run_shc(&problem, problem.layout(), &knobs.shc_config(seed))?,
                Algo::Exhaustive => run_exhaustive(&problem, problem.layout())?,
            };
            if !report.best_energy_kwh.is_finite() {
                return Err(CliError::Infeasible(
                    "the optimizer found no feasible candidate".into(),
                ));
            }
            std::fs::create_dir_all(&cli.out_dir).map_err(|e| CliError::Other(e.to_string()))?;
            let path = cli.out_dir.join(format!("{case}_{algo}_profile.csv"));
            ecodrive::experiment::export_best_profile(&problem, &report.best_params, dt, &path)?;
            println!("best_params: {}", describe_params(&report.best_params));
            println!("best_energy_kwh: {}", report.best_energy_kwh);
            println!("profile: {}", path.display());
            Ok(())
        }
    }
}

/// Human-readable candidate description in road-sign units.
fn describe_params(params: &CandidateParams) -> String {
    fn nice(v: f64) -> f64 {
        (v * 1e6).round() / 1e6
    }
    match params {
        CandidateParams::Case1(p) => format!(
            "accel={} mph/s decel={} mph/s cruise={} mph",
            nice(mps_to_mph(p.accel)),
            nice(mps_to_mph(p.decel)),
            nice(mps_to_mph(p.cruise_speed)),
        ),
        CandidateParams::Case2(p) => format!(
            "accel1={} cruise1={} decel1={} cruise2={} accel2={} cruise3={} decel2={} (mph, mph/s)",
            nice(mps_to_mph(p.accel1)),
            nice(mps_to_mph(p.cruise1)),
            nice(mps_to_mph(p.decel1)),
            nice(mps_to_mph(p.cruise2)),
            nice(mps_to_mph(p.accel2)),
            nice(mps_to_mph(p.cruise3)),
            nice(mps_to_mph(p.decel2)),
        ),
    }
}
