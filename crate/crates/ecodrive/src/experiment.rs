//! Seeded multi-run experiments with CSV artifacts.
//!
//! An experiment runs one optimizer `runs` times with seeds
//! `base_seed + run_index`, aggregates the per-run best energies, and
//! writes everything needed to redraw the result tables and figures:
//! a summary row, the per-run energies, a histogram, per-run
//! convergence traces and the best speed profile. For one config and
//! base seed the output files are byte-identical across invocations.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::cycle::{sample_profile, CandidateParams, CaseId};
use crate::encoding::Chromosome;
use crate::error::{Error, Result};
use crate::optimizer::{run_exhaustive, run_ga, run_shc, GaConfig, RunReport, ShcConfig};
use crate::problem::Problem;
use crate::units::mps_to_mph;

/// Which optimizer an experiment exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Ga,
    Shc,
    Exhaustive,
}

impl std::fmt::Display for Algo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algo::Ga => write!(f, "ga"),
            Algo::Shc => write!(f, "shc"),
            Algo::Exhaustive => write!(f, "exhaustive"),
        }
    }
}

/// Experiment definition on top of a [`Problem`].
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub algo: Algo,
    pub runs: usize,
    pub base_seed: u64,
    pub ga: GaConfig,
    pub shc: ShcConfig,
    pub out_dir: PathBuf,
    /// Histogram bin width in kWh; defaults per case when `None`.
    pub bin_width: Option<f64>,
    /// Sampling step of the exported best profile, s.
    pub profile_dt: f64,
}

impl ExperimentConfig {
    pub fn new(problem_case: CaseId, algo: Algo, out_dir: PathBuf) -> Self {
        ExperimentConfig {
            algo,
            runs: 30,
            base_seed: 1,
            ga: GaConfig::default_for_case(problem_case),
            shc: ShcConfig::default(),
            out_dir,
            bin_width: None,
            profile_dt: 1.0,
        }
    }

    fn effective_bin_width(&self, case: CaseId) -> f64 {
        self.bin_width.unwrap_or(match case {
            CaseId::Case1 => 0.01,
            CaseId::Case2 => 0.05,
        })
    }
}

/// One run's contribution to an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    pub report: RunReport,
}

/// Aggregated experiment outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub case: CaseId,
    pub algo: Algo,
    pub runs: usize,
    /// Lowest per-run best energy, kWh.
    pub e_min: f64,
    /// Mean of the per-run best energies, kWh.
    pub e_avg: f64,
    /// Sample standard deviation (n-1) of the per-run best energies, kWh.
    pub sigma: f64,
    pub best_params: CandidateParams,
    pub best_chromosome: Chromosome,
    pub per_run_energies: Vec<f64>,
}

/// Runs the experiment and writes all artifacts under the out dir.
/// Fails if any run ends without a feasible candidate.
pub fn run_experiment(problem: &Problem, cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    if cfg.runs == 0 {
        return Err(Error::InvalidConfig("runs must be at least 1".into()));
    }
    std::fs::create_dir_all(&cfg.out_dir).map_err(|source| Error::Io {
        path: cfg.out_dir.clone(),
        source,
    })?;
    let prefix = format!("{}_{}", problem.case(), cfg.algo);

    let mut records = Vec::with_capacity(cfg.runs);
    for run in 0..cfg.runs {
        let seed = cfg.base_seed.wrapping_add(run as u64);
        let report = match cfg.algo {
            Algo::Ga => {
                let ga = GaConfig {
                    rng_seed: seed,
                    ..cfg.ga.clone()
                };
                run_ga(problem, problem.layout(), &ga)?
            }
            Algo::Shc => {
                let shc = ShcConfig {
                    rng_seed: seed,
                    ..cfg.shc.clone()
                };
                run_shc(problem, problem.layout(), &shc)?
            }
            Algo::Exhaustive => run_exhaustive(problem, problem.layout())?,
        };
        if !report.best_energy_kwh.is_finite() {
            return Err(Error::NoFeasibleCandidate { run });
        }
        let trace_path = cfg.out_dir.join(format!("{prefix}_trace_run{run:03}.csv"));
        write_file(&trace_path, &trace_csv(&report))?;
        records.push(RunRecord { run, seed, report });
    }

    let energies: Vec<f64> = records.iter().map(|r| r.report.best_energy_kwh).collect();
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let e_avg = mean(&energies);
    let sigma = sample_std(&energies);

    let best_record = records
        .iter()
        .min_by(|a, b| {
            a.report
                .best_energy_kwh
                .total_cmp(&b.report.best_energy_kwh)
                .then(
                    a.report
                        .best_chromosome
                        .value()
                        .cmp(&b.report.best_chromosome.value()),
                )
        })
        .expect("runs >= 1");

    let summary = ExperimentSummary {
        case: problem.case(),
        algo: cfg.algo,
        runs: cfg.runs,
        e_min,
        e_avg,
        sigma,
        best_params: best_record.report.best_params,
        best_chromosome: best_record.report.best_chromosome,
        per_run_energies: energies,
    };

    write_file(
        &cfg.out_dir.join(format!("{prefix}_summary.csv")),
        &summary_csv(&summary),
    )?;
    write_file(
        &cfg.out_dir.join(format!("{prefix}_runs.csv")),
        &runs_csv(&records),
    )?;
    export_histogram(
        &summary.per_run_energies,
        cfg.effective_bin_width(problem.case()),
        &cfg.out_dir.join(format!("{prefix}_histogram.csv")),
    )?;
    export_best_profile(
        problem,
        &summary.best_params,
        cfg.profile_dt,
        &cfg.out_dir.join(format!("{prefix}_best_profile.csv")),
    )?;
    Ok(summary)
}

/// Writes `bin_lo_kwh,bin_hi_kwh,count` rows; bins align to multiples
/// of the width and empty bins are omitted.
pub fn export_histogram(energies: &[f64], bin_width: f64, path: &Path) -> Result<()> {
    if energies.is_empty() {
        return Err(Error::EmptyInput);
    }
    if bin_width <= 0.0 {
        return Err(Error::NonPositiveBinWidth(bin_width));
    }
    let mut bins: std::collections::BTreeMap<i64, u64> = std::collections::BTreeMap::new();
    for &e in energies {
        // Nudge values sitting a rounding error below a bin boundary.
        let idx = (e / bin_width + 1e-9).floor() as i64;
        *bins.entry(idx).or_insert(0) += 1;
    }
    // Bin edges are presentational; strip the dust that idx * width
    // reintroduces so edges print as 0.95 rather than 0.9500000000000001.
    fn tidy(v: f64) -> f64 {
        (v * 1e9).round() / 1e9
    }
    let mut out = String::from("bin_lo_kwh,bin_hi_kwh,count\n");
    for (idx, count) in bins {
        let lo = tidy(idx as f64 * bin_width);
        let hi = tidy((idx + 1) as f64 * bin_width);
        writeln!(out, "{lo},{hi},{count}").expect("writing to String cannot fail");
    }
    write_file(path, &out)
}

/// Writes the `t_s,v_mph` speed profile of a candidate's cycle.
pub fn export_best_profile(
    problem: &Problem,
    params: &CandidateParams,
    dt: f64,
    path: &Path,
) -> Result<()> {
    let cycle = problem.build(params).map_err(Error::Infeasible)?;
    let samples = sample_profile(&cycle, dt)?;
    let mut out = String::from("t_s,v_mph\n");
    for (t, v) in samples {
        writeln!(out, "{t},{}", mps_to_mph(v)).expect("writing to String cannot fail");
    }
    write_file(path, &out)
}

/// `generation,best_fitness,mean_fitness,best_energy_kwh` rows.
pub fn trace_csv(report: &RunReport) -> String {
    let mut out = String::from("generation,best_fitness,mean_fitness,best_energy_kwh\n");
    for p in &report.trace {
        writeln!(
            out,
            "{},{},{},{}",
            p.generation, p.best_fitness, p.mean_fitness, p.best_energy_kwh
        )
        .expect("writing to String cannot fail");
    }
    out
}

/// Parameter columns shared by the summary and per-run CSVs: the
/// single-segment case fills the first three and leaves the rest empty.
fn param_columns(params: &CandidateParams) -> String {
    match params {
        CandidateParams::Case1(p) => format!(
            "{},{},{},,,,",
            mps_to_mph(p.accel),
            mps_to_mph(p.cruise_speed),
            mps_to_mph(p.decel),
        ),
        CandidateParams::Case2(p) => format!(
            "{},{},{},{},{},{},{}",
            mps_to_mph(p.accel1),
            mps_to_mph(p.cruise1),
            mps_to_mph(p.decel1),
            mps_to_mph(p.cruise2),
            mps_to_mph(p.accel2),
            mps_to_mph(p.cruise3),
            mps_to_mph(p.decel2),
        ),
    }
}

pub fn summary_csv(summary: &ExperimentSummary) -> String {
    let mut out = String::from(
        "case,algo,runs,e_min_kwh,e_avg_kwh,sigma_kwh,alpha1,v1,beta1,v2,alpha2,v3,beta2\n",
    );
    writeln!(
        out,
        "{},{},{},{},{},{},{}",
        summary.case,
        summary.algo,
        summary.runs,
        summary.e_min,
        summary.e_avg,
        summary.sigma,
        param_columns(&summary.best_params),
    )
    .expect("writing to String cannot fail");
    out
}

pub fn runs_csv(records: &[RunRecord]) -> String {
    let mut out = String::from("run,seed,e_kwh,evaluations,alpha1,v1,beta1,v2,alpha2,v3,beta2\n");
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.run,
            r.seed,
            r.report.best_energy_kwh,
            r.report.evaluations,
            param_columns(&r.report.best_params),
        )
        .expect("writing to String cannot fail");
    }
    out
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation with the n-1 denominator; zero for a
/// single sample.
pub fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    let var = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64;
    var.sqrt()
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn case1_experiment(dir: &Path, runs: usize) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(CaseId::Case1, Algo::Ga, dir.to_path_buf());
        cfg.runs = runs;
        cfg.base_seed = 1000;
        cfg
    }

    #[test]
    fn single_run_statistics_collapse() {
        let dir = tempfile::tempdir().unwrap();
        let problem = Problem::case1_default();
        let cfg = case1_experiment(dir.path(), 1);
        let summary = run_experiment(&problem, &cfg).unwrap();
        assert_eq!(summary.e_min, summary.e_avg);
        assert_eq!(summary.sigma, 0.0);
        assert_eq!(summary.per_run_energies.len(), 1);
    }

    #[test]
    fn experiment_outputs_are_complete_and_reproducible() {
        let dir = tempfile::tempdir().unwrap();
        let problem = Problem::case1_default();
        let cfg = case1_experiment(dir.path(), 3);
        let s1 = run_experiment(&problem, &cfg).unwrap();
        let expected = [
            "case1_ga_summary.csv",
            "case1_ga_runs.csv",
            "case1_ga_histogram.csv",
            "case1_ga_best_profile.csv",
            "case1_ga_trace_run000.csv",
            "case1_ga_trace_run001.csv",
            "case1_ga_trace_run002.csv",
        ];
        let mut first: Vec<(String, Vec<u8>)> = Vec::new();
        for name in expected {
            let path = dir.path().join(name);
            assert!(path.exists(), "{name} missing");
            first.push((name.to_string(), std::fs::read(&path).unwrap()));
        }
        let s2 = run_experiment(&problem, &cfg).unwrap();
        assert_eq!(s1, s2);
        for (name, bytes) in first {
            assert_eq!(
                std::fs::read(dir.path().join(&name)).unwrap(),
                bytes,
                "{name} changed between identical runs"
            );
        }
    }

    #[test]
    fn summary_statistics_recompute_from_runs_csv() {
        let dir = tempfile::tempdir().unwrap();
        let problem = Problem::case1_default();
        let cfg = case1_experiment(dir.path(), 5);
        let summary = run_experiment(&problem, &cfg).unwrap();
        let text = std::fs::read_to_string(dir.path().join("case1_ga_runs.csv")).unwrap();
        let energies: Vec<f64> = text
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
            .collect();
        assert_eq!(energies.len(), 5);
        let m = mean(&energies);
        let s = sample_std(&energies);
        assert!(((m - summary.e_avg) / summary.e_avg).abs() < 1e-12);
        if summary.sigma > 0.0 {
            assert!(((s - summary.sigma) / summary.sigma).abs() < 1e-12);
        } else {
            assert_eq!(s, 0.0);
        }
    }

    #[test]
    fn histogram_binning_rules() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.csv");
        export_histogram(&[0.93, 0.93, 0.95], 0.01, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "bin_lo_kwh,bin_hi_kwh,count");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0.93,"));
        assert!(lines[1].ends_with(",2"));
        assert!(lines[2].starts_with("0.95,"));
        assert!(lines[2].ends_with(",1"));

        let counts_total = |text: &str| -> u64 {
            text.lines()
                .skip(1)
                .map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap())
                .sum()
        };
        let energies: Vec<f64> = (0..30).map(|i| 0.9 + 0.001 * i as f64).collect();
        export_histogram(&energies, 0.01, &path).unwrap();
        assert_eq!(counts_total(&std::fs::read_to_string(&path).unwrap()), 30);

        export_histogram(&[0.8; 7], 0.05, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.lines().nth(1).unwrap().ends_with(",7"));

        assert!(matches!(
            export_histogram(&[], 0.01, &path),
            Err(Error::EmptyInput)
        ));
        assert!(matches!(
            export_histogram(&[1.0], 0.0, &path),
            Err(Error::NonPositiveBinWidth(_))
        ));
    }

    #[test]
    fn best_profile_peaks_at_the_optimized_speed() {
        let dir = tempfile::tempdir().unwrap();
        let problem = Problem::case1_default();
        let cfg = case1_experiment(dir.path(), 2);
        let summary = run_experiment(&problem, &cfg).unwrap();
        let text = std::fs::read_to_string(dir.path().join("case1_ga_best_profile.csv")).unwrap();
        let mut max_v: f64 = 0.0;
        let mut last = (0.0, f64::NAN);
        for line in text.lines().skip(1) {
            let mut cells = line.split(',');
            let t: f64 = cells.next().unwrap().parse().unwrap();
            let v: f64 = cells.next().unwrap().parse().unwrap();
            max_v = max_v.max(v);
            last = (t, v);
        }
        let expected_peak = match summary.best_params {
            CandidateParams::Case1(p) => mps_to_mph(p.cruise_speed),
            _ => unreachable!(),
        };
        assert_relative_eq!(max_v, expected_peak, max_relative = 1e-9);
        assert_eq!(last.1, 0.0);
    }

    #[test]
    fn zero_runs_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let problem = Problem::case1_default();
        let cfg = case1_experiment(dir.path(), 0);
        assert!(matches!(
            run_experiment(&problem, &cfg),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn longer_ga_budget_never_hurts_per_run_energy() {
        let dir = tempfile::tempdir().unwrap();
        let problem = Problem::case1_default();
        let mut short = case1_experiment(dir.path(), 4);
        short.ga.generations = 10;
        let mut long = case1_experiment(dir.path(), 4);
        long.ga.generations = 40;
        let s_short = run_experiment(&problem, &short).unwrap();
        let s_long = run_experiment(&problem, &long).unwrap();
        for (a, b) in s_long
            .per_run_energies
            .iter()
            .zip(&s_short.per_run_energies)
        {
            assert!(a <= b, "longer run regressed: {a} > {b}");
        }
    }
}
