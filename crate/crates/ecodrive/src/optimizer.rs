//! Search algorithms over chromosome space: an elitist genetic
//! algorithm, a stochastic hill climber baseline, and exhaustive
//! search as the ground-truth oracle.
//!
//! Every run is driven by its own seeded ChaCha stream, so a fixed
//! seed reproduces the full trace bit for bit. Ties are always broken
//! toward the lower chromosome value.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cycle::{CandidateParams, CaseId};
use crate::encoding::{enumerate_all, random_chromosome, Chromosome, Layout};
use crate::error::{Error, Result};
use crate::problem::{Evaluation, Objective};

/// Genetic algorithm knobs.
#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    pub elite_count: usize,
    pub rng_seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 40,
            generations: 100,
            crossover_prob: 0.8,
            mutation_prob: 0.2,
            elite_count: 2,
            rng_seed: 0,
        }
    }
}

impl GaConfig {
    /// Per-case default. The restricted-road search space is 2^18 times
    /// larger and its feasible region is thin (about 1%), so it gets a
    /// larger population; with 40 individuals a population that starts
    /// all-infeasible can drift to fixation before finding the feasible
    /// region at all.
    pub fn default_for_case(case: CaseId) -> Self {
        match case {
            CaseId::Case1 => GaConfig::default(),
            CaseId::Case2 => GaConfig {
                population_size: 100,
                ..GaConfig::default()
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::InvalidConfig(format!(
                "population_size must be at least 2, got {}",
                self.population_size
            )));
        }
        for (name, p) in [
            ("crossover_prob", self.crossover_prob),
            ("mutation_prob", self.mutation_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be in [0, 1], got {p}"
                )));
            }
        }
        if self.elite_count >= self.population_size {
            return Err(Error::InvalidConfig(format!(
                "elite_count {} must be below population_size {}",
                self.elite_count, self.population_size
            )));
        }
        Ok(())
    }

    /// Total fitness evaluations a run will perform.
    pub fn evaluation_budget(&self) -> u64 {
        self.population_size as u64 * (self.generations as u64 + 1)
    }
}

/// How the hill climber proposes candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Neighborhood {
    /// Flip one uniformly chosen bit of the incumbent.
    #[default]
    BitFlip,
    /// Draw a fresh uniform chromosome each iteration.
    UniformRandom,
}

/// Stochastic hill climber knobs.
#[derive(Debug, Clone, PartialEq)]
pub struct ShcConfig {
    pub max_iterations: usize,
    pub neighborhood: Neighborhood,
    pub rng_seed: u64,
}

impl Default for ShcConfig {
    fn default() -> Self {
        ShcConfig {
            max_iterations: 2000,
            neighborhood: Neighborhood::BitFlip,
            rng_seed: 0,
        }
    }
}

/// One generation (or iteration) of convergence history.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub generation: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    /// Energy of the generation's best individual; infinite when the
    /// generation holds no feasible candidate.
    pub best_energy_kwh: f64,
}

/// Outcome of one optimizer run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub best_chromosome: Chromosome,
    pub best_params: CandidateParams,
    /// Energy of the best candidate; infinite when the whole run saw
    /// no feasible candidate.
    pub best_energy_kwh: f64,
    pub best_fitness: f64,
    pub evaluations: u64,
    pub trace: Vec<TracePoint>,
}

/// Single-point crossover at a uniformly random cut in `1..width`;
/// bits to the right of the cut swap between the parents.
pub fn crossover<R: Rng + ?Sized>(
    a: &Chromosome,
    b: &Chromosome,
    rng: &mut R,
) -> Result<(Chromosome, Chromosome)> {
    if a.width() != b.width() {
        return Err(Error::LengthMismatch(a.width(), b.width()));
    }
    let cut = rng.random_range(1..a.width());
    Ok(crossover_at(a, b, cut))
}

/// Crossover at an explicit cut position counted from the left.
pub fn crossover_at(a: &Chromosome, b: &Chromosome, cut: u32) -> (Chromosome, Chromosome) {
    assert!(cut >= 1 && cut < a.width());
    assert_eq!(a.width(), b.width());
    let suffix_bits = a.width() - cut;
    let suffix_mask = (1u64 << suffix_bits) - 1;
    let o1 = (a.value() & !suffix_mask) | (b.value() & suffix_mask);
    let o2 = (b.value() & !suffix_mask) | (a.value() & suffix_mask);
    (
        Chromosome::new(o1, a.width()).expect("masked value fits the width"),
        Chromosome::new(o2, a.width()).expect("masked value fits the width"),
    )
}

/// Flips one uniformly chosen bit.
pub fn mutate<R: Rng + ?Sized>(c: &Chromosome, rng: &mut R) -> Chromosome {
    let pos = rng.random_range(0..c.width());
    c.flipped(pos)
}

/// Elitist selection: the `elite_count` fittest individuals pass
/// unchanged, the remaining slots are filled by fitness-proportional
/// draws over the current population (uniform draws when every fitness
/// is zero). Ties sort toward the lower chromosome value.
pub fn select_elitist<R: Rng + ?Sized>(
    population: &[Chromosome],
    fitnesses: &[f64],
    cfg: &GaConfig,
    rng: &mut R,
) -> Result<Vec<Chromosome>> {
    if population.len() != fitnesses.len() || population.len() != cfg.population_size {
        return Err(Error::SizeMismatch {
            population: population.len(),
            fitnesses: fitnesses.len(),
        });
    }
    let mut order: Vec<usize> = (0..population.len()).collect();
    order.sort_by(|&i, &j| {
        fitnesses[j]
            .total_cmp(&fitnesses[i])
            .then(population[i].value().cmp(&population[j].value()))
    });
    let mut next: Vec<Chromosome> = order[..cfg.elite_count]
        .iter()
        .map(|&i| population[i])
        .collect();

    let total: f64 = fitnesses.iter().sum();
    while next.len() < cfg.population_size {
        let idx = if total > 0.0 {
            let mut u = rng.random::<f64>() * total;
            let mut chosen = population.len() - 1;
            for (i, f) in fitnesses.iter().enumerate() {
                if u < *f {
                    chosen = i;
                    break;
                }
                u -= f;
            }
            chosen
        } else {
            rng.random_range(0..population.len())
        };
        next.push(population[idx]);
    }
    Ok(next)
}

/// Best individual of a generation: highest fitness, ties toward the
/// lower chromosome value.
fn generation_best<'a>(
    population: &'a [Chromosome],
    evaluations: &'a [Evaluation],
) -> (&'a Chromosome, &'a Evaluation) {
    let mut best = 0;
    for i in 1..population.len() {
        let better = evaluations[i].fitness > evaluations[best].fitness
            || (evaluations[i].fitness == evaluations[best].fitness
                && population[i].value() < population[best].value());
        if better {
            best = i;
        }
    }
    (&population[best], &evaluations[best])
}

fn trace_point(generation: usize, population: &[Chromosome], evals: &[Evaluation]) -> TracePoint {
    let (_, best) = generation_best(population, evals);
    let mean = evals.iter().map(|e| e.fitness).sum::<f64>() / evals.len() as f64;
    TracePoint {
        generation,
        best_fitness: best.fitness,
        mean_fitness: mean,
        best_energy_kwh: best.energy_kwh.unwrap_or(f64::INFINITY),
    }
}

struct BestTracker {
    chromosome: Chromosome,
    evaluation: Evaluation,
}

impl BestTracker {
    fn offer(&mut self, c: &Chromosome, e: &Evaluation) {
        let better = e.fitness > self.evaluation.fitness
            || (e.fitness == self.evaluation.fitness && c.value() < self.chromosome.value());
        if better {
            self.chromosome = *c;
            self.evaluation = *e;
        }
    }

    fn into_report<O: Objective>(
        self,
        objective: &O,
        evaluations: u64,
        trace: Vec<TracePoint>,
    ) -> RunReport {
        RunReport {
            best_params: objective.decode(&self.chromosome),
            best_chromosome: self.chromosome,
            best_energy_kwh: self.evaluation.energy_kwh.unwrap_or(f64::INFINITY),
            best_fitness: self.evaluation.fitness,
            evaluations,
            trace,
        }
    }
}

/// Runs the genetic algorithm: random initial population, then
/// generations of elitist selection, single-point crossover and
/// single-bit mutation. Returns the best individual ever evaluated.
pub fn run_ga<O: Objective>(objective: &O, layout: &Layout, cfg: &GaConfig) -> Result<RunReport> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut population: Vec<Chromosome> = (0..cfg.population_size)
        .map(|_| random_chromosome(layout, &mut rng))
        .collect();
    let mut evals: Vec<Evaluation> = population.iter().map(|c| objective.evaluate(c)).collect();
    let mut evaluations = population.len() as u64;

    let mut trace = Vec::with_capacity(cfg.generations + 1);
    trace.push(trace_point(0, &population, &evals));
    let (c0, e0) = generation_best(&population, &evals);
    let mut best = BestTracker {
        chromosome: *c0,
        evaluation: *e0,
    };

    for generation in 1..=cfg.generations {
        let fitnesses: Vec<f64> = evals.iter().map(|e| e.fitness).collect();
        let mut next = select_elitist(&population, &fitnesses, cfg, &mut rng)?;

        let mut i = cfg.elite_count;
        while i + 1 < next.len() {
            if rng.random::<f64>() < cfg.crossover_prob {
                let (o1, o2) =
                    crossover_at(&next[i], &next[i + 1], rng.random_range(1..next[i].width()));
                next[i] = o1;
                next[i + 1] = o2;
            }
            i += 2;
        }
        for slot in next.iter_mut().skip(cfg.elite_count) {
            if rng.random::<f64>() < cfg.mutation_prob {
                *slot = mutate(slot, &mut rng);
            }
        }

        population = next;
        evals = population.iter().map(|c| objective.evaluate(c)).collect();
        evaluations += population.len() as u64;
        trace.push(trace_point(generation, &population, &evals));
        let (c, e) = generation_best(&population, &evals);
        best.offer(c, e);
    }

    if cfg.elite_count >= 1 {
        for w in trace.windows(2) {
            assert!(
                w[1].best_fitness >= w[0].best_fitness,
                "elitist selection regressed between generations {} and {}",
                w[0].generation,
                w[1].generation
            );
        }
    }
    Ok(best.into_report(objective, evaluations, trace))
}

/// Runs the stochastic hill climber: starting from a random solution,
/// propose a neighbor each iteration and move whenever its fitness is
/// at least the incumbent's.
pub fn run_shc<O: Objective>(objective: &O, layout: &Layout, cfg: &ShcConfig) -> Result<RunReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut incumbent = random_chromosome(layout, &mut rng);
    let mut current = objective.evaluate(&incumbent);
    let mut evaluations = 1u64;

    fn incumbent_point(generation: usize, e: &Evaluation) -> TracePoint {
        TracePoint {
            generation,
            best_fitness: e.fitness,
            mean_fitness: e.fitness,
            best_energy_kwh: e.energy_kwh.unwrap_or(f64::INFINITY),
        }
    }
    let mut trace = Vec::with_capacity(cfg.max_iterations + 1);
    trace.push(incumbent_point(0, &current));

    for iteration in 1..=cfg.max_iterations {
        let neighbor = match cfg.neighborhood {
            Neighborhood::BitFlip => mutate(&incumbent, &mut rng),
            Neighborhood::UniformRandom => random_chromosome(layout, &mut rng),
        };
        let eval = objective.evaluate(&neighbor);
        evaluations += 1;
        if eval.fitness >= current.fitness {
            incumbent = neighbor;
            current = eval;
        }
        trace.push(incumbent_point(iteration, &current));
    }

    for w in trace.windows(2) {
        assert!(
            w[1].best_fitness >= w[0].best_fitness,
            "hill climber incumbent regressed at iteration {}",
            w[1].generation
        );
    }
    let best = BestTracker {
        chromosome: incumbent,
        evaluation: current,
    };
    Ok(best.into_report(objective, evaluations, trace))
}

/// Evaluates every chromosome of the layout and returns the exact
/// global optimum of the discretized problem.
pub fn run_exhaustive<O: Objective>(objective: &O, layout: &Layout) -> Result<RunReport> {
    let mut iter = enumerate_all(layout)?;
    let first = iter.next().expect("layouts have at least one bit");
    let first_eval = objective.evaluate(&first);
    let mut best = BestTracker {
        chromosome: first,
        evaluation: first_eval,
    };
    let mut evaluations = 1u64;
    let mut fitness_sum = first_eval.fitness;
    for c in iter {
        let eval = objective.evaluate(&c);
        evaluations += 1;
        fitness_sum += eval.fitness;
        // Strict improvement keeps the earliest (lowest) chromosome on ties.
        if eval.fitness > best.evaluation.fitness {
            best.chromosome = c;
            best.evaluation = eval;
        }
    }
    let trace = vec![TracePoint {
        generation: 0,
        best_fitness: best.evaluation.fitness,
        mean_fitness: fitness_sum / evaluations as f64,
        best_energy_kwh: best.evaluation.energy_kwh.unwrap_or(f64::INFINITY),
    }];
    Ok(best.into_report(objective, evaluations, trace))
}
