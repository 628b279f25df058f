//! Genetic algorithm over chromosomes: roulette selection, uniform
//! crossover, per-bit mutation and elitism. Fitness is the reciprocal of
//! the total node count over a test suite.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chess::EpdRecord;
use crate::genome::{decode, Chromosome, ChromosomeError, CHROMOSOME_BITS};
use crate::harness::{solve_position, thread_pool};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population_size: usize,
    pub crossover_rate: f64,
    /// Per-bit flip probability.
    pub mutation_rate: f64,
    /// Generations in the run, generation 0 included.
    pub generations: usize,
    pub elitism_count: usize,
    pub seed: u64,
    pub node_cap: u64,
    /// Worker threads for fitness evaluation. Results do not depend on it.
    #[serde(skip)]
    pub jobs: usize,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 10,
            crossover_rate: 0.75,
            mutation_rate: 0.05,
            generations: 50,
            elitism_count: 1,
            seed: 1,
            node_cap: 500_000,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaConfigError {
    #[error("population size must be at least 2, got {0}")]
    Population(usize),
    #[error("{name} must lie in [0, 1], got {value}")]
    Rate { name: &'static str, value: f64 },
    #[error("elitism count {elites} must be below the population size {population}")]
    Elitism { elites: usize, population: usize },
    #[error("generations must be at least 1")]
    Generations,
    #[error("node cap must be at least 1")]
    NodeCap,
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), GaConfigError> {
        if self.population_size < 2 {
            return Err(GaConfigError::Population(self.population_size));
        }
        for (name, value) in [("crossover rate", self.crossover_rate), ("mutation rate", self.mutation_rate)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(GaConfigError::Rate { name, value });
            }
        }
        if self.elitism_count >= self.population_size {
            return Err(GaConfigError::Elitism { elites: self.elitism_count, population: self.population_size });
        }
        if self.generations == 0 {
            return Err(GaConfigError::Generations);
        }
        if self.node_cap == 0 {
            return Err(GaConfigError::NodeCap);
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitnessReport {
    pub chromosome: Chromosome,
    pub total_nodes: u64,
    pub solved_count: usize,
    pub fitness: f64,
}

impl FitnessReport {
    pub fn new(chromosome: Chromosome, total_nodes: u64, solved_count: usize) -> Self {
        assert!(total_nodes > 0);
        FitnessReport { chromosome, total_nodes, solved_count, fitness: 1.0 / total_nodes as f64 }
    }
}

/// Total nodes over the suite, unsolved positions charged `node_cap`.
pub fn fitness_of(c: Chromosome, suite: &[EpdRecord], node_cap: u64) -> FitnessReport {
    assert!(!suite.is_empty(), "fitness needs a non-empty suite");
    let params = decode(c);
    let (mut total, mut solved) = (0, 0);
    for rec in suite {
        let o = solve_position(rec, &params, node_cap);
        total += o.nodes;
        solved += o.solved as usize;
    }
    FitnessReport::new(c, total, solved)
}

/// Fitness of every chromosome, one task per (organism, position) pair on
/// `jobs` threads. Identical to sequential evaluation.
pub fn evaluate_population(chromosomes: &[Chromosome], suite: &[EpdRecord], node_cap: u64, jobs: usize) -> Vec<FitnessReport> {
    assert!(!suite.is_empty(), "fitness needs a non-empty suite");
    let params: Vec<_> = chromosomes.iter().map(|&c| decode(c)).collect();
    let tasks: Vec<(usize, usize)> =
        (0..chromosomes.len()).flat_map(|i| (0..suite.len()).map(move |j| (i, j))).collect();
    let run = |&(i, j): &(usize, usize)| solve_position(&suite[j], &params[i], node_cap);
    let outcomes: Vec<_> = if jobs <= 1 {
        tasks.iter().map(run).collect()
    } else {
        thread_pool(jobs).install(|| tasks.par_iter().map(run).collect())
    };
    outcomes
        .chunks(suite.len())
        .zip(chromosomes)
        .map(|(rows, &c)| {
            let total = rows.iter().map(|o| o.nodes).sum();
            let solved = rows.iter().filter(|o| o.solved).count();
            FitnessReport::new(c, total, solved)
        })
        .collect()
}

/// Index chosen with probability proportional to fitness.
pub fn roulette_index<R: Rng + ?Sized>(reports: &[FitnessReport], rng: &mut R) -> usize {
    assert!(!reports.is_empty());
    debug_assert!(reports.iter().all(|r| r.fitness > 0.0));
    let total: f64 = reports.iter().map(|r| r.fitness).sum();
    let mut x = rng.gen::<f64>() * total;
    for (i, r) in reports.iter().enumerate() {
        if x < r.fitness {
            return i;
        }
        x -= r.fitness;
    }
    reports.len() - 1
}

pub fn roulette_select<R: Rng + ?Sized>(reports: &[FitnessReport], rng: &mut R) -> Chromosome {
    reports[roulette_index(reports, rng)].chromosome
}

/// With probability `rate`, each bit comes from `a` or `b` with equal
/// chance; otherwise the child is a copy of `a`.
pub fn uniform_crossover<R: Rng + ?Sized>(a: Chromosome, b: Chromosome, rate: f64, rng: &mut R) -> Chromosome {
    if !rng.gen_bool(rate) {
        return a;
    }
    let mask: u128 = rng.gen();
    Chromosome::from_bits((a.bits() & mask) | (b.bits() & !mask))
}

pub fn mutate<R: Rng + ?Sized>(c: Chromosome, rate: f64, rng: &mut R) -> Chromosome {
    let mut flips = 0u128;
    for i in 0..CHROMOSOME_BITS {
        if rng.gen_bool(rate) {
            flips |= 1 << i;
        }
    }
    Chromosome::from_bits(c.bits() ^ flips)
}

/// Generator for one generation: the run seed with the generation number
/// as stream, so any generation can be bred again from the log alone.
pub fn generation_rng(seed: u64, generation: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(generation as u64);
    rng
}

pub fn initial_population(config: &GaConfig) -> Vec<Chromosome> {
    let mut rng = generation_rng(config.seed, 0);
    (0..config.population_size).map(|_| Chromosome::random(&mut rng)).collect()
}

/// Indices sorted best first: fewest nodes, then earliest position.
fn ranking(reports: &[FitnessReport]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..reports.len()).collect();
    idx.sort_by_key(|&i| (reports[i].total_nodes, i));
    idx
}

/// The next population: the elites unchanged, then children of roulette
/// pairs drawn with replacement.
pub fn breed(reports: &[FitnessReport], config: &GaConfig, generation: usize) -> Vec<Chromosome> {
    let mut rng = generation_rng(config.seed, generation);
    let mut next: Vec<Chromosome> =
        ranking(reports).into_iter().take(config.elitism_count).map(|i| reports[i].chromosome).collect();
    while next.len() < config.population_size {
        let a = roulette_select(reports, &mut rng);
        let b = roulette_select(reports, &mut rng);
        let child = uniform_crossover(a, b, config.crossover_rate, &mut rng);
        next.push(mutate(child, config.mutation_rate, &mut rng));
    }
    next
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Organism {
    pub chromosome: Chromosome,
    pub total_nodes: u64,
    pub solved: usize,
}

/// One log line: summary statistics plus the evaluated population, which
/// is all a resumed run needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: usize,
    pub best_nodes: u64,
    pub mean_nodes: f64,
    pub best_solved: usize,
    pub mean_solved: f64,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    pub best_chromosome: Chromosome,
    pub population: Vec<Organism>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LogParseError {
    #[error("invalid JSON log line: {0}")]
    Json(String),
    #[error("expected {expected} CSV columns, found {found}")]
    Columns { expected: usize, found: usize },
    #[error("bad {column} value {value:?}")]
    Value { column: &'static str, value: String },
    #[error(transparent)]
    Chromosome(#[from] ChromosomeError),
    #[error("log has no generation record")]
    Empty,
}

const CSV_COLUMNS: [&str; 9] = [
    "generation",
    "best_nodes",
    "mean_nodes",
    "best_solved",
    "mean_solved",
    "best_fitness",
    "mean_fitness",
    "best_chromosome",
    "population",
];

impl GenerationRecord {
    pub fn from_reports(generation: usize, reports: &[FitnessReport]) -> GenerationRecord {
        let n = reports.len() as f64;
        let best = &reports[ranking(reports)[0]];
        GenerationRecord {
            generation,
            best_nodes: best.total_nodes,
            mean_nodes: reports.iter().map(|r| r.total_nodes as f64).sum::<f64>() / n,
            best_solved: best.solved_count,
            mean_solved: reports.iter().map(|r| r.solved_count as f64).sum::<f64>() / n,
            best_fitness: best.fitness,
            mean_fitness: reports.iter().map(|r| r.fitness).sum::<f64>() / n,
            best_chromosome: best.chromosome,
            population: reports
                .iter()
                .map(|r| Organism { chromosome: r.chromosome, total_nodes: r.total_nodes, solved: r.solved_count })
                .collect(),
        }
    }

    pub fn reports(&self) -> Vec<FitnessReport> {
        self.population.iter().map(|o| FitnessReport::new(o.chromosome, o.total_nodes, o.solved)).collect()
    }

    pub fn csv_header() -> String {
        CSV_COLUMNS.join(",")
    }

    /// Population as space-separated `bits:nodes:solved` triples.
    pub fn to_csv_row(&self) -> String {
        let mut pop = String::new();
        for (i, o) in self.population.iter().enumerate() {
            if i > 0 {
                pop.push(' ');
            }
            let _ = write!(pop, "{}:{}:{}", o.chromosome, o.total_nodes, o.solved);
        }
        format!(
            "{},{},{},{},{},{:e},{:e},{},{}",
            self.generation,
            self.best_nodes,
            self.mean_nodes,
            self.best_solved,
            self.mean_solved,
            self.best_fitness,
            self.mean_fitness,
            self.best_chromosome,
            pop
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    /// Parses a JSON or CSV log line; the format is detected.
    pub fn parse(line: &str) -> Result<GenerationRecord, LogParseError> {
        let line = line.trim();
        if line.starts_with('{') {
            return serde_json::from_str(line).map_err(|e| LogParseError::Json(e.to_string()));
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != CSV_COLUMNS.len() {
            return Err(LogParseError::Columns { expected: CSV_COLUMNS.len(), found: cols.len() });
        }
        fn num<T: std::str::FromStr>(column: &'static str, v: &str) -> Result<T, LogParseError> {
            v.parse().map_err(|_| LogParseError::Value { column, value: v.to_string() })
        }
        let mut population = Vec::new();
        for item in cols[8].split_whitespace() {
            let parts: Vec<&str> = item.split(':').collect();
            if parts.len() != 3 {
                return Err(LogParseError::Value { column: "population", value: item.to_string() });
            }
            population.push(Organism {
                chromosome: parts[0].parse()?,
                total_nodes: num("population", parts[1])?,
                solved: num("population", parts[2])?,
            });
        }
        Ok(GenerationRecord {
            generation: num("generation", cols[0])?,
            best_nodes: num("best_nodes", cols[1])?,
            mean_nodes: num("mean_nodes", cols[2])?,
            best_solved: num("best_solved", cols[3])?,
            mean_solved: num("mean_solved", cols[4])?,
            best_fitness: num("best_fitness", cols[5])?,
            mean_fitness: num("mean_fitness", cols[6])?,
            best_chromosome: cols[7].parse()?,
            population,
        })
    }
}

/// The last generation record in a log text, skipping `#` comments, the
/// CSV header and `{"header": ...}` objects.
pub fn last_record(log: &str) -> Result<GenerationRecord, LogParseError> {
    let line = log
        .lines()
        .map(str::trim).rfind(|l| !l.is_empty() && !l.starts_with('#') && !l.starts_with("generation,") && !l.starts_with("{\"header\""))
        .ok_or(LogParseError::Empty)?;
    GenerationRecord::parse(line)
}

#[derive(Clone, Debug)]
pub struct EvolutionOutcome {
    /// Records produced by this call, in generation order.
    pub log: Vec<GenerationRecord>,
    pub best: FitnessReport,
}

/// Runs generations `0..config.generations`, or continues after `resume`.
/// `observer` sees every record as soon as it exists.
pub fn run_evolution(
    config: &GaConfig,
    suite: &[EpdRecord],
    resume: Option<&GenerationRecord>,
    mut observer: impl FnMut(&GenerationRecord),
) -> EvolutionOutcome {
    config.validate().expect("invalid GA configuration");
    assert!(!suite.is_empty(), "evolution needs a non-empty suite");
    let mut cache: HashMap<Chromosome, (u64, usize)> = HashMap::new();
    if let Some(rec) = resume {
        assert_eq!(rec.population.len(), config.population_size, "resume population size differs");
        for o in &rec.population {
            cache.insert(o.chromosome, (o.total_nodes, o.solved));
        }
    }
    let mut evaluate = |pop: &[Chromosome]| -> Vec<FitnessReport> {
        let mut missing: Vec<Chromosome> = pop.iter().copied().filter(|c| !cache.contains_key(c)).collect();
        missing.sort();
        missing.dedup();
        for r in evaluate_population(&missing, suite, config.node_cap, config.jobs) {
            cache.insert(r.chromosome, (r.total_nodes, r.solved_count));
        }
        pop.iter()
            .map(|c| {
                let (nodes, solved) = cache[c];
                FitnessReport::new(*c, nodes, solved)
            })
            .collect()
    };

    let mut log = Vec::new();
    let (mut reports, start) = match resume {
        Some(rec) => (rec.reports(), rec.generation + 1),
        None => {
            let reports = evaluate(&initial_population(config));
            let rec = GenerationRecord::from_reports(0, &reports);
            observer(&rec);
            log.push(rec);
            (reports, 1)
        }
    };
    for generation in start..config.generations {
        let next = breed(&reports, config, generation);
        reports = evaluate(&next);
        let rec = GenerationRecord::from_reports(generation, &reports);
        observer(&rec);
        log.push(rec);
    }
    let best = reports[ranking(&reports)[0]];
    EvolutionOutcome { log, best }
}
