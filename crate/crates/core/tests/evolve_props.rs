//! Statistical checks of the GA operators and end-to-end properties of
//! small evolution runs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use selsearch::chess::EpdRecord;
use selsearch::evolve::*;
use selsearch::genome::{Chromosome, CHROMOSOME_BITS};
use selsearch::harness::bundled_suite;

const DRAWS: usize = 10_000;

fn report(bits: u128, nodes: u64) -> FitnessReport {
    FitnessReport::new(Chromosome::from_bits(bits), nodes, 0)
}

fn counts(reports: &[FitnessReport], seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0; reports.len()];
    for _ in 0..DRAWS {
        counts[roulette_index(reports, &mut rng)] += 1;
    }
    counts
}

/// |observed - n p| within three binomial standard deviations.
fn within_3_sigma(observed: usize, p: f64) -> bool {
    let n = DRAWS as f64;
    (observed as f64 - n * p).abs() <= 3.0 * (n * p * (1.0 - p)).sqrt()
}

#[test]
fn roulette_equal_fitness_is_uniform() {
    let reports: Vec<_> = (0..10).map(|i| report(i, 1234)).collect();
    for (i, &c) in counts(&reports, 1).iter().enumerate() {
        assert!(within_3_sigma(c, 0.1), "organism {i}: {c}");
    }
}

#[test]
fn roulette_nine_to_one() {
    // Fitness is 1/nodes, so 100 vs 900 nodes is a 9:1 ratio.
    let c = counts(&[report(1, 100), report(2, 900)], 2);
    assert!(within_3_sigma(c[0], 0.9), "{c:?}");
}

#[test]
fn roulette_totals_100_and_200() {
    let c = counts(&[report(1, 100), report(2, 200)], 3);
    assert!(within_3_sigma(c[0], 2.0 / 3.0), "{c:?}");
    assert!(within_3_sigma(c[1], 1.0 / 3.0), "{c:?}");
}

/// P(X < lo or X > hi) for X ~ Binomial(n, 1/2), by direct summation.
fn binomial_half_outside(n: u64, lo: u64, hi: u64) -> f64 {
    let mut coeff = 1.0f64;
    let mut total = 0.0;
    for k in 0..=n {
        if k < lo || k > hi {
            total += coeff;
        }
        coeff = coeff * (n - k) as f64 / (k + 1) as f64;
    }
    total / 2f64.powi(n as i32)
}

#[test]
fn crossover_of_complements_is_binomial() {
    let p_out = binomial_half_outside(70, 21, 49);
    assert!(p_out < 1e-3, "{p_out}");
    let zeros = Chromosome::ZERO;
    let ones = zeros.complement();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut outside = 0;
    let mut sum = 0u64;
    for _ in 0..DRAWS {
        let k = uniform_crossover(zeros, ones, 1.0, &mut rng).count_ones() as u64;
        sum += k;
        if !(21..=49).contains(&k) {
            outside += 1;
        }
    }
    // Expected about 5 outside; 20 would be a 6-sigma Poisson excess.
    assert!(outside < 20, "{outside} of {DRAWS} outside [21, 49] (expected {:.1})", p_out * DRAWS as f64);
    let mean = sum as f64 / DRAWS as f64;
    let sd = (70.0f64 * 0.25 / DRAWS as f64).sqrt();
    assert!((mean - 35.0).abs() < 3.0 * sd, "mean {mean}");
}

#[test]
fn crossover_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = Chromosome::from_bits(0x3_1234_5678_9ABC_DEF0);
    let b = a.complement();
    for _ in 0..100 {
        assert_eq!(uniform_crossover(a, a, 1.0, &mut rng), a);
        assert_eq!(uniform_crossover(a, b, 0.0, &mut rng), a);
        // Every child bit comes from one of the parents.
        let c = uniform_crossover(a, b, 1.0, &mut rng);
        assert_eq!(c.hamming(a) + c.hamming(b), CHROMOSOME_BITS as u32);
    }
}

#[test]
fn mutation_flip_rate() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let c = Chromosome::from_bits(0x2A_AAAA_5555_0000_FFFF);
    let flips: u64 = (0..DRAWS).map(|_| mutate(c, 0.05, &mut rng).hamming(c) as u64).sum();
    let mean = flips as f64 / DRAWS as f64;
    assert!((3.2..=3.8).contains(&mean), "mean flips {mean}");
    assert_eq!(mutate(c, 0.0, &mut rng), c);
    assert_eq!(mutate(c, 1.0, &mut rng), c.complement());
}

fn small_suite() -> Vec<EpdRecord> {
    bundled_suite().into_iter().take(6).collect()
}

fn small_config(generations: usize) -> GaConfig {
    GaConfig { generations, node_cap: 4_000, seed: 11, ..GaConfig::default() }
}

#[test]
fn unsolved_positions_cost_exactly_the_cap() {
    // Giving the queen for a knight is never the search's choice.
    let rec = EpdRecord::parse(
        "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - bm Qxf6; id \"blunder\";",
    )
    .unwrap();
    let c = Chromosome::from_bits(0x1_0000_0000_0000_0001);
    let r = fitness_of(c, &[rec.clone(), rec], 500_000);
    assert_eq!(r.total_nodes, 1_000_000);
    assert_eq!(r.solved_count, 0);
    assert_eq!(r.fitness, 1.0 / 1_000_000.0);
}

#[test]
fn one_generation_returns_the_fittest_random_organism() {
    let suite = small_suite();
    let config = small_config(1);
    let out = run_evolution(&config, &suite, None, |_| {});
    assert_eq!(out.log.len(), 1);
    let oracle = initial_population(&config)
        .into_iter()
        .map(|c| fitness_of(c, &suite, config.node_cap))
        .min_by_key(|r| r.total_nodes)
        .unwrap();
    assert_eq!(out.best.total_nodes, oracle.total_nodes);
    assert_eq!(out.log[0].best_nodes, oracle.total_nodes);
}

#[test]
fn elitism_keeps_the_best() {
    let suite = small_suite();
    let out = run_evolution(&small_config(6), &suite, None, |_| {});
    assert_eq!(out.log.len(), 6);
    for pair in out.log.windows(2) {
        assert!(pair[1].best_nodes <= pair[0].best_nodes);
        assert!(pair[1].best_fitness >= pair[0].best_fitness);
        assert!(pair[1].population.iter().any(|o| o.chromosome == pair[0].best_chromosome));
    }
    assert!(out.log.iter().all(|r| r.population.len() == 10));
}

#[test]
fn runs_are_reproducible_at_any_parallelism() {
    let suite = small_suite();
    let lines = |jobs: usize| -> Vec<String> {
        let config = GaConfig { jobs, ..small_config(2) };
        run_evolution(&config, &suite, None, |_| {}).log.iter().map(|r| r.to_csv_row()).collect()
    };
    let a = lines(1);
    assert_eq!(a, lines(1));
    assert_eq!(a, lines(3));

    let pop = initial_population(&small_config(1));
    assert_eq!(evaluate_population(&pop, &suite, 4_000, 1), evaluate_population(&pop, &suite, 4_000, 4));
}

#[test]
fn resume_continues_the_same_run() {
    let suite = small_suite();
    let full = run_evolution(&small_config(4), &suite, None, |_| {});
    let first = run_evolution(&small_config(2), &suite, None, |_| {});
    // Resume from the text form of the last log line.
    let log = format!("{}\n{}\n", GenerationRecord::csv_header(), first.log[1].to_csv_row());
    let last = last_record(&log).unwrap();
    assert_eq!(last, first.log[1]);
    let rest = run_evolution(&small_config(4), &suite, Some(&last), |_| {});
    let stitched: Vec<_> = first.log.iter().chain(&rest.log).map(|r| r.to_json()).collect();
    let straight: Vec<_> = full.log.iter().map(|r| r.to_json()).collect();
    assert_eq!(stitched, straight);
    assert_eq!(rest.best, full.best);
}
