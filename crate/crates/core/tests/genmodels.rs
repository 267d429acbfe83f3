mod common;

use std::collections::HashMap;

use coremix::genmodels::{
    crossing_prob, crossing_prob_exact, giant_constants, matchings_count, random_ordered_assignment, sample_cnm,
    sample_cnm_mindeg, sample_gnm, sample_gnp, sample_kernel_degrees, sample_pairing, DegreeSequence,
};
use coremix::multigraph::is_simple;
use coremix::rng::substream_seed;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

type Edges = Vec<(usize, usize)>;

/// Every count within `k` binomial standard deviations of `trials * p`.
fn assert_within_sigma(counts: &HashMap<Edges, u64>, expected: &HashMap<Edges, f64>, trials: u64, k: f64) {
    for (outcome, &p) in expected {
        let got = counts.get(outcome).copied().unwrap_or(0) as f64;
        let mean = trials as f64 * p;
        let sd = (trials as f64 * p * (1.0 - p)).sqrt();
        assert!((got - mean).abs() <= k * sd, "{outcome:?}: {got} vs {mean} ± {k}·{sd}");
    }
    for outcome in counts.keys() {
        assert!(expected.contains_key(outcome), "impossible outcome {outcome:?}");
    }
}

#[test]
fn gnp_mean_edge_count() {
    let n = 10_000;
    let p = 2.0 / n as f64;
    let seeds = 100;
    let total: usize = (0..seeds).map(|s| sample_gnp(n, p, s).unwrap().edge_count()).sum();
    let pairs = (n * (n - 1) / 2) as f64;
    let mean = total as f64 / seeds as f64;
    let sd = (pairs * p * (1.0 - p) / seeds as f64).sqrt();
    assert!((mean - pairs * p).abs() <= 3.0 * sd, "{mean} vs {}", pairs * p);
}

#[test]
fn gnm_is_uniform_on_six_vertices() {
    let trials = 60_000u64;
    let mut counts: HashMap<Edges, u64> = HashMap::new();
    for s in 0..trials {
        *counts.entry(sample_gnm(6, 3, s).unwrap().canonical_edges()).or_default() += 1;
    }
    assert_eq!(counts.len(), 455);
    let pairs: Vec<(usize, usize)> = (0..6).flat_map(|a| (a + 1..6).map(move |b| (a, b))).collect();
    let mut expected = HashMap::new();
    for i in 0..15 {
        for j in i + 1..15 {
            for k in j + 1..15 {
                let mut e = vec![pairs[i], pairs[j], pairs[k]];
                e.sort_unstable();
                expected.insert(e, 1.0 / 455.0);
            }
        }
    }
    assert_within_sigma(&counts, &expected, trials, 5.0);
}

#[test]
fn cnm_mean_loop_count() {
    let seeds = 200;
    let loops: usize = (0..seeds).map(|s| sample_cnm(1000, 1000, s).unwrap().loop_count()).sum();
    let mean = loops as f64 / seeds as f64;
    // loops ~ Binomial(1000, 1/1000)
    let sd = (1000.0 * 0.001 * 0.999 / seeds as f64).sqrt();
    assert!((mean - 1.0).abs() <= 3.0 * sd, "{mean}");
}

/// Multigraph law of `n^{2m}` equally likely endpoint functions, optionally
/// filtered.
fn endpoint_function_law(n: usize, m: usize, keep: impl Fn(&[usize]) -> bool) -> HashMap<Edges, f64> {
    let mut counts: HashMap<Edges, u64> = HashMap::new();
    let mut total = 0u64;
    let mut f = vec![0usize; 2 * m];
    loop {
        let mut deg = vec![0; n];
        for &x in &f {
            deg[x] += 1;
        }
        if keep(&deg) {
            let mut e: Edges = f.chunks(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
            e.sort_unstable();
            *counts.entry(e).or_default() += 1;
            total += 1;
        }
        let mut i = 0;
        while i < f.len() && f[i] == n - 1 {
            f[i] = 0;
            i += 1;
        }
        if i == f.len() {
            break;
        }
        f[i] += 1;
    }
    counts.into_iter().map(|(k, c)| (k, c as f64 / total as f64)).collect()
}

#[test]
fn cnm_mindeg_matches_enumeration() {
    let law = endpoint_function_law(3, 5, |d| d.iter().all(|&x| x >= 3));
    let trials = 100_000u64;
    let mut counts: HashMap<Edges, u64> = HashMap::new();
    for s in 0..trials {
        let g = sample_cnm_mindeg(3, 5, 3, s).unwrap();
        assert!(g.min_degree().unwrap() >= 3);
        *counts.entry(g.canonical_edges()).or_default() += 1;
    }
    assert_within_sigma(&counts, &law, trials, 5.0);
}

#[test]
fn cnm_restricted_to_simple_is_gnm() {
    let trials = 100_000u64;
    let mut from_cnm: HashMap<Edges, u64> = HashMap::new();
    let mut accepted = 0;
    let mut s = 0;
    while accepted < trials {
        let g = sample_cnm(4, 3, substream_seed(5, s)).unwrap();
        s += 1;
        if is_simple(&g) {
            *from_cnm.entry(g.canonical_edges()).or_default() += 1;
            accepted += 1;
        }
    }
    let mut from_gnm: HashMap<Edges, u64> = HashMap::new();
    for s in 0..trials {
        *from_gnm.entry(sample_gnm(4, 3, s).unwrap().canonical_edges()).or_default() += 1;
    }
    let uniform: HashMap<Edges, f64> = from_gnm.keys().map(|k| (k.clone(), 1.0 / 20.0)).collect();
    assert_eq!(uniform.len(), 20);
    assert_within_sigma(&from_cnm, &uniform, trials, 5.0);
    assert_within_sigma(&from_gnm, &uniform, trials, 5.0);
}

/// Multigraph law of a uniform perfect matching on cells of the given sizes.
fn pairing_law(d: &[usize]) -> HashMap<Edges, f64> {
    let cell: Vec<usize> = d.iter().enumerate().flat_map(|(v, &k)| std::iter::repeat_n(v, k)).collect();
    fn go(free: &mut Vec<bool>, cell: &[usize], acc: &mut Edges, out: &mut HashMap<Edges, u64>) {
        let Some(a) = free.iter().position(|&f| f) else {
            let mut e = acc.clone();
            e.sort_unstable();
            *out.entry(e).or_default() += 1;
            return;
        };
        free[a] = false;
        for b in a + 1..free.len() {
            if free[b] {
                free[b] = false;
                acc.push((cell[a].min(cell[b]), cell[a].max(cell[b])));
                go(free, cell, acc, out);
                acc.pop();
                free[b] = true;
            }
        }
        free[a] = true;
    }
    let mut out = HashMap::new();
    go(&mut vec![true; cell.len()], &cell, &mut Vec::new(), &mut out);
    let total: u64 = out.values().sum();
    out.into_iter().map(|(k, c)| (k, c as f64 / total as f64)).collect()
}

#[test]
fn pairing_triple_edge_fraction() {
    let law = pairing_law(&[3, 3]);
    let triple = vec![(0, 1); 3];
    assert!((law[&triple] - 6.0 / 15.0).abs() < 1e-12);
    let trials = 100_000;
    let hits = (0..trials)
        .filter(|&s| sample_pairing(&DegreeSequence(vec![3, 3]), s).unwrap().canonical_edges() == triple)
        .count();
    let p = 0.4;
    let sd = (trials as f64 * p * (1.0 - p)).sqrt();
    assert!((hits as f64 - trials as f64 * p).abs() <= 3.0 * sd, "{hits}");
}

#[test]
fn pairing_matches_configuration_model_given_degrees() {
    let d = [3usize, 3, 2];
    let matching_law = pairing_law(&d);
    let cnm_law = endpoint_function_law(3, 4, |deg| deg == d);
    assert_eq!(matching_law.len(), cnm_law.len());
    for (k, p) in &matching_law {
        assert!((p - cnm_law[k]).abs() < 1e-12, "{k:?}");
    }
    let trials = 50_000u64;
    let mut counts: HashMap<Edges, u64> = HashMap::new();
    for s in 0..trials {
        *counts
            .entry(sample_pairing(&DegreeSequence(d.to_vec()), s).unwrap().canonical_edges())
            .or_default() += 1;
    }
    assert_within_sigma(&counts, &matching_law, trials, 5.0);
}

#[test]
fn kernel_degrees_two_cells() {
    // 8 throws into 2 cells conditioned on both ≥ 3: P(d₁ = k) ∝ C(8, k)
    let mut expected: HashMap<Edges, f64> = HashMap::new();
    for (k, w) in [(3usize, 56.0), (4, 70.0), (5, 56.0)] {
        expected.insert(vec![(k, 8 - k)], w / 182.0);
    }
    let trials = 50_000u64;
    let mut counts: HashMap<Edges, u64> = HashMap::new();
    for s in 0..trials {
        let d = sample_kernel_degrees(2, 4, s).unwrap();
        *counts.entry(vec![(d.0[0], d.0[1])]).or_default() += 1;
    }
    assert_within_sigma(&counts, &expected, trials, 5.0);
    assert_eq!(sample_kernel_degrees(1, 7, 0).unwrap().0, vec![14]);
}

#[test]
fn ordered_assignment_is_uniform() {
    let trials = 60_000u64;
    let mut orders: HashMap<Edges, u64> = HashMap::new();
    for s in 0..trials {
        let l = random_ordered_assignment(1, 3, s).unwrap();
        *orders.entry(l[0].iter().map(|&x| (x, 0)).collect()).or_default() += 1;
    }
    let mut expected = HashMap::new();
    for p in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        expected.insert(p.iter().map(|&x| (x, 0)).collect::<Edges>(), 1.0 / 6.0);
    }
    assert_within_sigma(&orders, &expected, trials, 5.0);

    // two edges, two items: six equally likely placements
    let mut placements: HashMap<Edges, u64> = HashMap::new();
    for s in 0..trials {
        let l = random_ordered_assignment(2, 2, s).unwrap();
        let key: Edges = l.iter().map(|list| (list.len(), list.first().copied().unwrap_or(9))).collect();
        *placements.entry(key).or_default() += 1;
    }
    let expected: HashMap<Edges, f64> = [
        vec![(2, 0), (0, 9)],
        vec![(2, 1), (0, 9)],
        vec![(1, 0), (1, 1)],
        vec![(1, 1), (1, 0)],
        vec![(0, 9), (2, 0)],
        vec![(0, 9), (2, 1)],
    ]
    .into_iter()
    .map(|k| (k, 1.0 / 6.0))
    .collect();
    assert_within_sigma(&placements, &expected, trials, 5.0);
    assert!(random_ordered_assignment(3, 0, 1).unwrap().iter().all(Vec::is_empty));
}

#[test]
fn matchings_count_matches_enumeration() {
    for k in 0..=10 {
        assert_eq!(matchings_count(k), common::brute_matchings(k).into(), "k={k}");
    }
}

#[test]
fn crossing_law_matches_enumeration() {
    for m in 0..=5 {
        let total = common::brute_matchings(2 * m);
        for q in 0..=2 * m {
            let counts = common::brute_crossing_counts(m, q);
            for (t, &c) in counts.iter().enumerate() {
                let want = BigRational::new(BigInt::from(c), BigInt::from(total));
                assert_eq!(crossing_prob_exact(m, t, q), want, "m={m} t={t} q={q}");
            }
        }
    }
}

#[test]
fn crossing_law_sums_to_one() {
    for m in 0..=8 {
        for q in 0..=2 * m {
            let sum = (0..=q).fold(BigRational::zero(), |acc, t| acc + crossing_prob_exact(m, t, q));
            assert!(sum.is_one(), "m={m} q={q}");
            let float: f64 = (0..=q).map(|t| crossing_prob(m, t, q)).sum();
            assert!((float - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn giant_constants_grid() {
    let mut prev = 0.0;
    for i in 11..=100 {
        let c = i as f64 / 10.0;
        let k = giant_constants(c).unwrap();
        assert!((k.t * (-k.t).exp() - c * (-c).exp()).abs() < 1e-12);
        assert!(k.t > 0.0 && k.t < 1.0);
        assert!(k.b > prev, "b not increasing at c={c}");
        prev = k.b;
    }
    let k = giant_constants(1.5).unwrap();
    assert!((k.t - 0.6257).abs() < 1e-4 && (k.b - 0.5829).abs() < 1e-4);
}

proptest! {
    #[test]
    fn cnm_degree_sum(n in 1usize..50, m in 0usize..80, seed: u64) {
        let g = sample_cnm(n, m, seed).unwrap();
        prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * m);
    }

    #[test]
    fn pairing_realises_degrees(d in proptest::collection::vec(1usize..6, 1..12), seed: u64) {
        let mut d = d;
        if d.iter().sum::<usize>() % 2 == 1 {
            d[0] += 1;
        }
        let g = sample_pairing(&DegreeSequence(d.clone()), seed).unwrap();
        prop_assert_eq!(g.degrees(), d);
    }

    #[test]
    fn kernel_degrees_postconditions(n_k in 1usize..40, extra in 0usize..40, seed: u64) {
        let m_k = (3 * n_k).div_ceil(2) + extra;
        let d = sample_kernel_degrees(n_k, m_k, seed).unwrap();
        prop_assert_eq!(d.sum(), 2 * m_k as u64);
        prop_assert!(d.min().unwrap() >= 3);
    }

    #[test]
    fn samplers_are_deterministic(n in 2usize..60, seed: u64) {
        prop_assert_eq!(sample_gnm(n, n / 2, seed).unwrap(), sample_gnm(n, n / 2, seed).unwrap());
        prop_assert_eq!(sample_cnm(n, n, seed).unwrap(), sample_cnm(n, n, seed).unwrap());
    }
}
