mod common;

use coremix::mixing::{
    access_time, chain_mixing_time, hitting_times, induced_chain, mixing_time_exact, simulate_walk, stationary,
    uniform_mixing_time, ChainSolve, ReversibleChain,
};
use coremix::multigraph::Multigraph;
use coremix::Error;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn point(n: usize, i: usize) -> Vec<f64> {
    let mut x = vec![0.0; n];
    x[i] = 1.0;
    x
}

#[test]
fn reference_mixing_times() {
    let k4 = Multigraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    assert!(close(mixing_time_exact(&k4).unwrap(), 0.75, 1e-12));
    let p3 = Multigraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
    assert!(close(mixing_time_exact(&p3).unwrap(), 1.5, 1e-12));
    let k2 = Multigraph::from_edges(2, [(0, 1)]).unwrap();
    assert!(close(mixing_time_exact(&k2).unwrap(), 0.5, 1e-12));
    let two = Multigraph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
    assert!(matches!(mixing_time_exact(&two), Err(Error::Disconnected)));
}

#[test]
fn hitting_times_match_direct_solves() {
    for g in common::small_connected_corpus(300, 20, 7) {
        let h = hitting_times(&g).unwrap();
        let want = common::direct_hitting(&common::transition_matrix(&g));
        for (i, row) in want.iter().enumerate() {
            for (j, &w) in row.iter().enumerate() {
                assert!(close(h.get(i, j), w, 1e-8), "h[{i}][{j}] = {} vs {w}", h.get(i, j));
            }
        }
        let pi = stationary(&g).unwrap();
        let solve = ChainSolve::from_graph(&g).unwrap();
        for j in 0..g.vertex_count() {
            assert!(close(solve.return_time(j), 1.0 / pi[j], 1e-8));
        }
    }
}

#[test]
fn mixing_time_matches_filling_rule() {
    for g in common::small_connected_corpus(200, 10, 8) {
        let n = g.vertex_count();
        let p = common::transition_matrix(&g);
        let pi = stationary(&g).unwrap();
        let want = (0..n).map(|i| common::filling_rule_length(&p, &point(n, i), &pi)).fold(0.0, f64::max);
        let got = mixing_time_exact(&g).unwrap();
        assert!(close(got, want, 1e-7), "{got} vs {want} on {:?}", g.edges());
    }
}

fn random_distribution(n: usize, seed: u64) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|i| ((seed.wrapping_mul(2654435761) >> (i % 40)) % 7) as f64).collect();
    let s: f64 = raw.iter().sum();
    if s == 0.0 {
        return point(n, 0);
    }
    raw.into_iter().map(|x| x / s).collect()
}

#[test]
fn access_time_matches_filling_rule_on_three_states() {
    for seed in 0..300u64 {
        let w = |k: u64| 0.1 + ((seed >> k) % 5) as f64;
        let list = [
            (0, 0, w(0) * ((seed % 2) as f64)),
            (0, 1, w(3)),
            (1, 2, w(6)),
            (0, 2, w(9) * ((seed / 3 % 2) as f64)),
            (2, 2, w(12)),
        ];
        let chain = ReversibleChain::from_weights(3, list).unwrap();
        let p = DMatrix::from_fn(3, 3, |i, j| chain.transition(i, j));
        let solve = ChainSolve::new(chain).unwrap();
        let sigma = random_distribution(3, seed);
        let tau = random_distribution(3, seed + 1000);
        let got = access_time(&sigma, &tau, &solve.hitting).unwrap();
        let want = common::filling_rule_length(&p, &sigma, &tau);
        assert!(close(got, want, 1e-7), "seed {seed}: {got} vs {want}");
    }
}

#[test]
fn access_time_rejects_bad_distributions() {
    let g = Multigraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
    let h = hitting_times(&g).unwrap();
    assert!(access_time(&[0.5, 0.5], &[1.0, 0.0, 0.0], &h).is_err());
    assert!(access_time(&[0.5, 0.6, 0.0], &[1.0, 0.0, 0.0], &h).is_err());
    assert!(access_time(&[1.5, -0.5, 0.0], &[1.0, 0.0, 0.0], &h).is_err());
    assert_eq!(access_time(&[0.0, 1.0, 0.0], &[0.0, 1.0, 0.0], &h).unwrap(), 0.0);
}

/// First-return law on `B`, computed by absorbing on all of `V - B` at once.
fn first_return(g: &Multigraph, b: &[usize]) -> Vec<Vec<f64>> {
    let n = g.vertex_count();
    let p = common::transition_matrix(g);
    let outside: Vec<usize> = (0..n).filter(|v| !b.contains(v)).collect();
    let k = outside.len();
    let mut absorb = vec![vec![0.0; b.len()]; n];
    if k > 0 {
        let a = DMatrix::from_fn(k, k, |r, c| if r == c { 1.0 } else { 0.0 } - p[(outside[r], outside[c])]);
        let lu = a.lu();
        for (col, &t) in b.iter().enumerate() {
            let rhs = DVector::from_fn(k, |r, _| p[(outside[r], t)]);
            let x = lu.solve(&rhs).unwrap();
            for (r, &d) in outside.iter().enumerate() {
                absorb[d][col] = x[r];
            }
        }
    }
    b.iter()
        .map(|&a| {
            (0..b.len())
                .map(|col| p[(a, b[col])] + outside.iter().map(|&d| p[(a, d)] * absorb[d][col]).sum::<f64>())
                .collect()
        })
        .collect()
}

#[test]
fn induced_chain_matches_absorption_and_is_symmetric() {
    for (i, g) in common::small_connected_corpus(300, 16, 9).into_iter().enumerate() {
        let n = g.vertex_count();
        let b: Vec<usize> = (0..n).filter(|&v| (v + i) % 3 != 1).collect();
        if b.is_empty() {
            continue;
        }
        let ic = induced_chain(&g, &b).unwrap();
        assert_eq!(ic.states, b);
        let want = first_return(&g, &b);
        for a in 0..b.len() {
            assert!(close(ic.q[a].iter().sum(), 1.0, 1e-9));
            for c in 0..b.len() {
                assert!(close(ic.q[a][c], want[a][c], 1e-8));
            }
        }
        assert!(ic.symmetry_defect() < 1e-9);
        // the watched walk keeps π restricted to B, renormalised
        let pi = stationary(&g).unwrap();
        let mass: f64 = b.iter().map(|&v| pi[v]).sum();
        let sub = ic.chain().stationary().unwrap();
        for (a, &v) in b.iter().enumerate() {
            assert!(close(sub[a], pi[v] / mass, 1e-9));
        }
    }
}

#[test]
fn induced_chain_on_all_vertices_is_the_walk() {
    let g = Multigraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 1)]).unwrap();
    let ic = induced_chain(&g, &[0, 1, 2, 3]).unwrap();
    let a = chain_mixing_time(&ic.chain()).unwrap().value;
    assert!(close(a, mixing_time_exact(&g).unwrap(), 1e-12));
}

/// Least `t` with every start's averaged law within `eps` of `π`, by dense powers.
fn uniform_oracle(g: &Multigraph, eps: f64) -> usize {
    let p = common::transition_matrix(g);
    let n = g.vertex_count();
    let pi = stationary(g).unwrap();
    let mut power = DMatrix::<f64>::identity(n, n);
    let mut acc = DMatrix::<f64>::zeros(n, n);
    for t in 1..100_000 {
        acc += &power;
        power = &power * &p;
        let worst = (0..n)
            .map(|v| (0..n).map(|j| (acc[(v, j)] / t as f64 - pi[j]).abs()).sum::<f64>())
            .fold(0.0, f64::max);
        if worst <= eps {
            return t;
        }
    }
    panic!("no horizon found");
}

#[test]
fn uniform_mixing_matches_dense_powers() {
    for g in common::small_connected_corpus(60, 12, 10) {
        for eps in [0.5, 0.25, 0.1] {
            assert_eq!(uniform_mixing_time(&g, eps).unwrap(), uniform_oracle(&g, eps), "{:?}", g.edges());
        }
    }
    let k2 = Multigraph::from_edges(2, [(0, 1)]).unwrap();
    assert!(uniform_mixing_time(&k2, 0.0).is_err());
    assert!(uniform_mixing_time(&k2, 2.0).is_err());
}

#[test]
fn walk_visits_match_stationary_law() {
    let g = Multigraph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2), (3, 3)]).unwrap();
    let steps = 200_000;
    let w = simulate_walk(&g, 0, steps, &[0], 5).unwrap();
    let pi = stationary(&g).unwrap();
    let visits = w.trajectory.iter().filter(|&&v| v == 0).count() as f64 / (steps + 1) as f64;
    assert!((visits - pi[0]).abs() < 0.01);
    let gaps = w.gaps();
    let mean_gap = gaps.iter().sum::<usize>() as f64 / gaps.len() as f64;
    assert!(close(mean_gap, 1.0 / pi[0], 0.03));
    assert!(simulate_walk(&g, 9, 10, &[], 1).is_err());
}

proptest! {
    #[test]
    fn walk_is_deterministic_in_seed(seed: u64, start in 0usize..5, steps in 0usize..300) {
        let g = Multigraph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 1)]).unwrap();
        let a = simulate_walk(&g, start, steps, &[1, 3], seed).unwrap();
        prop_assert_eq!(&a, &simulate_walk(&g, start, steps, &[1, 3], seed).unwrap());
        prop_assert_eq!(a.trajectory.len(), steps + 1);
        prop_assert_eq!(a.trajectory[0], start);
    }

    #[test]
    fn mixing_time_bounds_every_point_mass(s in 0u64..2000) {
        let g = common::small_connected_corpus(1, 12, s).pop().unwrap();
        let solve = ChainSolve::from_graph(&g).unwrap();
        let n = g.vertex_count();
        let h = mixing_time_exact(&g).unwrap();
        for i in 0..n {
            let a = access_time(&point(n, i), &solve.pi, &solve.hitting).unwrap();
            prop_assert!(a <= h + 1e-9);
        }
    }
}
