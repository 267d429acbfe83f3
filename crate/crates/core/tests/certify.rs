mod common;

use coremix::certify::{
    check_AN, check_strong_core, cheeger_bounds_graph, cheeger_exact_graph, decorations, densest_subgraph,
    kernel_expansion_ratio, CheegerMethod,
};
use coremix::mixing::mixing_time_exact;
use coremix::multigraph::Multigraph;
use coremix::Error;
use num_rational::Ratio;
use proptest::prelude::*;

fn complete(n: usize) -> Multigraph {
    Multigraph::from_edges(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)))).unwrap()
}

fn cycle(n: usize) -> Multigraph {
    Multigraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[test]
fn exact_cheeger_matches_subset_enumeration() {
    for g in common::small_connected_corpus(300, 12, 1) {
        let res = cheeger_exact_graph(&g).unwrap();
        let want = ratio_f64(common::brute_cheeger(&g));
        assert!(res.exact && res.method == CheegerMethod::Exact);
        assert_eq!(res.lower, want, "{:?}", g.edges());
        assert_eq!(res.upper, want);
    }
}

#[test]
fn spectral_bounds_sandwich_the_exact_value() {
    for g in common::small_connected_corpus(1000, 24, 2) {
        let exact = cheeger_exact_graph(&g).unwrap().lower;
        let b = cheeger_bounds_graph(&g).unwrap();
        assert!(!b.exact);
        assert!(b.lower <= exact + 1e-12, "lower {} > Φ {exact} on {:?}", b.lower, g.edges());
        assert!(exact <= b.upper + 1e-12, "Φ {exact} > upper {}", b.upper);
        let deg: usize = b.witness.iter().map(|&v| g.deg(v)).sum();
        assert!(deg > 0 && deg <= g.edge_count());
    }
}

#[test]
fn spectral_reference_graphs() {
    for n in [8, 16, 32] {
        assert!(cheeger_bounds_graph(&complete(n)).unwrap().lower > 0.2);
    }
    let path = Multigraph::from_edges(50, (0..49).map(|i| (i, i + 1))).unwrap();
    assert!(cheeger_bounds_graph(&path).unwrap().upper <= 0.05);
    let two = Multigraph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
    assert!(matches!(cheeger_bounds_graph(&two), Err(Error::Disconnected)));
}

#[test]
fn densest_subgraph_matches_subset_enumeration() {
    for g in common::small_connected_corpus(1000, 12, 3) {
        let d = densest_subgraph(&g).unwrap();
        assert_eq!(d.ratio(), common::brute_densest(&g), "{:?}", g.edges());
        let inside = |v: usize| d.witness.binary_search(&v).is_ok();
        let e = g.edges().iter().filter(|&&(u, v)| inside(u) && inside(v)).count();
        assert_eq!(Ratio::new(e as u64, d.witness.len() as u64), d.ratio());
    }
}

#[test]
fn expansion_ratio_examples() {
    let k4 = complete(4);
    assert_eq!(kernel_expansion_ratio(&k4, &[0]).unwrap(), Ratio::new(1, 1));
    assert_eq!(kernel_expansion_ratio(&k4, &[0, 1]).unwrap(), Ratio::new(2, 3));
    assert!(kernel_expansion_ratio(&k4, &[0, 1, 2]).is_err());
    let split = Multigraph::from_edges(4, [(0, 1), (0, 1), (2, 3), (2, 3)]).unwrap();
    assert_eq!(kernel_expansion_ratio(&split, &[0, 1]).unwrap(), Ratio::new(0, 1));
}

#[test]
fn decoration_examples() {
    let g = Multigraph::from_edges(4, [(0, 1), (1, 2), (2, 0), (0, 3)]).unwrap();
    let r = decorations(&g, &[0, 1, 2]).unwrap();
    assert_eq!(r.components, vec![vec![3]]);
    assert_eq!(r.eprime, vec![1]);
    assert_eq!(r.attach_count, vec![1, 0, 0]);
    let all = decorations(&g, &[0, 1, 2, 3]).unwrap();
    assert!(all.components.is_empty());
    assert!(all.attach_count.iter().all(|&c| c == 0));
}

#[test]
fn decorations_partition_the_edges() {
    for (i, g) in common::small_connected_corpus(1000, 20, 4).into_iter().enumerate() {
        let n = g.vertex_count();
        let b: Vec<usize> = (0..n).filter(|&v| (v * 7 + i) % 3 != 0).collect();
        let r = decorations(&g, &b).unwrap();
        let mut in_b = vec![false; n];
        for &v in &b {
            in_b[v] = true;
        }
        let inside = g.edges().iter().filter(|&&(u, v)| in_b[u] && in_b[v]).count();
        assert_eq!(r.eprime.iter().sum::<usize>() + inside, g.edge_count());
        for (k, comp) in r.components.iter().enumerate() {
            assert_eq!(r.internal_edges[k] + r.boundary_edges[k], r.eprime[k]);
            assert!(comp.iter().all(|&v| !in_b[v]));
        }
        for (j, &v) in r.b.iter().enumerate() {
            let mut touching: Vec<usize> = g
                .neighbors(v)
                .filter(|&w| !in_b[w])
                .map(|w| r.components.iter().position(|c| c.binary_search(&w).is_ok()).unwrap())
                .collect();
            touching.sort_unstable();
            touching.dedup();
            assert_eq!(r.attach_count[j], touching.len());
        }
    }
}

#[test]
fn an_certificate_examples() {
    let c4 = cycle(4);
    let all = [0, 1, 2, 3];
    assert!(check_AN(&c4, &all, 0.4).unwrap().overall);
    let fail = check_AN(&c4, &all, 0.6).unwrap();
    assert!(!fail.overall && !fail.condition1.pass);
    assert!(fail.condition2.pass && fail.condition3.pass);

    // a decoration attached twice to vertex 0 at α = 1
    let mut g = complete(4);
    let x = g.add_vertex();
    let y = g.add_vertex();
    g.add_edge(0, x).unwrap();
    g.add_edge(0, y).unwrap();
    let cert = check_AN(&g, &all, 1.0).unwrap();
    assert!(!cert.condition3.pass);
    assert_eq!(cert.condition3.violating_vertex, Some(0));

    let split = Multigraph::from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]).unwrap();
    let disc = check_AN(&split, &[0, 1, 4], 0.1).unwrap();
    assert!(!disc.condition1.pass);
    assert!(disc.condition1.reason.unwrap().contains("disconnected"));
    assert!(check_AN(&c4, &all, 0.0).is_err());
}

#[test]
fn strong_core_examples() {
    let mut g = complete(4);
    for v in 0..4 {
        let p = g.add_vertex();
        g.add_edge(v, p).unwrap();
    }
    let cert = check_strong_core(&g, 10, 0.2, 1).unwrap();
    assert!(cert.certificate.overall);
    assert_eq!(cert.core, vec![0, 1, 2, 3]);
    assert!(matches!(check_strong_core(&cycle(7), 10, 0.2, 1), Err(Error::EmptyReducedCore)));
}

#[test]
fn mixing_time_is_bounded_by_conductance() {
    // H ≤ C ln E / Φ² with one constant C = 20 fixed in advance
    let mut checked = 0;
    for g in common::small_connected_corpus(10_000, 16, 5) {
        if g.edge_count() < 2 {
            continue; // ln 1 = 0
        }
        let phi = cheeger_exact_graph(&g).unwrap().lower;
        let h = mixing_time_exact(&g).unwrap();
        let bound = 20.0 * (g.edge_count() as f64).ln() / (phi * phi);
        assert!(h <= bound, "H = {h} > {bound} on {:?}", g.edges());
        checked += 1;
    }
    assert!(checked > 9000);
}

proptest! {
    #[test]
    fn passing_persists_at_smaller_alpha(seed in 0u64..5000, alpha in 0.05f64..1.0, shrink in 0.1f64..1.0) {
        let g = common::small_connected_corpus(1, 14, seed).pop().unwrap();
        let n = g.vertex_count();
        let b: Vec<usize> = (0..n).filter(|&v| v % 4 != 3).collect();
        let cert = check_AN(&g, &b, alpha).unwrap();
        prop_assume!(cert.overall);
        prop_assert_eq!(cert.condition1.method, Some(CheegerMethod::Exact));
        prop_assert!(check_AN(&g, &b, alpha * shrink).unwrap().overall);
    }
}
