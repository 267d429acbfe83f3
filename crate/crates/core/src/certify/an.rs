use num_rational::Ratio;
use serde::Serialize;

use super::cheeger::{cheeger_exact, CheegerMethod, MAX_EXACT_CHEEGER_STATES};
use super::spectral::cheeger_bounds;
use crate::error::{Error, Result};
use crate::mixing::ReversibleChain;
use crate::multigraph::Multigraph;
use crate::strip::{severe_strip, StripParams, StripTrace};

/// `e(S)/d(S)`: edges with exactly one end in `S` over the degree sum of `S`.
pub fn kernel_expansion_ratio(g: &Multigraph, s: &[usize]) -> Result<Ratio<u64>> {
    let n = g.vertex_count();
    if s.is_empty() {
        return Err(Error::InvalidParameter("S must be nonempty".into()));
    }
    let mut in_s = vec![false; n];
    for &v in s {
        if v >= n {
            return Err(Error::InvalidVertex { vertex: v, vertex_count: n });
        }
        in_s[v] = true;
    }
    let d: u64 = (0..n).filter(|&v| in_s[v]).map(|v| g.deg(v) as u64).sum();
    if d > g.edge_count() as u64 {
        return Err(Error::InvalidParameter(format!(
            "d(S) = {d} exceeds |E| = {}",
            g.edge_count()
        )));
    }
    if d == 0 {
        return Err(Error::InvalidParameter("d(S) = 0".into()));
    }
    let e = g.edges().iter().filter(|&&(u, v)| in_s[u] != in_s[v]).count() as u64;
    Ok(Ratio::new(e, d))
}

/// Components `D_i` of `G - B` and how they hang off `B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecorationReport {
    /// Vertices of each `D_i`, increasing.
    pub components: Vec<Vec<usize>>,
    pub internal_edges: Vec<usize>,
    pub boundary_edges: Vec<usize>,
    /// `E'(D_i)`: edges of `G` with at least one end in `D_i`.
    pub eprime: Vec<usize>,
    /// Vertices of `B`, increasing.
    pub b: Vec<usize>,
    /// Number of distinct `D_i` adjacent to each vertex of `b`.
    pub attach_count: Vec<usize>,
}

pub fn decorations(g: &Multigraph, b: &[usize]) -> Result<DecorationReport> {
    let n = g.vertex_count();
    let mut in_b = vec![false; n];
    for &v in b {
        if v >= n {
            return Err(Error::InvalidVertex { vertex: v, vertex_count: n });
        }
        in_b[v] = true;
    }
    let mut comp = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if in_b[s] || comp[s] != usize::MAX {
            continue;
        }
        let id = components.len();
        comp[s] = id;
        let mut list = vec![s];
        let mut head = 0;
        while head < list.len() {
            let v = list[head];
            head += 1;
            for w in g.neighbors(v) {
                if !in_b[w] && comp[w] == usize::MAX {
                    comp[w] = id;
                    list.push(w);
                }
            }
        }
        list.sort_unstable();
        components.push(list);
    }
    let k = components.len();
    let mut internal_edges = vec![0; k];
    let mut boundary_edges = vec![0; k];
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in g.edges() {
        match (in_b[u], in_b[v]) {
            (true, true) => {}
            (false, false) => internal_edges[comp[u]] += 1,
            (true, false) => {
                boundary_edges[comp[v]] += 1;
                touching[u].push(comp[v]);
            }
            (false, true) => {
                boundary_edges[comp[u]] += 1;
                touching[v].push(comp[u]);
            }
        }
    }
    let eprime = internal_edges.iter().zip(&boundary_edges).map(|(a, b)| a + b).collect();
    let b_sorted: Vec<usize> = (0..n).filter(|&v| in_b[v]).collect();
    let attach_count = b_sorted
        .iter()
        .map(|&v| {
            let t = &mut touching[v];
            t.sort_unstable();
            t.dedup();
            t.len()
        })
        .collect();
    Ok(DecorationReport {
        components,
        internal_edges,
        boundary_edges,
        eprime,
        b: b_sorted,
        attach_count,
    })
}

/// Expansion condition: `Φ(B) ≥ α` for the walk on the subgraph induced by `B`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionCheck {
    pub pass: bool,
    pub method: Option<CheegerMethod>,
    pub phi_lower: Option<f64>,
    pub phi_upper: Option<f64>,
    pub reason: Option<String>,
}

/// Tail condition: `#{i : E'(D_i) ≥ λ} ≤ E(G) e^{-λα}` at every realised
/// `λ`, and no `E'(D_i)` above `(1/α) ln E(G)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailCheck {
    pub pass: bool,
    pub violating_lambda: Option<usize>,
    pub max_eprime: usize,
    pub cap: f64,
    pub components: usize,
}

/// Attachment condition: each `B` vertex meets at most `1/α` components.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttachCheck {
    pub pass: bool,
    pub violating_vertex: Option<usize>,
    pub max_attach: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ANCertificate {
    pub alpha: f64,
    pub b_vertices: usize,
    pub b_edges: usize,
    pub graph_edges: usize,
    pub condition1: ExpansionCheck,
    pub condition2: TailCheck,
    pub condition3: AttachCheck,
    pub overall: bool,
}

fn expansion_check(g: &Multigraph, b: &[usize], alpha: f64) -> Result<(ExpansionCheck, usize)> {
    let mut keep = vec![false; g.vertex_count()];
    for &v in b {
        keep[v] = true;
    }
    let sub = g.induced_subgraph(&keep).graph;
    let b_edges = sub.edge_count();
    let fail = |reason: &str| ExpansionCheck {
        pass: false,
        method: None,
        phi_lower: None,
        phi_upper: None,
        reason: Some(reason.to_string()),
    };
    if sub.vertex_count() == 0 {
        return Ok((fail("B is empty"), b_edges));
    }
    if !sub.is_connected() {
        return Ok((fail("B is disconnected"), b_edges));
    }
    if sub.vertex_count() < 2 {
        return Ok((fail("B has a single vertex, so Φ(B) is undefined"), b_edges));
    }
    let chain = ReversibleChain::from_graph(&sub);
    let res = if sub.vertex_count() <= MAX_EXACT_CHEEGER_STATES {
        cheeger_exact(&chain)
    } else {
        cheeger_bounds(&chain)
    };
    let res = match res {
        Ok(r) => r,
        Err(Error::NotConverged(msg)) => return Ok((fail(&format!("eigensolver: {msg}")), b_edges)),
        Err(e) => return Err(e),
    };
    let pass = res.lower >= alpha;
    Ok((
        ExpansionCheck {
            pass,
            method: Some(res.method),
            phi_lower: Some(res.lower),
            phi_upper: Some(res.upper),
            reason: (!pass).then(|| format!("Φ(B) lower bound {} is below α", res.lower)),
        },
        b_edges,
    ))
}

fn tail_check(report: &DecorationReport, graph_edges: usize, alpha: f64) -> TailCheck {
    let e_g = graph_edges as f64;
    let cap = e_g.ln() / alpha;
    let mut sorted = report.eprime.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let max_eprime = sorted.first().copied().unwrap_or(0);
    let mut violating = None;
    if max_eprime as f64 > cap {
        violating = Some(max_eprime);
    } else {
        // sorted decreasingly: #{E' ≥ sorted[i]} is the last index holding that value, plus one
        let mut i = 0;
        while i < sorted.len() {
            let lambda = sorted[i];
            let mut j = i;
            while j + 1 < sorted.len() && sorted[j + 1] == lambda {
                j += 1;
            }
            let count = (j + 1) as f64;
            if count > e_g * (-(lambda as f64) * alpha).exp() {
                violating = Some(lambda);
                break;
            }
            i = j + 1;
        }
    }
    TailCheck {
        pass: violating.is_none(),
        violating_lambda: violating,
        max_eprime,
        cap,
        components: report.eprime.len(),
    }
}

fn attach_check(report: &DecorationReport, alpha: f64) -> AttachCheck {
    let limit = 1.0 / alpha;
    let max_attach = report.attach_count.iter().copied().max().unwrap_or(0);
    let violating_vertex = report
        .b
        .iter()
        .zip(&report.attach_count)
        .find(|&(_, &c)| c as f64 > limit)
        .map(|(&v, _)| v);
    AttachCheck {
        pass: violating_vertex.is_none(),
        violating_vertex,
        max_attach,
    }
}

/// Checks the three α-AN conditions for `G` with core vertex set `B`; the
/// expander is the subgraph of `G` induced by `B`.
#[allow(non_snake_case)]
pub fn check_AN(g: &Multigraph, b: &[usize], alpha: f64) -> Result<ANCertificate> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let report = decorations(g, b)?;
    let (condition1, b_edges) = expansion_check(g, &report.b, alpha)?;
    let condition2 = tail_check(&report, g.edge_count(), alpha);
    let condition3 = attach_check(&report, alpha);
    let overall = condition1.pass && condition2.pass && condition3.pass;
    Ok(ANCertificate {
        alpha,
        b_vertices: report.b.len(),
        b_edges,
        graph_edges: g.edge_count(),
        condition1,
        condition2,
        condition3,
        overall,
    })
}

/// Summary of the strip that produced `B`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StripSummary {
    pub n_param: usize,
    pub seed: u64,
    pub steps: usize,
    pub kernel_vertices: usize,
    pub kernel_edges: usize,
    pub initial_red_edges: usize,
    pub initial_red_vertices: usize,
    pub reduced_vertices: usize,
    pub reduced_edges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrongCoreCertificate {
    pub certificate: ANCertificate,
    pub strip: StripSummary,
    /// Vertices of `R_N(G)` in `G`.
    pub core: Vec<usize>,
}

/// Strips `G` with threshold `N`, then certifies `B = V(R_N(G))`.
pub fn check_strong_core(g: &Multigraph, n_param: usize, alpha: f64, seed: u64) -> Result<StrongCoreCertificate> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let (core, trace): (_, StripTrace) = severe_strip(g, &StripParams::new(n_param, seed))?;
    if core.graph.vertex_count() == 0 {
        return Err(Error::EmptyReducedCore);
    }
    let certificate = check_AN(g, &core.vertex_map, alpha)?;
    Ok(StrongCoreCertificate {
        certificate,
        strip: StripSummary {
            n_param,
            seed,
            steps: trace.step_count,
            kernel_vertices: trace.kernel_vertices,
            kernel_edges: trace.kernel_edges,
            initial_red_edges: trace.initial_red_edges,
            initial_red_vertices: trace.initial_red_vertices,
            reduced_vertices: core.graph.vertex_count(),
            reduced_edges: core.graph.edge_count(),
        },
        core: core.vertex_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Multigraph {
        Multigraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn expansion_ratio_examples() {
        let g = k4();
        assert_eq!(kernel_expansion_ratio(&g, &[0]).unwrap(), Ratio::new(1, 1));
        assert_eq!(kernel_expansion_ratio(&g, &[0, 1]).unwrap(), Ratio::new(2, 3));
        assert!(kernel_expansion_ratio(&g, &[0, 1, 2]).is_err());
        let two = Multigraph::from_edges(4, [(0, 1), (0, 1), (2, 3), (2, 3)]).unwrap();
        assert_eq!(kernel_expansion_ratio(&two, &[0, 1]).unwrap(), Ratio::new(0, 1));
    }

    #[test]
    fn triangle_with_pendant() {
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
    fn cycle_certificates() {
        let c4 = Multigraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(check_AN(&c4, &[0, 1, 2, 3], 0.4).unwrap().overall);
        let c = check_AN(&c4, &[0, 1, 2, 3], 0.6).unwrap();
        assert!(!c.condition1.pass);
        assert!(c.condition2.pass && c.condition3.pass);
    }

    #[test]
    fn double_attachment_fails_at_alpha_one() {
        let mut g = k4();
        for _ in 0..2 {
            let v = g.add_vertex();
            g.add_edge(0, v).unwrap();
        }
        let c = check_AN(&g, &[0, 1, 2, 3], 1.0).unwrap();
        assert!(!c.condition3.pass);
        assert_eq!(c.condition3.violating_vertex, Some(0));
    }

    #[test]
    fn k4_with_pendants_is_a_strong_core() {
        let mut g = k4();
        for root in 0..4 {
            let a = g.add_vertex();
            g.add_edge(root, a).unwrap();
            if root % 2 == 0 {
                let b = g.add_vertex();
                g.add_edge(a, b).unwrap();
            }
        }
        let s = check_strong_core(&g, 10, 0.2, 1).unwrap();
        assert!(s.certificate.overall, "{:?}", s.certificate);
        assert_eq!(s.core, vec![0, 1, 2, 3]);
        let c5 = Multigraph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert!(matches!(check_strong_core(&c5, 10, 0.2, 1), Err(Error::EmptyReducedCore)));
    }
}
