use rand::seq::SliceRandom;
use rand::Rng as _;
use rand_distr::{Distribution, Geometric, Poisson};
use serde::{Deserialize, Serialize};

use super::record::ZLaw;
use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoalesceParams {
    pub n: usize,
    /// Fraction of vertices initially marked.
    pub delta: f64,
    /// `E[Z]`, below 1/2.
    pub z_mean: f64,
    pub z_law: ZLaw,
    /// Mean size of the initial components, which are paths of marked
    /// vertices with `1 + Geometric` sizes.
    pub initial_mean: f64,
}

impl CoalesceParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(0.0..1.0).contains(&self.delta) {
            return bad(format!("delta must lie in [0, 1), got {}", self.delta));
        }
        if !(0.0..0.5).contains(&self.z_mean) {
            return bad(format!("E[Z] must lie in [0, 1/2), got {}", self.z_mean));
        }
        if !(self.initial_mean >= 1.0) {
            return bad(format!("initial component mean must be at least 1, got {}", self.initial_mean));
        }
        if let ZLaw::TruncatedPoisson { cap } = self.z_law {
            if cap == 0 && self.z_mean > 0.0 {
                return bad("a Poisson law truncated at 0 has mean 0".into());
            }
        }
        Ok(())
    }
}

/// Result of one run of the two-stage process.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoalesceOutcome {
    pub marked: usize,
    /// Sizes of the initial components of `F_n` (marked vertices only).
    pub initial_sizes: Vec<usize>,
    /// Sizes of the nontrivial components of the final graph, decreasing.
    pub final_sizes: Vec<usize>,
    pub fresh_vertices: usize,
    pub identifications: usize,
    pub nontrivial_vertices: usize,
}

impl CoalesceOutcome {
    pub fn nontrivial_fraction(&self, n: usize) -> f64 {
        self.nontrivial_vertices as f64 / n as f64
    }
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new() -> Self {
        UnionFind {
            parent: Vec::new(),
            size: Vec::new(),
        }
    }

    fn push(&mut self) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        self.size.push(1);
        id
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

enum ZSampler {
    Zero,
    Poisson(Poisson<f64>, usize),
    Geometric(Geometric),
}

impl ZSampler {
    fn new(mean: f64, law: ZLaw) -> Result<Self> {
        if mean == 0.0 {
            return Ok(ZSampler::Zero);
        }
        let err = |e: String| Error::InvalidParameter(format!("Z law: {e}"));
        Ok(match law {
            ZLaw::TruncatedPoisson { cap } => ZSampler::Poisson(Poisson::new(mean).map_err(|e| err(e.to_string()))?, cap),
            ZLaw::Geometric => ZSampler::Geometric(Geometric::new(1.0 / (1.0 + mean)).map_err(|e| err(e.to_string()))?),
        })
    }

    fn sample(&self, rng: &mut Rng) -> usize {
        match self {
            ZSampler::Zero => 0,
            ZSampler::Poisson(d, cap) => loop {
                let k = d.sample(rng) as usize;
                if k <= *cap {
                    return k;
                }
            },
            ZSampler::Geometric(d) => d.sample(rng) as usize,
        }
    }
}

/// The coalescing process run as growth then identification: each marked
/// vertex grows a Galton–Watson tree with offspring law `Z`; then, taking the
/// marked vertices in random order and each tree outward from its root, a
/// child is identified with a uniformly chosen previously processed vertex with
/// probability `k/n` (`k` processed so far), in which case the subtree above it
/// is pruned, and otherwise becomes a fresh vertex.
pub fn simulate_coalesce(params: &CoalesceParams, seed: u64) -> Result<CoalesceOutcome> {
    params.validate()?;
    let n = params.n;
    let mut rng = rng_from_seed(seed);
    let z = ZSampler::new(params.z_mean, params.z_law)?;
    let marked = ((params.delta * n as f64).round() as usize).min(n);

    let mut uf = UnionFind::new();
    for _ in 0..marked {
        uf.push();
    }
    let mut initial_sizes = Vec::new();
    if marked > 0 {
        let geo = Geometric::new(1.0 / params.initial_mean)
            .map_err(|e| Error::InvalidParameter(format!("initial size law: {e}")))?;
        let mut start = 0;
        while start < marked {
            let size = (1 + geo.sample(&mut rng) as usize).min(marked - start);
            for v in start + 1..start + size {
                uf.union(v - 1, v);
            }
            initial_sizes.push(size);
            start += size;
        }
    }

    // stage 1: trees as (parent index within the tree) in BFS order; root is 0
    let mut trees: Vec<Vec<usize>> = Vec::with_capacity(marked);
    for _ in 0..marked {
        let mut parent = vec![usize::MAX];
        let mut head = 0;
        while head < parent.len() {
            for _ in 0..z.sample(&mut rng) {
                parent.push(head);
            }
            head += 1;
        }
        trees.push(parent);
    }

    // stage 2
    let mut order: Vec<usize> = (0..marked).collect();
    order.shuffle(&mut rng);
    let mut processed: Vec<usize> = Vec::with_capacity(marked);
    let mut fresh = 0usize;
    let mut identifications = 0usize;
    for &u in &order {
        processed.push(u);
        let tree = &trees[u];
        let mut id = vec![usize::MAX; tree.len()];
        id[0] = u;
        let mut deleted = vec![false; tree.len()];
        for w in 1..tree.len() {
            let p = tree[w];
            if deleted[p] {
                deleted[w] = true;
                continue;
            }
            let k = processed.len();
            if rng.random_bool((k as f64 / n as f64).min(1.0)) {
                let target = processed[rng.random_range(0..k)];
                uf.union(id[p], target);
                identifications += 1;
                // descendants of w are pruned via `deleted`
                deleted[w] = true;
            } else {
                if marked + fresh >= n {
                    return Err(Error::Precondition("coalescence grew past n vertices".into()));
                }
                let v = uf.push();
                fresh += 1;
                uf.union(id[p], v);
                id[w] = v;
                processed.push(v);
            }
        }
    }

    let total = uf.parent.len();
    let mut final_sizes: Vec<usize> = Vec::new();
    for v in 0..total {
        if uf.find(v) == v && uf.size[v] >= 2 {
            final_sizes.push(uf.size[v]);
        }
    }
    final_sizes.sort_unstable_by(|a, b| b.cmp(a));
    let nontrivial_vertices = final_sizes.iter().sum();
    Ok(CoalesceOutcome {
        marked,
        initial_sizes,
        final_sizes,
        fresh_vertices: fresh,
        identifications,
        nontrivial_vertices,
    })
}
