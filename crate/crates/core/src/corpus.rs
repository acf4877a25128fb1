//! Instance corpora: every labeled quasi-order on a few points, and seeded
//! random quasi-orders and graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::relation::{random_quasi_order, FiniteRelation, Graph, QuasiOrder};

/// Largest `n` accepted by [`all_quasi_orders`].
pub const EXHAUSTIVE_LIMIT: usize = 5;

/// Every quasi-order on `{0, …, n-1}`, in order of the off-diagonal bit
/// pattern. There are 1, 1, 4, 29, 355, 6942 of them for n = 0…5.
pub fn all_quasi_orders(n: usize) -> Vec<QuasiOrder> {
    assert!(
        n <= EXHAUSTIVE_LIMIT,
        "exhaustive enumeration only up to n = {EXHAUSTIVE_LIMIT}"
    );
    let off: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    (0u64..1 << off.len())
        .filter_map(|mask| {
            let mut r = FiniteRelation::identity(n);
            for (b, &(i, j)) in off.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    r.set(i, j, true);
                }
            }
            QuasiOrder::new(r).ok()
        })
        .collect()
}

/// Every quasi-order with at most `n_max` points.
pub fn all_quasi_orders_up_to(n_max: usize) -> Vec<QuasiOrder> {
    (0..=n_max).flat_map(all_quasi_orders).collect()
}

/// Erdős–Rényi graph with edge probability `density`.
pub fn random_graph(n: usize, density: f64, seed: u64) -> Graph {
    let density = if density.is_nan() { 0.0 } else { density.clamp(0.0, 1.0) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Parameters of a seeded random corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomCorpus {
    pub count: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub densities: Vec<f64>,
    pub seed: u64,
}

impl Default for RandomCorpus {
    fn default() -> Self {
        RandomCorpus {
            count: 200,
            n_min: 2,
            n_max: 16,
            densities: vec![0.2, 0.4, 0.6],
            seed: 0,
        }
    }
}

/// One drawn instance: its size, density and generator seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Draw {
    pub n: usize,
    pub density: f64,
    pub seed: u64,
}

impl RandomCorpus {
    pub fn draws(&self) -> Vec<Draw> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let densities = if self.densities.is_empty() {
            vec![0.5]
        } else {
            self.densities.clone()
        };
        let hi = self.n_max.max(self.n_min);
        (0..self.count)
            .map(|i| Draw {
                n: rng.gen_range(self.n_min..=hi),
                density: densities[i % densities.len()],
                seed: rng.gen(),
            })
            .collect()
    }

    pub fn quasi_orders(&self) -> Vec<QuasiOrder> {
        self.draws()
            .into_iter()
            .map(|d| random_quasi_order(d.n, d.density, d.seed))
            .collect()
    }

    pub fn graphs(&self) -> Vec<Graph> {
        self.draws()
            .into_iter()
            .map(|d| random_graph(d.n, d.density, d.seed ^ 0x5eed))
            .collect()
    }
}
