//! Width, maximum antichains and minimum chain covers via bipartite matching.
//!
//! Everything is computed on the quotient poset: the strict order on
//! ≈-classes is split into a bipartite graph (left copy → right copy), a
//! maximum matching gives a minimum path cover of the transitive DAG, and
//! König's theorem turns the matching into a maximum antichain.

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::procedures::paper_chain_cover;
use crate::relation::{quotient, QuasiOrder};

/// A partition of the ground set into chains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCover {
    pub chains: Vec<Vec<usize>>,
}

impl ChainCover {
    /// Checks disjointness, coverage of `{0, …, n-1}` and pairwise comparability.
    pub fn validate(&self, q: &QuasiOrder) -> std::result::Result<(), String> {
        let mut seen = vec![false; q.n()];
        for chain in &self.chains {
            for &v in chain {
                if v >= q.n() {
                    return Err(format!("vertex {v} out of range"));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(format!("vertex {v} covered twice"));
                }
            }
            if !q.is_chain(chain) {
                return Err(format!("{chain:?} is not a chain"));
            }
        }
        match seen.iter().position(|&s| !s) {
            Some(v) => Err(format!("vertex {v} not covered")),
            None => Ok(()),
        }
    }

    /// Number of non-empty chains.
    pub fn size(&self) -> usize {
        self.chains.iter().filter(|c| !c.is_empty()).count()
    }
}

/// Outcome of the finite dichotomy: `k` chains, or `k + 1` pairwise
/// incomparable points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DichotomyResult {
    Cover(ChainCover),
    Antichain(Vec<usize>),
}

/// Kuhn's augmenting-path matching. `adj[l]` lists right vertices in the
/// order they are tried. Returns the partner of each left vertex.
pub fn max_bipartite_matching(right: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    fn augment(
        l: usize,
        adj: &[Vec<usize>],
        visited: &mut [bool],
        match_right: &mut [Option<usize>],
        match_left: &mut [Option<usize>],
    ) -> bool {
        for &r in &adj[l] {
            if std::mem::replace(&mut visited[r], true) {
                continue;
            }
            let free = match match_right[r] {
                None => true,
                Some(other) => augment(other, adj, visited, match_right, match_left),
            };
            if free {
                match_right[r] = Some(l);
                match_left[l] = Some(r);
                return true;
            }
        }
        false
    }

    let mut match_left = vec![None; adj.len()];
    let mut match_right = vec![None; right];
    for l in 0..adj.len() {
        let mut visited = vec![false; right];
        augment(l, adj, &mut visited, &mut match_right, &mut match_left);
    }
    match_left
}

/// Strict-order successors of each class of the quotient.
fn split_graph(q: &QuasiOrder) -> (crate::relation::QuotientPoset, Vec<Vec<usize>>) {
    let qp = quotient(q);
    let c = qp.len();
    let adj = (0..c)
        .map(|i| (0..c).filter(|&j| i != j && qp.order.le(i, j)).collect())
        .collect();
    (qp, adj)
}

/// Width of `q`: size of a maximum antichain.
pub fn width(q: &QuasiOrder) -> usize {
    let (qp, adj) = split_graph(q);
    let matched = max_bipartite_matching(qp.len(), &adj)
        .iter()
        .filter(|m| m.is_some())
        .count();
    qp.len() - matched
}

/// A maximum antichain read off the König vertex cover of the split graph,
/// lifted to class representatives. Sorted ascending.
pub fn konig_antichain(q: &QuasiOrder) -> Vec<usize> {
    let (qp, adj) = split_graph(q);
    let c = qp.len();
    let match_left = max_bipartite_matching(c, &adj);
    let mut match_right = vec![None; c];
    for (l, m) in match_left.iter().enumerate() {
        if let Some(r) = *m {
            match_right[r] = Some(l);
        }
    }

    // Alternating search from unmatched left vertices.
    let mut left_seen = vec![false; c];
    let mut right_seen = vec![false; c];
    let mut stack: Vec<usize> = (0..c).filter(|&l| match_left[l].is_none()).collect();
    for &l in &stack {
        left_seen[l] = true;
    }
    while let Some(l) = stack.pop() {
        for &r in &adj[l] {
            if match_left[l] == Some(r) || std::mem::replace(&mut right_seen[r], true) {
                continue;
            }
            if let Some(next) = match_right[r] {
                if !std::mem::replace(&mut left_seen[next], true) {
                    stack.push(next);
                }
            }
        }
    }
    // Cover = unreached left ∪ reached right; the antichain avoids both copies.
    let mut out: Vec<usize> = (0..c)
        .filter(|&i| left_seen[i] && !right_seen[i])
        .map(|i| qp.classes[i][0])
        .collect();
    out.sort_unstable();
    out
}

/// Lexicographically least antichain of the given size, if any exists.
pub fn least_antichain(q: &QuasiOrder, size: usize) -> Option<Vec<usize>> {
    let n = q.n();
    let mut chosen: Vec<usize> = Vec::with_capacity(size);
    for v in 0..n {
        if chosen.len() == size {
            break;
        }
        if chosen.iter().any(|&u| q.comparable(u, v)) {
            continue;
        }
        let needed = size - chosen.len() - 1;
        let pool: Vec<usize> = (v + 1..n)
            .filter(|&u| !q.comparable(u, v) && chosen.iter().all(|&c| !q.comparable(c, u)))
            .collect();
        if needed == 0 || width(&q.induced(&pool)) >= needed {
            chosen.push(v);
        }
    }
    (chosen.len() == size).then_some(chosen)
}

/// Width together with the lexicographically least maximum antichain.
pub fn width_and_antichain(q: &QuasiOrder) -> (usize, Vec<usize>) {
    let w = width(q);
    let witness = least_antichain(q, w).expect("an antichain of size width exists");
    (w, witness)
}

/// A cover by exactly `width(q)` chains, from the matching's path cover.
/// Chains are sorted ascending and listed by least element.
pub fn min_chain_cover(q: &QuasiOrder) -> ChainCover {
    let (qp, adj) = split_graph(q);
    let c = qp.len();
    let match_left = max_bipartite_matching(c, &adj);
    let mut has_pred = vec![false; c];
    for r in match_left.iter().flatten() {
        has_pred[*r] = true;
    }
    let mut chains: Vec<Vec<usize>> = (0..c)
        .filter(|&i| !has_pred[i])
        .map(|start| {
            let mut chain = Vec::new();
            let mut cur = Some(start);
            while let Some(i) = cur {
                chain.extend_from_slice(&qp.classes[i]);
                cur = match_left[i];
            }
            chain.sort_unstable();
            chain
        })
        .collect();
    chains.sort();
    ChainCover { chains }
}

/// All antichains of cardinality `k`, in lexicographic order.
pub fn enumerate_antichains(q: &QuasiOrder, k: usize, budget: Budget) -> Result<Vec<Vec<usize>>> {
    fn extend(
        q: &QuasiOrder,
        k: usize,
        start: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        meter: &mut crate::budget::Meter,
    ) -> Result<()> {
        meter.tick()?;
        if current.len() == k {
            out.push(current.clone());
            return Ok(());
        }
        let remaining = k - current.len();
        for v in start..q.n() {
            if q.n() - v < remaining {
                break;
            }
            if current.iter().any(|&u| q.comparable(u, v)) {
                continue;
            }
            current.push(v);
            extend(q, k, v + 1, current, out, meter)?;
            current.pop();
        }
        Ok(())
    }

    let mut out = Vec::new();
    let mut meter = budget.meter();
    extend(q, k, 0, &mut Vec::with_capacity(k), &mut out, &mut meter)?;
    Ok(out)
}

/// Either `k` chains covering the ground set (padded with empty chains) or
/// the lexicographically least antichain of size `k + 1`.
pub fn dichotomy(q: &QuasiOrder, k: usize, budget: Budget) -> Result<DichotomyResult> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if width(q) <= k {
        let mut cover = paper_chain_cover(q, budget)?.cover;
        cover.chains.resize(k, Vec::new());
        Ok(DichotomyResult::Cover(cover))
    } else {
        let antichain = least_antichain(q, k + 1).expect("width exceeds k");
        Ok(DichotomyResult::Antichain(antichain))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::random_quasi_order;

    fn fence() -> QuasiOrder {
        QuasiOrder::parse("4\n1010\n0111\n0010\n0001\n").unwrap()
    }

    /// Brute force over all subsets.
    fn brute_width(q: &QuasiOrder) -> usize {
        let n = q.n();
        (0u32..1 << n)
            .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|s| q.is_antichain(s))
            .map(|s| s.len())
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn fence_width_and_cover() {
        let q = fence();
        assert_eq!(brute_width(&q), 2);
        assert_eq!(width_and_antichain(&q), (2, vec![0, 1]));
        assert_eq!(min_chain_cover(&q).chains, vec![vec![0, 2], vec![1, 3]]);
        let k = konig_antichain(&q);
        assert_eq!(k.len(), 2);
        assert!(q.is_antichain(&k));
    }

    #[test]
    fn trivial_widths() {
        assert_eq!(width_and_antichain(&QuasiOrder::identity(5)), (5, vec![0, 1, 2, 3, 4]));
        assert_eq!(width_and_antichain(&QuasiOrder::chain(3)), (1, vec![0]));
        assert_eq!(width_and_antichain(&QuasiOrder::identity(0)), (0, vec![]));
        assert_eq!(
            min_chain_cover(&QuasiOrder::identity(3)).chains,
            vec![vec![0], vec![1], vec![2]]
        );
        let all_equal = QuasiOrder::parse("4\n1111\n1111\n1111\n1111\n").unwrap();
        assert_eq!(min_chain_cover(&all_equal).chains, vec![vec![0, 1, 2, 3]]);
        assert!(min_chain_cover(&QuasiOrder::identity(0)).chains.is_empty());
    }

    #[test]
    fn antichain_enumeration() {
        let q = fence();
        let b = Budget::default();
        assert_eq!(
            enumerate_antichains(&q, 2, b).unwrap(),
            vec![vec![0, 1], vec![0, 3], vec![2, 3]]
        );
        assert!(enumerate_antichains(&q, 3, b).unwrap().is_empty());
        assert_eq!(enumerate_antichains(&q, 0, b).unwrap(), vec![Vec::<usize>::new()]);
        assert_eq!(
            enumerate_antichains(&QuasiOrder::identity(12), 6, Budget::new(50)),
            Err(Error::BudgetExceeded { limit: 50 })
        );
    }

    #[test]
    fn dichotomy_examples() {
        let q = fence();
        let b = Budget::default();
        assert_eq!(dichotomy(&q, 1, b).unwrap(), DichotomyResult::Antichain(vec![0, 1]));
        assert_eq!(
            dichotomy(&q, 2, b).unwrap(),
            DichotomyResult::Cover(ChainCover {
                chains: vec![vec![0, 2], vec![1, 3]]
            })
        );
        assert_eq!(
            dichotomy(&q, 3, b).unwrap(),
            DichotomyResult::Cover(ChainCover {
                chains: vec![vec![0, 2], vec![1, 3], vec![]]
            })
        );
        assert_eq!(
            dichotomy(&QuasiOrder::identity(0), 2, b).unwrap(),
            DichotomyResult::Cover(ChainCover {
                chains: vec![vec![], vec![]]
            })
        );
        assert!(dichotomy(&q, 0, b).is_err());
    }

    #[test]
    fn matches_brute_force_on_random_orders() {
        for seed in 0..150 {
            let q = random_quasi_order(1 + (seed as usize % 11), 0.35, seed);
            let (w, a) = width_and_antichain(&q);
            assert_eq!(w, brute_width(&q), "seed {seed}");
            assert!(q.is_antichain(&a));
            let k = konig_antichain(&q);
            assert_eq!(k.len(), w);
            assert!(q.is_antichain(&k));
            let cover = min_chain_cover(&q);
            assert_eq!(cover.chains.len(), w);
            cover.validate(&q).unwrap();
            let all = enumerate_antichains(&q, w, Budget::default()).unwrap();
            assert_eq!(all.first(), Some(&a), "least antichain, seed {seed}");
        }
    }
}
