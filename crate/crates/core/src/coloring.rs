//! Exact coloring and clique search.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::budget::{Budget, Meter};
use crate::error::Result;
use crate::relation::Graph;

/// A proper coloring with colors `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringCertificate {
    pub k: usize,
    pub colors: Vec<usize>,
}

impl ColoringCertificate {
    pub fn is_proper_for(&self, g: &Graph) -> bool {
        self.colors.len() == g.n()
            && self.colors.iter().all(|&c| c < self.k)
            && g.edges().iter().all(|&(u, v)| self.colors[u] != self.colors[v])
    }
}

/// DSATUR backtracking for a `k`-coloring of the graph given by `adj`.
pub(crate) fn find_coloring(adj: &[Vec<usize>], k: usize, meter: &mut Meter) -> Result<Option<Vec<usize>>> {
    const NONE: usize = usize::MAX;

    fn pick(adj: &[Vec<usize>], colors: &[usize], k: usize) -> Option<(usize, u128)> {
        let mut best: Option<(usize, u32, usize, u128)> = None;
        for v in 0..adj.len() {
            if colors[v] != NONE {
                continue;
            }
            let mut used = 0u128;
            for &u in &adj[v] {
                if colors[u] != NONE && colors[u] < 128 {
                    used |= 1 << colors[u];
                }
            }
            let sat = used.count_ones();
            let deg = adj[v].len();
            let better = match best {
                None => true,
                Some((_, s, d, _)) => sat > s || (sat == s && deg > d),
            };
            if better {
                best = Some((v, sat, deg, used));
            }
            if sat as usize >= k {
                break;
            }
        }
        best.map(|(v, _, _, used)| (v, used))
    }

    fn go(
        adj: &[Vec<usize>],
        k: usize,
        colors: &mut [usize],
        max_used: usize,
        left: usize,
        meter: &mut Meter,
    ) -> Result<bool> {
        meter.tick()?;
        if left == 0 {
            return Ok(true);
        }
        let Some((v, used)) = pick(adj, colors, k) else {
            return Ok(true);
        };
        let limit = k.min(max_used + 1);
        for c in 0..limit {
            let clash = if c < 128 {
                used >> c & 1 == 1
            } else {
                adj[v].iter().any(|&u| colors[u] == c)
            };
            if clash {
                continue;
            }
            colors[v] = c;
            if go(adj, k, colors, max_used.max(c + 1), left - 1, meter)? {
                return Ok(true);
            }
        }
        colors[v] = NONE;
        Ok(false)
    }

    let n = adj.len();
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    if k == 0 {
        return Ok(None);
    }
    let mut colors = vec![NONE; n];
    if go(adj, k, &mut colors, 0, n, meter)? {
        Ok(Some(colors))
    } else {
        Ok(None)
    }
}

/// Whether `g` admits a proper coloring with `k` colors.
pub fn is_k_colorable(g: &Graph, k: usize, budget: Budget) -> Result<bool> {
    Ok(find_coloring(&g.adjacency_lists(), k, &mut budget.meter())?.is_some())
}

fn greedy_clique(adj: &[Vec<usize>]) -> usize {
    let n = adj.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(adj[v].len()));
    let mut best = 0;
    for &start in &order {
        let mut clique = vec![start];
        for &v in &order {
            if v != start && clique.iter().all(|&u| adj[u].contains(&v)) {
                clique.push(v);
            }
        }
        best = best.max(clique.len());
    }
    best
}

fn greedy_color_count(adj: &[Vec<usize>]) -> usize {
    let n = adj.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(adj[v].len()));
    let mut colors = vec![usize::MAX; n];
    let mut k = 0;
    for v in order {
        let c = (0..).find(|c| adj[v].iter().all(|&u| colors[u] != *c)).unwrap();
        colors[v] = c;
        k = k.max(c + 1);
    }
    k
}

/// χ(g) with a witnessing coloring.
///
/// Searches `k` upward from a greedy clique bound; the greedy coloring caps
/// the search from above.
pub fn chromatic_number(g: &Graph, budget: Budget) -> Result<ColoringCertificate> {
    let adj = g.adjacency_lists();
    let n = adj.len();
    if n == 0 {
        return Ok(ColoringCertificate { k: 0, colors: vec![] });
    }
    let lower = greedy_clique(&adj).max(1);
    let upper = greedy_color_count(&adj);
    let mut meter = budget.meter();
    for k in lower..=upper {
        if let Some(colors) = find_coloring(&adj, k, &mut meter)? {
            return Ok(ColoringCertificate { k, colors });
        }
    }
    unreachable!("greedy coloring with {upper} colors exists")
}

/// Visits every proper coloring with colors `0..k` in lexicographic order of
/// the color vector. The visitor may stop the walk early.
pub fn for_each_coloring<F>(g: &Graph, k: usize, budget: Budget, mut visit: F) -> Result<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    fn go<F: FnMut(&[usize]) -> ControlFlow<()>>(
        earlier: &[Vec<usize>],
        k: usize,
        colors: &mut Vec<usize>,
        meter: &mut Meter,
        visit: &mut F,
    ) -> Result<ControlFlow<()>> {
        meter.tick()?;
        let v = colors.len();
        if v == earlier.len() {
            return Ok(visit(colors));
        }
        for c in 0..k {
            if earlier[v].iter().any(|&u| colors[u] == c) {
                continue;
            }
            colors.push(c);
            let flow = go(earlier, k, colors, meter, visit)?;
            colors.pop();
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    let earlier: Vec<Vec<usize>> = (0..g.n())
        .map(|v| g.neighbors(v).filter(|&u| u < v).collect())
        .collect();
    let mut meter = budget.meter();
    let _ = go(&earlier, k, &mut Vec::with_capacity(g.n()), &mut meter, &mut visit)?;
    Ok(())
}

/// All proper colorings with colors `0..k`, lexicographically ordered.
pub fn enumerate_colorings(g: &Graph, k: usize, budget: Budget) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for_each_coloring(g, k, budget, |c| {
        out.push(c.to_vec());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Every clique of size `k`, lexicographically ordered.
pub fn cliques_of_size(g: &Graph, k: usize, budget: Budget) -> Result<Vec<Vec<usize>>> {
    fn go(
        g: &Graph,
        k: usize,
        start: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        meter: &mut Meter,
    ) -> Result<()> {
        meter.tick()?;
        if current.len() == k {
            out.push(current.clone());
            return Ok(());
        }
        for v in start..g.n() {
            if current.iter().all(|&u| g.adjacent(u, v)) {
                current.push(v);
                go(g, k, v + 1, current, out, meter)?;
                current.pop();
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    go(g, k, 0, &mut Vec::new(), &mut out, &mut budget.meter())?;
    Ok(out)
}

/// A maximum clique, the lexicographically least among those of maximum size.
pub fn max_clique(g: &Graph, budget: Budget) -> Result<Vec<usize>> {
    fn go(
        g: &Graph,
        candidates: &[usize],
        current: &mut Vec<usize>,
        best: &mut Vec<usize>,
        meter: &mut Meter,
    ) -> Result<()> {
        meter.tick()?;
        if current.len() > best.len() {
            *best = current.clone();
        }
        for (i, &v) in candidates.iter().enumerate() {
            if current.len() + candidates.len() - i <= best.len() {
                break;
            }
            let next: Vec<usize> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&u| g.adjacent(u, v))
                .collect();
            current.push(v);
            go(g, &next, current, best, meter)?;
            current.pop();
        }
        Ok(())
    }
    let all: Vec<usize> = (0..g.n()).collect();
    let mut best = Vec::new();
    go(g, &all, &mut Vec::new(), &mut best, &mut budget.meter())?;
    Ok(best)
}

/// Two-coloring by breadth-first search, or `None` if an odd cycle exists.
pub fn bipartition(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut side = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for root in 0..n {
        if side[root] != usize::MAX {
            continue;
        }
        side[root] = 0;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if side[u] == usize::MAX {
                    side[u] = 1 - side[v];
                    queue.push_back(u);
                } else if side[u] == side[v] {
                    return None;
                }
            }
        }
    }
    Some(side)
}
