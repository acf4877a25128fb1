//! Brute-force reference implementations. Each one works straight from the
//! definition, shares no code with the library, and is only fit for tiny inputs.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use qolab_core::relation::{Graph, QuasiOrder};
use qolab_core::tree::{BorelCode, FiniteTree};
use rand::Rng;

fn members(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Largest antichain size by scanning every subset.
pub fn width(q: &QuasiOrder) -> usize {
    let n = q.n();
    assert!(n <= 20);
    let mut best = 0;
    for mask in 0u64..1 << n {
        let set = members(mask, n);
        if set.len() > best
            && set
                .iter()
                .all(|&a| set.iter().all(|&b| a == b || (!q.le(a, b) && !q.le(b, a))))
        {
            best = set.len();
        }
    }
    best
}

/// Every antichain of the given size, lexicographically sorted.
pub fn antichains(q: &QuasiOrder, size: usize) -> Vec<Vec<usize>> {
    let n = q.n();
    let mut out: Vec<Vec<usize>> = (0u64..1 << n)
        .map(|m| members(m, n))
        .filter(|s| s.len() == size)
        .filter(|s| {
            s.iter()
                .all(|&a| s.iter().all(|&b| a == b || (!q.le(a, b) && !q.le(b, a))))
        })
        .collect();
    out.sort();
    out
}

/// Calls `f` on every map `{0..n} → {0..k}` that is a proper coloring.
fn each_proper(g: &Graph, k: usize, mut f: impl FnMut(&[usize])) {
    let n = g.n();
    if k == 0 {
        if n == 0 {
            f(&[]);
        }
        return;
    }
    let mut c = vec![0usize; n];
    loop {
        if g.edges().iter().all(|&(u, v)| c[u] != c[v]) {
            f(&c);
        }
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            c[i] += 1;
            if c[i] < k {
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }
}

pub fn chromatic_number(g: &Graph) -> usize {
    (0..=g.n())
        .find(|&k| {
            let mut found = false;
            each_proper(g, k, |_| found = true);
            found
        })
        .unwrap()
}

/// Pairs that differ in every optimal coloring, as an edge list.
pub fn forced_apart_pairs(g: &Graph) -> Vec<(usize, usize)> {
    forced_apart_with(g, chromatic_number(g))
}

/// Pairs that differ in every proper coloring with `k` colors.
pub fn forced_apart_with(g: &Graph, k: usize) -> Vec<(usize, usize)> {
    let n = g.n();
    let mut apart = vec![vec![true; n]; n];
    each_proper(g, k, |c| {
        for u in 0..n {
            for v in 0..n {
                if c[u] == c[v] {
                    apart[u][v] = false;
                }
            }
        }
    });
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| apart[u][v])
        .collect()
}

/// Whether `g` maps to `h` at all, by trying every vertex map.
pub fn has_homomorphism(g: &Graph, h: &Graph) -> bool {
    let (n, m) = (g.n(), h.n());
    if n == 0 {
        return true;
    }
    if m == 0 {
        return false;
    }
    let mut c = vec![0usize; n];
    loop {
        if g.edges().iter().all(|&(u, v)| h.adjacent(c[u], c[v])) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            c[i] += 1;
            if c[i] < m {
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }
}

/// Evaluates a code stage by stage: `f^(0)` is the leaf assignment, and
/// stage `β` fills in every tree node all of whose children already have a
/// value. The root's value once the whole tree is filled is the result.
pub fn staged_eval(code: &BorelCode) -> Vec<usize> {
    let alpha = code.alpha();
    let m = code.ground_size();
    let as_flags = |s: &[usize]| {
        let mut v = vec![false; m];
        for &x in s {
            v[x] = true;
        }
        v
    };
    let mut stage: BTreeMap<Vec<usize>, Vec<bool>> =
        code.leaves().iter().map(|(t, s)| (t.clone(), as_flags(s))).collect();
    let mut pending: BTreeSet<Vec<usize>> = code.tree().nodes().clone();
    while !pending.is_empty() {
        let ready: Vec<Vec<usize>> = pending
            .iter()
            .filter(|t| {
                (0..alpha * alpha).all(|i| {
                    let mut c = (*t).clone();
                    c.push(i);
                    stage.contains_key(&c)
                })
            })
            .cloned()
            .collect();
        assert!(!ready.is_empty(), "stage made no progress");
        let mut next = stage.clone();
        for t in &ready {
            let mut value = vec![false; m];
            for gamma in 0..alpha {
                let mut meet = vec![true; m];
                for delta in 0..alpha {
                    let mut c = t.clone();
                    c.push(gamma * alpha + delta);
                    for (x, bit) in stage[&c].iter().enumerate() {
                        meet[x] &= *bit;
                    }
                }
                for x in 0..m {
                    value[x] |= meet[x];
                }
            }
            next.insert(t.clone(), value);
            pending.remove(t);
        }
        stage = next;
    }
    let root = &stage[&Vec::new()];
    (0..m).filter(|&x| root[x]).collect()
}

/// Random code with `alpha ≤ 3`, tree depth `≤ 3` and ground set `≤ 6`.
pub fn random_code(rng: &mut impl Rng) -> BorelCode {
    let alpha = rng.gen_range(1..=3);
    let m = rng.gen_range(1..=6);
    let branching = alpha * alpha;
    let keep = rng.gen_range(0.2..0.7);
    let mut nodes = Vec::new();
    if rng.gen_bool(0.9) {
        let mut layer = vec![Vec::new()];
        nodes.push(Vec::new());
        for _depth in 1..3 {
            let mut next = Vec::new();
            for t in &layer {
                for i in 0..branching {
                    if rng.gen_bool(keep) {
                        let mut c: Vec<usize> = t.clone();
                        c.push(i);
                        next.push(c);
                    }
                }
            }
            nodes.extend(next.iter().cloned());
            layer = next;
        }
    }
    let tree = FiniteTree::new(branching, nodes).expect("prefix closed by construction");
    let leaves = tree
        .frontier()
        .into_iter()
        .map(|t| {
            let set = (0..m).filter(|_| rng.gen_bool(0.5)).collect();
            (t, set)
        })
        .collect();
    BorelCode::new(alpha, m, tree, leaves).expect("valid code")
}
