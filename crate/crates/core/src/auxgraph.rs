//! The auxiliary graph Ĝ(G): `x Ĝ y` when every χ(G)-coloring of some finite
//! restriction of G containing both points gives them different colors.
//!
//! On a finite ground set a witness can always be enlarged (a χ-coloring of a
//! bigger restriction restricts to one of a smaller restriction), so the whole
//! ground set is a canonical witness. Membership then reduces to a single
//! colorability test: `x` and `y` can share a color in some χ-coloring iff
//! the graph with `x` and `y` identified is χ-colorable.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::coloring::{chromatic_number, find_coloring, for_each_coloring};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::relation::{FiniteRelation, Graph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxGraph {
    pub base: Graph,
    pub chi: usize,
    pub aux: Graph,
}

/// JSON summary emitted next to `.gr` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxSummary {
    pub chi: usize,
    pub edges_base: Vec<(usize, usize)>,
    pub edges_aux: Vec<(usize, usize)>,
}

impl AuxGraph {
    pub fn summary(&self) -> AuxSummary {
        AuxSummary {
            chi: self.chi,
            edges_base: self.base.edges(),
            edges_aux: self.aux.edges(),
        }
    }
}

/// Adjacency lists of `adj` restricted to `keep` with `y` folded into `x`.
/// `x` and `y` must both be in `keep` and non-adjacent.
fn contracted(g: &Graph, keep: &[usize], x: usize, y: usize) -> Vec<Vec<usize>> {
    let verts: Vec<usize> = keep.iter().copied().filter(|&v| v != y).collect();
    let mut pos = vec![usize::MAX; g.n()];
    for (i, &v) in verts.iter().enumerate() {
        pos[v] = i;
    }
    pos[y] = pos[x];
    let mut adj = vec![Vec::new(); verts.len()];
    for &u in keep {
        for &v in keep {
            if u < v && g.adjacent(u, v) {
                let (a, b) = (pos[u], pos[v]);
                if !adj[a].contains(&b) {
                    adj[a].push(b);
                    adj[b].push(a);
                }
            }
        }
    }
    adj
}

/// Whether every `chi`-coloring of `g|keep` separates `x` and `y`.
fn forced_apart(g: &Graph, chi: usize, keep: &[usize], x: usize, y: usize, budget: Budget) -> Result<bool> {
    if g.adjacent(x, y) {
        return Ok(true);
    }
    let adj = contracted(g, keep, x, y);
    Ok(find_coloring(&adj, chi, &mut budget.meter())?.is_none())
}

pub fn aux_graph(g: &Graph, budget: Budget) -> Result<AuxGraph> {
    aux_graph_with(g, budget, Exec::default())
}

/// Ĝ(g) by one contraction test per non-adjacent pair.
pub fn aux_graph_with(g: &Graph, budget: Budget, exec: Exec) -> Result<AuxGraph> {
    let n = g.n();
    let chi = chromatic_number(g, budget)?.k;
    let all: Vec<usize> = (0..n).collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
        .filter(|&(x, y)| !g.adjacent(x, y))
        .collect();
    let verdicts = par::map_slice(exec, &pairs, |&(x, y)| forced_apart(g, chi, &all, x, y, budget));

    let mut rel = g.relation().clone();
    for (&(x, y), verdict) in pairs.iter().zip(verdicts) {
        if verdict? {
            rel.set(x, y, true);
            rel.set(y, x, true);
        }
    }
    Ok(AuxGraph {
        base: g.clone(),
        chi,
        aux: Graph::new(rel).expect("symmetric and loop-free by construction"),
    })
}

/// Ĝ(g) by enumerating every χ-coloring of the whole graph.
pub fn aux_graph_bruteforce(g: &Graph, budget: Budget) -> Result<AuxGraph> {
    let n = g.n();
    let chi = chromatic_number(g, budget)?.k;
    let mut shared = FiniteRelation::identity(n);
    for_each_coloring(g, chi, budget, |colors| {
        for x in 0..n {
            for y in x + 1..n {
                if colors[x] == colors[y] {
                    shared.set(x, y, true);
                    shared.set(y, x, true);
                }
            }
        }
        ControlFlow::Continue(())
    })?;
    let aux = FiniteRelation::full(n).difference(&shared);
    Ok(AuxGraph {
        base: g.clone(),
        chi,
        aux: Graph::new(aux).expect("complement of a reflexive symmetric relation"),
    })
}

/// Largest set on which [`separates_all`] enumerates colorings.
pub const ENUMERATION_MAX_SET: usize = 8;

/// Whether every `chi`-coloring of `g|set` separates each pair. Small sets
/// are checked by enumerating colorings, larger ones pair by pair with the
/// contraction test.
pub fn separates_all(g: &Graph, chi: usize, set: &[usize], pairs: &[(usize, usize)], budget: Budget) -> Result<bool> {
    if set.len() > ENUMERATION_MAX_SET {
        for &(x, y) in pairs {
            if !set.contains(&x) || !set.contains(&y) {
                return Err(Error::InvalidArgument("pair endpoint outside the witness set".into()));
            }
            if !forced_apart(g, chi, set, x, y, budget)? {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    let sub = g.induced(set);
    let local: Vec<(usize, usize)> = pairs
        .iter()
        .map(|&(x, y)| {
            let px = set.iter().position(|&v| v == x);
            let py = set.iter().position(|&v| v == y);
            px.zip(py)
        })
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidArgument("pair endpoint outside the witness set".into()))?;
    let mut ok = true;
    for_each_coloring(&sub, chi, budget, |colors| {
        if local.iter().any(|&(a, b)| colors[a] == colors[b]) {
            ok = false;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(ok)
}

/// Inclusion-minimal witness for one Ĝ-edge: starting from the whole ground
/// set, drop vertices in descending order whenever the rest still forces
/// `x` and `y` apart. Witnesses are closed under supersets, so no proper
/// subset of the result is a witness.
fn minimal_witness(g: &Graph, chi: usize, x: usize, y: usize, budget: Budget) -> Result<Vec<usize>> {
    let mut set: Vec<usize> = (0..g.n()).collect();
    if !forced_apart(g, chi, &set, x, y, budget)? {
        return Err(Error::NotInAuxGraph(x, y));
    }
    for v in (0..g.n()).rev() {
        if v == x || v == y {
            continue;
        }
        let trial: Vec<usize> = set.iter().copied().filter(|&u| u != v).collect();
        if forced_apart(g, chi, &trial, x, y, budget)? {
            set = trial;
        }
    }
    Ok(set)
}

/// A finite set witnessing that every listed pair is a Ĝ-edge.
///
/// For one pair the result is an inclusion-minimal witness. For several pairs it is
/// the union of the per-pair witnesses, checked with [`separates_all`]
/// before it is returned.
pub fn witness_set(g: &Graph, pairs: &[(usize, usize)], budget: Budget) -> Result<Vec<usize>> {
    let chi = chromatic_number(g, budget)?.k;
    witness_set_with_chi(g, chi, pairs, budget)
}

pub(crate) fn witness_set_with_chi(
    g: &Graph,
    chi: usize,
    pairs: &[(usize, usize)],
    budget: Budget,
) -> Result<Vec<usize>> {
    let n = g.n();
    let all: Vec<usize> = (0..n).collect();
    for &(x, y) in pairs {
        g.relation().check_index(x)?;
        g.relation().check_index(y)?;
        if x == y || !forced_apart(g, chi, &all, x, y, budget)? {
            return Err(Error::NotInAuxGraph(x, y));
        }
    }
    let mut union = Vec::new();
    for &(x, y) in pairs {
        union.extend(minimal_witness(g, chi, x, y, budget)?);
    }
    union.sort_unstable();
    union.dedup();
    if pairs.len() > 1 && !separates_all(g, chi, &union, pairs, budget)? {
        return Err(Error::PropositionViolated {
            name: "union".into(),
            detail: format!("witness {union:?} does not separate all of {pairs:?}"),
        });
    }
    Ok(union)
}
