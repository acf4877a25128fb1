//! Brute-force checkers for the structural facts about Ĝ(G) and ⊥_R.
//!
//! Each checker evaluates the full quantified statement on one finite
//! instance. Up to [`EXHAUSTIVE_MAX_N`] vertices every inner quantifier is
//! enumerated; above that the expensive ones (edge subsets, independent sets,
//! starting sets) are sampled from a seeded generator.

use std::collections::HashMap;
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::auxgraph::{aux_graph, separates_all, witness_set_with_chi, AuxGraph};
use crate::budget::Budget;
use crate::coloring::{cliques_of_size, for_each_coloring, max_clique};
use crate::dilworth::enumerate_antichains;
use crate::error::{Error, Result};
use crate::procedures::{independence_extend_in, puncture_extend, reduced_relation_in, staged_family, SetFamily};
use crate::relation::{Graph, QuasiOrder};

/// Largest instance on which all inner quantifiers are enumerated.
pub const EXHAUSTIVE_MAX_N: usize = 8;

/// Largest Ĝ edge count for which every edge subset is tried.
const UNION_EXHAUSTIVE_EDGES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Proposition {
    Union,
    Clique,
    Antichain,
    Transitive,
    Independence,
    Maximal,
}

impl Proposition {
    pub const ALL: [Proposition; 6] = [
        Proposition::Union,
        Proposition::Clique,
        Proposition::Antichain,
        Proposition::Transitive,
        Proposition::Independence,
        Proposition::Maximal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Proposition::Union => "union",
            Proposition::Clique => "clique",
            Proposition::Antichain => "antichain",
            Proposition::Transitive => "transitive",
            Proposition::Independence => "independence",
            Proposition::Maximal => "maximal",
        }
    }

    /// Whether the statement is about a quasi-order rather than a bare graph.
    pub fn needs_quasi_order(self) -> bool {
        matches!(self, Proposition::Transitive | Proposition::Independence)
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Proposition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Proposition::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown proposition {s:?}")))
    }
}

/// A checker input. Graph statements applied to a quasi-order use ⊥_R.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    QuasiOrder(QuasiOrder),
    Graph(Graph),
}

impl Instance {
    pub fn n(&self) -> usize {
        match self {
            Instance::QuasiOrder(q) => q.n(),
            Instance::Graph(g) => g.n(),
        }
    }

    pub fn graph(&self) -> Graph {
        match self {
            Instance::QuasiOrder(q) => q.incomparability_graph(),
            Instance::Graph(g) => g.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub budget: Budget,
    /// Seeds the samplers used above [`EXHAUSTIVE_MAX_N`] and the random families.
    pub seed: u64,
    /// Sample count for the sampled quantifiers.
    pub samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            budget: Budget::default(),
            seed: 0,
            samples: 64,
        }
    }
}

/// A falsifying assignment of the quantified variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub proposition: Proposition,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropositionReport {
    pub proposition: Proposition,
    /// Number of quantifier assignments examined.
    pub checks: u64,
    pub counterexample: Option<Counterexample>,
}

impl PropositionReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

struct Checker {
    proposition: Proposition,
    checks: u64,
}

impl Checker {
    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) -> std::result::Result<(), Counterexample> {
        self.checks += 1;
        if ok {
            Ok(())
        } else {
            Err(Counterexample {
                proposition: self.proposition,
                detail: detail(),
            })
        }
    }
}

type Outcome = std::result::Result<(), Counterexample>;

/// Converts an error that signals a broken statement into a counterexample.
fn caught<T>(prop: Proposition, r: Result<T>) -> Result<std::result::Result<T, Counterexample>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e @ (Error::PropositionViolated { .. } | Error::HypothesisViolated { .. })) => Ok(Err(Counterexample {
            proposition: prop,
            detail: e.to_string(),
        })),
        Err(e) => Err(e),
    }
}

pub fn verify_proposition(prop: Proposition, instance: &Instance, opts: &VerifyOptions) -> Result<PropositionReport> {
    let mut checker = Checker {
        proposition: prop,
        checks: 0,
    };
    let graph = instance.graph();
    let aux = aux_graph(&graph, opts.budget)?;
    let outcome = match (prop, instance) {
        (Proposition::Union, _) => check_union(&mut checker, &aux, opts)?,
        (Proposition::Clique, _) => check_clique(&mut checker, &aux, opts)?,
        (Proposition::Antichain, _) => check_antichain(&mut checker, &aux, opts)?,
        (Proposition::Maximal, _) => check_maximal(&mut checker, instance, &aux, opts)?,
        (Proposition::Transitive, Instance::QuasiOrder(q)) => check_transitive(&mut checker, q, &aux)?,
        (Proposition::Independence, Instance::QuasiOrder(q)) => check_independence(&mut checker, q, &aux, opts)?,
        (_, Instance::Graph(_)) => {
            return Err(Error::InvalidArgument(format!("`{prop}` needs a quasi-order instance")))
        }
    };
    Ok(PropositionReport {
        proposition: prop,
        checks: checker.checks,
        counterexample: outcome.err(),
    })
}

fn rng_for(opts: &VerifyOptions, prop: Proposition) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(prop as u64 + 1)))
}

/// For edge subsets `E' ⊆ Ĝ`, the union of per-edge witnesses forces every
/// χ-coloring to separate all of `E'`.
fn check_union(ck: &mut Checker, aux: &AuxGraph, opts: &VerifyOptions) -> Result<Outcome> {
    let g = &aux.base;
    let n = g.n();
    let edges = aux.aux.edges();
    if edges.is_empty() {
        return Ok(Ok(()));
    }
    let mut witnesses: Vec<Option<Vec<usize>>> = vec![None; edges.len()];

    let subsets: Vec<Vec<usize>> = if n <= EXHAUSTIVE_MAX_N && edges.len() <= UNION_EXHAUSTIVE_EDGES {
        (1u32..1 << edges.len())
            .map(|mask| (0..edges.len()).filter(|&i| mask >> i & 1 == 1).collect())
            .collect()
    } else {
        let mut rng = rng_for(opts, Proposition::Union);
        let mut out: Vec<Vec<usize>> = (0..edges.len()).map(|i| vec![i]).collect();
        out.push((0..edges.len()).collect());
        let samples = if edges.len() >= 2 { opts.samples } else { 0 };
        for _ in 0..samples {
            let size = rng.gen_range(2..=edges.len().min(6));
            let mut pick: Vec<usize> = (0..edges.len()).collect::<Vec<_>>();
            pick.shuffle(&mut rng);
            pick.truncate(size);
            pick.sort_unstable();
            out.push(pick);
        }
        out
    };

    // Pairs forced apart on each witness set, computed once per set.
    let mut separated: HashMap<Vec<usize>, Vec<bool>> = HashMap::new();
    for subset in subsets {
        let mut f: Vec<usize> = Vec::new();
        for &i in &subset {
            if witnesses[i].is_none() {
                let w = match caught(
                    Proposition::Union,
                    witness_set_with_chi(g, aux.chi, &[edges[i]], opts.budget),
                )? {
                    Ok(w) => w,
                    Err(cx) => return Ok(Err(cx)),
                };
                witnesses[i] = Some(w);
            }
            f.extend(witnesses[i].as_ref().unwrap());
        }
        f.sort_unstable();
        f.dedup();
        if !separated.contains_key(&f) {
            let sep = separated_pairs(g, aux.chi, &f, &edges, opts.budget)?;
            separated.insert(f.clone(), sep);
        }
        let sep = &separated[&f];
        let contains_ends = subset
            .iter()
            .all(|&i| f.contains(&edges[i].0) && f.contains(&edges[i].1));
        let bad = subset.iter().copied().find(|&i| !sep[i]);
        if let Err(cx) = ck.check(contains_ends && bad.is_none(), || {
            let pairs: Vec<_> = subset.iter().map(|&i| edges[i]).collect();
            format!(
                "witness {f:?} for Ĝ-edges {pairs:?} admits a χ-coloring joining {:?}",
                bad.map(|i| edges[i])
            )
        }) {
            return Ok(Err(cx));
        }
    }
    Ok(Ok(()))
}

/// Which of `edges` (with both ends in `set`) every χ-coloring of `g|set` separates.
fn separated_pairs(
    g: &Graph,
    chi: usize,
    set: &[usize],
    edges: &[(usize, usize)],
    budget: Budget,
) -> Result<Vec<bool>> {
    let inside = |v: usize| set.binary_search(&v).ok();
    if set.len() <= EXHAUSTIVE_MAX_N {
        let sub = g.induced(set);
        let mut sep: Vec<bool> = edges
            .iter()
            .map(|&(x, y)| inside(x).is_some() && inside(y).is_some())
            .collect();
        for_each_coloring(&sub, chi, budget, |colors| {
            for (i, &(x, y)) in edges.iter().enumerate() {
                if let (Some(a), Some(b)) = (inside(x), inside(y)) {
                    if colors[a] == colors[b] {
                        sep[i] = false;
                    }
                }
            }
            ControlFlow::Continue(())
        })?;
        Ok(sep)
    } else {
        edges
            .iter()
            .map(|&(x, y)| {
                if inside(x).is_some() && inside(y).is_some() {
                    separates_all(g, chi, set, &[(x, y)], budget)
                } else {
                    Ok(false)
                }
            })
            .collect()
    }
}

/// Every Ĝ-clique has at most χ points.
fn check_clique(ck: &mut Checker, aux: &AuxGraph, opts: &VerifyOptions) -> Result<Outcome> {
    let clique = max_clique(&aux.aux, opts.budget)?;
    Ok(ck.check(clique.len() <= aux.chi, || {
        format!("Ĝ-clique {clique:?} exceeds χ = {}", aux.chi)
    }))
}

/// A χ-clique of Ĝ inside `Ĝ^x ∪ Ĝ^y` forces `x Ĝ y`.
fn check_antichain(ck: &mut Checker, aux: &AuxGraph, opts: &VerifyOptions) -> Result<Outcome> {
    let n = aux.aux.n();
    if aux.chi == 0 {
        return Ok(Ok(()));
    }
    let cliques = cliques_of_size(&aux.aux, aux.chi, opts.budget)?;
    for x in 0..n {
        for y in x..n {
            let hood = |z: usize| aux.aux.adjacent(x, z) || aux.aux.adjacent(y, z);
            if let Some(c) = cliques.iter().find(|c| c.iter().all(|&z| hood(z))) {
                if let Err(cx) = ck.check(aux.aux.adjacent(x, y), || {
                    format!("clique {c:?} lies in the Ĝ-neighbourhoods of {x} and {y}, which are not Ĝ-related")
                }) {
                    return Ok(Err(cx));
                }
            } else {
                ck.checks += 1;
            }
        }
    }
    Ok(Ok(()))
}

/// `R ∖ Ĝ(⊥_R)` is transitive, checked over all triples.
fn check_transitive(ck: &mut Checker, q: &QuasiOrder, aux: &AuxGraph) -> Result<Outcome> {
    let n = q.n();
    let reduced = |i: usize, j: usize| q.le(i, j) && !aux.aux.adjacent(i, j);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if let Err(cx) = ck.check(!(reduced(i, j) && reduced(j, k)) || reduced(i, k), || {
                    format!("{i} → {j} → {k} in R ∖ Ĝ but not {i} → {k}")
                }) {
                    return Ok(Err(cx));
                }
            }
        }
    }
    // The library routine must agree.
    match caught(Proposition::Transitive, reduced_relation_in(q, &aux.aux))? {
        Ok(_) => Ok(Ok(())),
        Err(cx) => Ok(Err(cx)),
    }
}

/// All independent sets of `g`, lexicographically ordered, or a sample of
/// them when `g` is large.
fn independent_sets(g: &Graph, opts: &VerifyOptions, prop: Proposition) -> Result<Vec<Vec<usize>>> {
    fn go(
        g: &Graph,
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        meter: &mut crate::budget::Meter,
    ) -> Result<()> {
        meter.tick()?;
        out.push(cur.clone());
        for v in start..g.n() {
            if cur.iter().all(|&u| !g.adjacent(u, v)) {
                cur.push(v);
                go(g, v + 1, cur, out, meter)?;
                cur.pop();
            }
        }
        Ok(())
    }
    if g.n() <= EXHAUSTIVE_MAX_N {
        let mut out = Vec::new();
        go(g, 0, &mut Vec::new(), &mut out, &mut opts.budget.meter())?;
        return Ok(out);
    }
    let mut rng = rng_for(opts, prop);
    let mut out = vec![Vec::new()];
    for _ in 0..opts.samples {
        let mut order: Vec<usize> = (0..g.n()).collect();
        order.shuffle(&mut rng);
        let target = rng.gen_range(1..=g.n());
        let mut set = Vec::new();
        for v in order {
            if set.len() == target {
                break;
            }
            if set.iter().all(|&u| !g.adjacent(u, v)) {
                set.push(v);
            }
        }
        set.sort_unstable();
        if !out.contains(&set) {
            out.push(set);
        }
    }
    Ok(out)
}

/// For every antichain `A` with `|A| = χ(⊥)` and every Ĝ-independent `Y`,
/// some `x ∈ A` keeps `{x} ∪ Y` Ĝ-independent.
fn check_independence(ck: &mut Checker, q: &QuasiOrder, aux: &AuxGraph, opts: &VerifyOptions) -> Result<Outcome> {
    // The empty order has only the empty antichain, which nothing extends.
    if q.n() == 0 {
        return Ok(Ok(()));
    }
    let antichains = enumerate_antichains(q, aux.chi, opts.budget)?;
    let ys = independent_sets(&aux.aux, opts, Proposition::Independence)?;
    for a in &antichains {
        for y in &ys {
            let extends = |x: usize| y.iter().all(|&u| !aux.aux.adjacent(u, x));
            if let Err(cx) = ck.check(a.iter().any(|&x| extends(x)), || {
                format!("no point of the antichain {a:?} extends the Ĝ-independent set {y:?}")
            }) {
                return Ok(Err(cx));
            }
            let x = match caught(Proposition::Independence, independence_extend_in(&aux.aux, a, y))? {
                Ok(x) => x,
                Err(cx) => return Ok(Err(cx)),
            };
            if let Err(cx) = ck.check(a.contains(&x) && extends(x), || {
                format!("extension {x} returned for {a:?} and {y:?} is invalid")
            }) {
                return Ok(Err(cx));
            }
        }
    }
    Ok(Ok(()))
}

/// Whether every independent `Y` leaves a point of each member addable.
fn admissible(g: &Graph, fam: &SetFamily, indep: &[Vec<usize>]) -> bool {
    indep.iter().all(|y| {
        fam.sets
            .iter()
            .all(|f| f.iter().any(|&x| y.iter().all(|&u| !g.adjacent(u, x))))
    })
}

/// Under the puncturing hypothesis, every independent set extends to an
/// independent set meeting every member of the family.
fn check_maximal(ck: &mut Checker, instance: &Instance, aux: &AuxGraph, opts: &VerifyOptions) -> Result<Outcome> {
    let (g, mut families) = match instance {
        Instance::QuasiOrder(q) => {
            let antichains = enumerate_antichains(q, aux.chi, opts.budget)?;
            let fams = if q.n() == 0 {
                Vec::new()
            } else {
                vec![SetFamily::new(antichains)]
            };
            (aux.aux.clone(), fams)
        }
        Instance::Graph(g) => (g.clone(), Vec::new()),
    };
    let n = g.n();
    let indep = independent_sets(&g, opts, Proposition::Maximal)?;

    // The maximum-antichain family must already be admissible.
    if let Some(fam) = families.first() {
        if let Err(cx) = ck.check(admissible(&g, fam, &indep), || {
            format!(
                "maximum antichains {:?} are not punctured by some extension set",
                fam.sets
            )
        }) {
            return Ok(Err(cx));
        }
    }
    if n > 0 {
        let mut rng = rng_for(opts, Proposition::Maximal);
        let attempts = opts.samples.min(16);
        for _ in 0..attempts {
            let members = rng.gen_range(1..=4);
            let sets = (0..members)
                .map(|_| {
                    let size = rng.gen_range(1..=n.min(4));
                    let mut all: Vec<usize> = (0..n).collect();
                    all.shuffle(&mut rng);
                    all.truncate(size);
                    all
                })
                .collect();
            let fam = SetFamily::new(sets);
            if admissible(&g, &fam, &indep) {
                families.push(fam);
            }
        }
    }

    let starts: Vec<&Vec<usize>> = if n <= EXHAUSTIVE_MAX_N {
        indep.iter().collect()
    } else {
        indep.iter().take(opts.samples).collect()
    };
    for fam in &families {
        let max_size = fam.sets.iter().map(Vec::len).max().unwrap_or(0);
        for y in &indep {
            if let Err(cx) = ck.check(staged_family(&g, fam, y, 0).is_empty(), || {
                format!("F_0({y:?}) is non-empty for family {:?}", fam.sets)
            }) {
                return Ok(Err(cx));
            }
            for k in 0..=max_size {
                let fk = staged_family(&g, fam, y, k);
                let next = staged_family(&g, fam, y, k + 1);
                let small_inside = fam.sets.iter().filter(|f| f.len() <= k).all(|f| fk.sets.contains(f));
                let monotone = fk.sets.iter().all(|f| next.sets.contains(f));
                if let Err(cx) = ck.check(small_inside && monotone, || {
                    format!(
                        "staged families for {y:?} at k = {k} break inclusion for {:?}",
                        fam.sets
                    )
                }) {
                    return Ok(Err(cx));
                }
            }
        }
        for b in &starts {
            let c = match caught(Proposition::Maximal, puncture_extend(&g, fam, b))? {
                Ok(c) => c,
                Err(cx) => return Ok(Err(cx)),
            };
            let ok = b.iter().all(|v| c.contains(v))
                && g.is_independent(&c)
                && fam.is_punctured_by(&c)
                && (0..=max_size).all(|k| staged_family(&g, fam, &c, k).is_punctured_by(&c));
            if let Err(cx) = ck.check(ok, || {
                format!("extension {c:?} of {b:?} fails to puncture {:?}", fam.sets)
            }) {
                return Ok(Err(cx));
            }
        }
    }
    Ok(Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fence() -> QuasiOrder {
        QuasiOrder::parse("4\n1010\n0111\n0010\n0001\n").unwrap()
    }

    #[test]
    fn fence_passes_everything() {
        let opts = VerifyOptions::default();
        for p in Proposition::ALL {
            let r = verify_proposition(p, &Instance::QuasiOrder(fence()), &opts).unwrap();
            assert!(r.passed(), "{p}: {:?}", r.counterexample);
            assert!(r.checks > 0, "{p}");
        }
    }

    #[test]
    fn spec_examples() {
        let opts = VerifyOptions::default();
        let inc = Instance::Graph(fence().incomparability_graph());
        assert!(verify_proposition(Proposition::Clique, &inc, &opts).unwrap().passed());
        let id = Instance::QuasiOrder(QuasiOrder::identity(4));
        let r = verify_proposition(Proposition::Independence, &id, &opts).unwrap();
        assert!(r.passed());
        // one antichain × the empty set and four singletons
        assert_eq!(r.checks, 2 * 5);
    }

    #[test]
    fn graph_instances_are_rejected_where_an_order_is_needed() {
        let g = Instance::Graph(Graph::complete(2));
        assert!(verify_proposition(Proposition::Transitive, &g, &VerifyOptions::default()).is_err());
        assert!(verify_proposition(Proposition::Maximal, &g, &VerifyOptions::default())
            .unwrap()
            .passed());
    }

    #[test]
    fn names_round_trip() {
        for p in Proposition::ALL {
            assert_eq!(p.name().parse::<Proposition>().unwrap(), p);
        }
        assert!("bogus".parse::<Proposition>().is_err());
    }

    #[test]
    fn sampled_mode_on_larger_instances() {
        let q = crate::relation::random_quasi_order(12, 0.3, 3);
        let opts = VerifyOptions {
            samples: 8,
            ..VerifyOptions::default()
        };
        for p in Proposition::ALL {
            let r = verify_proposition(p, &Instance::QuasiOrder(q.clone()), &opts).unwrap();
            assert!(r.passed(), "{p}: {:?}", r.counterexample);
        }
    }
}
