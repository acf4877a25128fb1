//! Constructive procedures built on Ĝ(⊥_R): the reduced order `R ∖ Ĝ`,
//! extending independent sets from a maximum antichain, greedy puncturing of
//! a set family, and the layered chain cover that peels one Ĝ-independent
//! layer per unit of width.

use serde::{Deserialize, Serialize};

use crate::auxgraph::aux_graph;
use crate::budget::Budget;
use crate::dilworth::{enumerate_antichains, width, ChainCover};
use crate::error::{Error, Result};
use crate::relation::{FiniteRelation, Graph, QuasiOrder};

/// A finite family of finite vertex sets. Members are kept sorted and
/// duplicates are dropped, keeping the first occurrence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetFamily {
    pub sets: Vec<Vec<usize>>,
}

impl SetFamily {
    pub fn new(sets: Vec<Vec<usize>>) -> Self {
        let mut out: Vec<Vec<usize>> = Vec::with_capacity(sets.len());
        for mut s in sets {
            s.sort_unstable();
            s.dedup();
            if !out.contains(&s) {
                out.push(s);
            }
        }
        SetFamily { sets: out }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        for s in &self.sets {
            if let Some(&v) = s.iter().find(|&&v| v >= n) {
                return Err(Error::IndexOutOfRange { index: v, n });
            }
        }
        Ok(())
    }

    /// Whether `set` meets every member.
    pub fn is_punctured_by(&self, set: &[usize]) -> bool {
        self.sets.iter().all(|f| f.iter().any(|v| set.contains(v)))
    }

    /// One set per line, space-separated; blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut sets = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let set = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| Error::MalformedInput {
                        line: i + 1,
                        message: format!("not a vertex index: {tok:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            sets.push(set);
        }
        Ok(SetFamily::new(sets))
    }

    pub fn to_text(&self) -> String {
        self.sets
            .iter()
            .map(|s| s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ") + "\n")
            .collect()
    }
}

/// Members `F` of `fam` in which at least `|F| - k` points cannot be added
/// to `y` without breaking `g`-independence.
pub fn staged_family(g: &Graph, fam: &SetFamily, y: &[usize], k: usize) -> SetFamily {
    let blocked = |x: usize| y.iter().any(|&u| g.adjacent(u, x));
    SetFamily {
        sets: fam
            .sets
            .iter()
            .filter(|f| f.iter().filter(|&&x| blocked(x)).count() + k >= f.len())
            .cloned()
            .collect(),
    }
}

/// The layered cover: one chain per peeled layer, then the width-one residue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperCover {
    #[serde(flatten)]
    pub cover: ChainCover,
    pub layers: Vec<Vec<usize>>,
}

/// `R ∖ Ĝ(⊥_R)`; fails if the result is not transitive.
pub fn reduced_relation(q: &QuasiOrder, budget: Budget) -> Result<FiniteRelation> {
    let aux = aux_graph(&q.incomparability_graph(), budget)?.aux;
    reduced_relation_in(q, &aux)
}

pub(crate) fn reduced_relation_in(q: &QuasiOrder, aux: &Graph) -> Result<FiniteRelation> {
    let reduced = q.relation().difference(aux.relation());
    match reduced.transitivity_violation() {
        None => Ok(reduced),
        Some((i, j, k)) => Err(Error::PropositionViolated {
            name: "transitive".into(),
            detail: format!("{i} ≤ {j} ≤ {k} in R ∖ Ĝ but ({i}, {k}) is missing"),
        }),
    }
}

/// The least `x ∈ a` for which `{x} ∪ y` stays Ĝ(⊥_R)-independent, where
/// `a` is a maximum antichain and `y` is Ĝ(⊥_R)-independent.
pub fn independence_extend(q: &QuasiOrder, a: &[usize], y: &[usize], budget: Budget) -> Result<usize> {
    for &v in a.iter().chain(y) {
        q.relation().check_index(v)?;
    }
    if !q.is_antichain(a) {
        return Err(Error::NotAntichain(a.to_vec()));
    }
    let w = width(q);
    if a.len() != w {
        return Err(Error::WrongCardinality {
            expected: w,
            got: a.len(),
        });
    }
    let aux = aux_graph(&q.incomparability_graph(), budget)?.aux;
    if !aux.is_independent(y) {
        return Err(Error::NotIndependent(y.to_vec()));
    }
    independence_extend_in(&aux, a, y)
}

pub(crate) fn independence_extend_in(aux: &Graph, a: &[usize], y: &[usize]) -> Result<usize> {
    let mut sorted = a.to_vec();
    sorted.sort_unstable();
    sorted
        .into_iter()
        .find(|&x| y.iter().all(|&u| !aux.adjacent(u, x)))
        .ok_or_else(|| Error::PropositionViolated {
            name: "independence".into(),
            detail: format!("no point of {a:?} extends {y:?}"),
        })
}

/// Greedily grows the `g`-independent set `b` until it meets every member of
/// `fam`: repeatedly take the first member missed so far and add its least
/// point that keeps the set independent.
pub fn puncture_extend(g: &Graph, fam: &SetFamily, b: &[usize]) -> Result<Vec<usize>> {
    fam.validate(g.n())?;
    for &v in b {
        g.relation().check_index(v)?;
    }
    if !g.is_independent(b) {
        return Err(Error::NotIndependent(b.to_vec()));
    }
    let mut c: Vec<usize> = b.to_vec();
    c.sort_unstable();
    c.dedup();
    while let Some(f) = fam.sets.iter().find(|f| f.iter().all(|v| !c.contains(v))) {
        match f.iter().copied().find(|&x| c.iter().all(|&u| !g.adjacent(u, x))) {
            Some(x) => {
                let at = c.partition_point(|&u| u < x);
                c.insert(at, x);
            }
            None => {
                return Err(Error::HypothesisViolated {
                    partial: c,
                    family_member: f.clone(),
                })
            }
        }
    }
    Ok(c)
}

/// Chain cover of size `width(q)` built by peeling Ĝ-independent layers.
///
/// While the residual has width `w ≥ 2`, the greedy puncturing of its
/// maximum antichains inside Ĝ(⊥) gives a layer meeting all of them; the
/// layer is a chain and removing it lowers the width to `w - 1`. A residual
/// of width one is emitted whole.
pub fn paper_chain_cover(q: &QuasiOrder, budget: Budget) -> Result<PaperCover> {
    let mut residual: Vec<usize> = (0..q.n()).collect();
    let mut chains = Vec::new();
    let mut layers = Vec::new();
    loop {
        let sub = q.induced(&residual);
        let w = width(&sub);
        if w <= 1 {
            if !residual.is_empty() {
                chains.push(residual);
            }
            break;
        }
        let aux = aux_graph(&sub.incomparability_graph(), budget)?.aux;
        let fam = SetFamily::new(enumerate_antichains(&sub, w, budget)?);
        let local = puncture_extend(&aux, &fam, &[])?;
        let layer: Vec<usize> = local.iter().map(|&i| residual[i]).collect();
        residual.retain(|v| !layer.contains(v));
        let next = width(&q.induced(&residual));
        if next + 1 != w || !q.is_chain(&layer) {
            return Err(Error::PropositionViolated {
                name: "coloring".into(),
                detail: format!("layer {layer:?} left width {next} from {w}"),
            });
        }
        chains.push(layer.clone());
        layers.push(layer);
    }
    Ok(PaperCover {
        cover: ChainCover { chains },
        layers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fence() -> QuasiOrder {
        QuasiOrder::parse("4\n1010\n0111\n0010\n0001\n").unwrap()
    }

    #[test]
    fn reduced_relation_examples() {
        let b = Budget::default();
        let mut expected = FiniteRelation::identity(4);
        expected.set(0, 2, true);
        expected.set(1, 3, true);
        assert_eq!(reduced_relation(&fence(), b).unwrap(), expected);
        assert_eq!(
            reduced_relation(&QuasiOrder::identity(3), b).unwrap(),
            FiniteRelation::identity(3)
        );
        let chain = QuasiOrder::chain(3);
        assert_eq!(reduced_relation(&chain, b).unwrap(), chain.relation().clone());
    }

    #[test]
    fn independence_examples() {
        let b = Budget::default();
        let q = fence();
        assert_eq!(independence_extend(&q, &[0, 1], &[2], b).unwrap(), 0);
        assert_eq!(independence_extend(&q, &[2, 3], &[], b).unwrap(), 2);
        assert_eq!(independence_extend(&q, &[0, 3], &[1], b).unwrap(), 3);
        assert_eq!(
            independence_extend(&q, &[0, 2], &[], b),
            Err(Error::NotAntichain(vec![0, 2]))
        );
        assert_eq!(
            independence_extend(&q, &[0], &[], b),
            Err(Error::WrongCardinality { expected: 2, got: 1 })
        );
        assert_eq!(
            independence_extend(&q, &[0, 1], &[1, 2], b),
            Err(Error::NotIndependent(vec![1, 2]))
        );
    }

    #[test]
    fn puncture_examples() {
        let edge = Graph::from_edges(3, &[(0, 1)]);
        assert_eq!(
            puncture_extend(&edge, &SetFamily::new(vec![vec![0, 1]]), &[]).unwrap(),
            vec![0]
        );
        assert_eq!(
            puncture_extend(&edge, &SetFamily::default(), &[]).unwrap(),
            Vec::<usize>::new()
        );
        let aux = Graph::from_edges(4, &[(0, 1), (0, 3), (1, 2), (2, 3)]);
        let fam = SetFamily::new(vec![vec![0, 1], vec![0, 3], vec![2, 3]]);
        assert_eq!(puncture_extend(&aux, &fam, &[]).unwrap(), vec![0, 2]);
        assert_eq!(
            puncture_extend(&edge, &SetFamily::default(), &[0, 1]),
            Err(Error::NotIndependent(vec![0, 1]))
        );
        assert_eq!(
            puncture_extend(&edge, &SetFamily::new(vec![vec![1]]), &[0]),
            Err(Error::HypothesisViolated {
                partial: vec![0],
                family_member: vec![1]
            })
        );
    }

    #[test]
    fn paper_cover_examples() {
        let b = Budget::default();
        let pc = paper_chain_cover(&fence(), b).unwrap();
        assert_eq!(pc.cover.chains, vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(pc.layers, vec![vec![0, 2]]);
        assert_eq!(
            serde_json::to_string(&pc).unwrap(),
            r#"{"chains":[[0,2],[1,3]],"layers":[[0,2]]}"#
        );
        let pc = paper_chain_cover(&QuasiOrder::identity(3), b).unwrap();
        assert_eq!(pc.cover.chains, vec![vec![0], vec![1], vec![2]]);
        let pc = paper_chain_cover(&QuasiOrder::chain(3), b).unwrap();
        assert_eq!(pc.cover.chains, vec![vec![0, 1, 2]]);
        assert!(pc.layers.is_empty());
        assert!(paper_chain_cover(&QuasiOrder::identity(0), b)
            .unwrap()
            .cover
            .chains
            .is_empty());
    }

    #[test]
    fn set_family_text() {
        let fam = SetFamily::parse("0 1\n\n3 0\n1 0\n").unwrap();
        assert_eq!(fam.sets, vec![vec![0, 1], vec![0, 3]]);
        assert_eq!(fam.to_text(), "0 1\n0 3\n");
        assert!(SetFamily::parse("0 x\n").is_err());
        assert!(fam.validate(3).is_err());
    }

    #[test]
    fn staged_family_bookkeeping() {
        let aux = Graph::from_edges(4, &[(0, 1), (0, 3), (1, 2), (2, 3)]);
        let fam = SetFamily::new(vec![vec![0, 1], vec![0, 3], vec![2, 3]]);
        assert!(staged_family(&aux, &fam, &[], 0).is_empty());
        assert_eq!(staged_family(&aux, &fam, &[], 2), fam);
        // with Y = {0}: points 1 and 3 are blocked
        assert_eq!(
            staged_family(&aux, &fam, &[0], 1).sets,
            vec![vec![0, 1], vec![0, 3], vec![2, 3]]
        );
    }
}
