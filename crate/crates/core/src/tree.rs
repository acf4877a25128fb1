//! Finite trees, the pruning derivative and rank, and evaluation of finite
//! Borel codes.
//!
//! A code over `alpha` is a finite tree on `alpha × alpha` (the pair
//! `(γ, δ)` is stored as the index `γ·alpha + δ`) together with a subset of
//! `{0, …, m-1}` for every sequence just outside the tree. A node evaluates
//! to `⋃_γ ⋂_δ` of its children; the root's value is the coded set.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Sequence = Vec<usize>;

/// `-` for the empty sequence, otherwise comma-separated indices.
pub fn format_sequence(s: &[usize]) -> String {
    if s.is_empty() {
        "-".into()
    } else {
        s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
    }
}

pub fn parse_sequence(text: &str) -> Result<Sequence> {
    let text = text.trim();
    if text == "-" || text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse()
                .map_err(|_| Error::InvalidTree(format!("bad index {tok:?} in sequence {text:?}")))
        })
        .collect()
}

/// A prefix-closed set of sequences over `{0, …, index_size-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTree {
    index_size: usize,
    nodes: BTreeSet<Sequence>,
}

impl FiniteTree {
    pub fn new(index_size: usize, nodes: impl IntoIterator<Item = Sequence>) -> Result<Self> {
        let nodes: BTreeSet<Sequence> = nodes.into_iter().collect();
        for t in &nodes {
            if let Some(&i) = t.iter().find(|&&i| i >= index_size) {
                return Err(Error::InvalidTree(format!(
                    "index {i} in {} exceeds index set of size {index_size}",
                    format_sequence(t)
                )));
            }
            if let Some(k) = (0..t.len()).find(|&k| !nodes.contains(&t[..k])) {
                return Err(Error::InvalidTree(format!(
                    "{} is present but its prefix {} is not",
                    format_sequence(t),
                    format_sequence(&t[..k])
                )));
            }
        }
        Ok(FiniteTree { index_size, nodes })
    }

    pub fn empty(index_size: usize) -> Self {
        FiniteTree {
            index_size,
            nodes: BTreeSet::new(),
        }
    }

    pub fn index_size(&self) -> usize {
        self.index_size
    }

    pub fn nodes(&self) -> &BTreeSet<Sequence> {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        self.nodes.contains(t)
    }

    pub fn is_subtree_of(&self, other: &FiniteTree) -> bool {
        self.nodes.is_subset(&other.nodes)
    }

    /// Sequences outside the tree whose immediate predecessor is inside,
    /// plus `ε` when the tree is empty.
    pub fn frontier(&self) -> Vec<Sequence> {
        if self.nodes.is_empty() {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for t in &self.nodes {
            for i in 0..self.index_size {
                let mut child = t.clone();
                child.push(i);
                if !self.nodes.contains(&child) {
                    out.push(child);
                }
            }
        }
        out.sort();
        out
    }

    /// Tree file: one node per line, `-` for `ε`.
    pub fn parse(text: &str, index_size: Option<usize>) -> Result<Self> {
        let nodes = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(parse_sequence)
            .collect::<Result<Vec<_>>>()?;
        let inferred = nodes.iter().flatten().max().map_or(1, |m| m + 1);
        Self::new(index_size.unwrap_or(inferred), nodes)
    }

    pub fn to_text(&self) -> String {
        self.nodes.iter().map(|t| format_sequence(t) + "\n").collect()
    }
}

/// `∂T`: the nodes with at least one child in `T`.
pub fn pruning_derivative(t: &FiniteTree) -> FiniteTree {
    let nodes = t
        .nodes
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| s[..s.len() - 1].to_vec())
        .collect();
    FiniteTree {
        index_size: t.index_size,
        nodes,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruningRank {
    /// Least `ρ` with `∂^ρ T = ∂^{ρ+1} T`.
    pub rho: usize,
    /// For each node, the largest `β` with the node in `∂^β T`. Nodes of a
    /// non-empty fixed point would have no rank; finite trees have none.
    pub node_ranks: BTreeMap<Sequence, usize>,
    pub well_founded: bool,
}

pub fn pruning_rank(t: &FiniteTree) -> PruningRank {
    let mut current = t.clone();
    let mut rho = 0;
    let mut node_ranks = BTreeMap::new();
    loop {
        let next = pruning_derivative(&current);
        if next == current {
            break;
        }
        for s in current.nodes.difference(&next.nodes) {
            node_ranks.insert(s.clone(), rho);
        }
        current = next;
        rho += 1;
    }
    PruningRank {
        rho,
        node_ranks,
        well_founded: current.is_empty(),
    }
}

/// How a node combines its children.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connective {
    /// `⋃_γ ⋂_δ`
    UnionOfIntersections,
    /// `⋂_γ ⋃_δ`
    IntersectionOfUnions,
}

/// A finite Borel code over a ground set of size `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorelCode {
    alpha: usize,
    m: usize,
    tree: FiniteTree,
    leaves: BTreeMap<Sequence, Vec<usize>>,
}

impl BorelCode {
    pub fn new(alpha: usize, m: usize, tree: FiniteTree, leaves: BTreeMap<Sequence, Vec<usize>>) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::InvalidArgument("alpha must be positive".into()));
        }
        if tree.index_size() != alpha * alpha {
            return Err(Error::InvalidTree(format!(
                "code tree must be over {} pair indices, found {}",
                alpha * alpha,
                tree.index_size()
            )));
        }
        let frontier = tree.frontier();
        if let Some(missing) = frontier.iter().find(|t| !leaves.contains_key(*t)) {
            return Err(Error::MissingLeaf(format_sequence(missing)));
        }
        if let Some(extra) = leaves.keys().find(|t| frontier.binary_search(t).is_err()) {
            return Err(Error::InvalidTree(format!(
                "leaf set given for {}, which is not on the frontier",
                format_sequence(extra)
            )));
        }
        let leaves = leaves
            .into_iter()
            .map(|(t, mut set)| {
                set.sort_unstable();
                set.dedup();
                match set.iter().find(|&&v| v >= m) {
                    Some(&v) => Err(Error::IndexOutOfRange { index: v, n: m }),
                    None => Ok((t, set)),
                }
            })
            .collect::<Result<_>>()?;
        Ok(BorelCode { alpha, m, tree, leaves })
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn ground_size(&self) -> usize {
        self.m
    }

    pub fn tree(&self) -> &FiniteTree {
        &self.tree
    }

    pub fn leaves(&self) -> &BTreeMap<Sequence, Vec<usize>> {
        &self.leaves
    }

    /// Index of the pair `(γ, δ)`.
    pub fn pair(&self, gamma: usize, delta: usize) -> usize {
        gamma * self.alpha + delta
    }

    /// The same tree with every leaf set complemented.
    pub fn complemented(&self) -> BorelCode {
        let leaves = self
            .leaves
            .iter()
            .map(|(t, s)| (t.clone(), (0..self.m).filter(|v| !s.contains(v)).collect()))
            .collect();
        BorelCode { leaves, ..self.clone() }
    }

    pub fn to_file(&self) -> CodeFile {
        CodeFile {
            alpha: self.alpha,
            m: self.m,
            tree: self.tree.nodes.iter().map(|t| format_sequence(t)).collect(),
            leaves: self
                .leaves
                .iter()
                .map(|(t, s)| (format_sequence(t), s.clone()))
                .collect(),
        }
    }

    pub fn from_file(file: &CodeFile) -> Result<Self> {
        let nodes = file
            .tree
            .iter()
            .map(|s| parse_sequence(s))
            .collect::<Result<Vec<_>>>()?;
        let tree = FiniteTree::new(file.alpha * file.alpha, nodes)?;
        let leaves = file
            .leaves
            .iter()
            .map(|(k, v)| Ok((parse_sequence(k)?, v.clone())))
            .collect::<Result<_>>()?;
        BorelCode::new(file.alpha, file.m, tree, leaves)
    }
}

/// JSON layout of a code: `{alpha, tree, leaves, m}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub alpha: usize,
    pub tree: Vec<String>,
    pub leaves: BTreeMap<String, Vec<usize>>,
    pub m: usize,
}

pub fn eval_borel_code(code: &BorelCode) -> Result<Vec<usize>> {
    eval_borel_code_with(code, Connective::UnionOfIntersections)
}

/// Memoized top-down evaluation from the root.
pub fn eval_borel_code_with(code: &BorelCode, connective: Connective) -> Result<Vec<usize>> {
    struct Ctx<'a> {
        code: &'a BorelCode,
        connective: Connective,
        memo: HashMap<Sequence, FixedBitSet>,
    }

    fn leaf(code: &BorelCode, t: &[usize]) -> Result<FixedBitSet> {
        let set = code
            .leaves
            .get(t)
            .ok_or_else(|| Error::MissingLeaf(format_sequence(t)))?;
        let mut bits = FixedBitSet::with_capacity(code.m);
        for &v in set {
            bits.insert(v);
        }
        Ok(bits)
    }

    fn eval(ctx: &mut Ctx<'_>, t: &mut Sequence) -> Result<FixedBitSet> {
        if !ctx.code.tree.contains(t) {
            return leaf(ctx.code, t);
        }
        if let Some(v) = ctx.memo.get(t.as_slice()) {
            return Ok(v.clone());
        }
        let alpha = ctx.code.alpha;
        let m = ctx.code.m;
        let (outer_unit, inner_unit) = match ctx.connective {
            Connective::UnionOfIntersections => (false, true),
            Connective::IntersectionOfUnions => (true, false),
        };
        let mut outer = filled(m, outer_unit);
        for gamma in 0..alpha {
            let mut inner = filled(m, inner_unit);
            for delta in 0..alpha {
                t.push(gamma * alpha + delta);
                let child = eval(ctx, t)?;
                t.pop();
                match ctx.connective {
                    Connective::UnionOfIntersections => inner.intersect_with(&child),
                    Connective::IntersectionOfUnions => inner.union_with(&child),
                }
            }
            match ctx.connective {
                Connective::UnionOfIntersections => outer.union_with(&inner),
                Connective::IntersectionOfUnions => outer.intersect_with(&inner),
            }
        }
        ctx.memo.insert(t.clone(), outer.clone());
        Ok(outer)
    }

    let mut ctx = Ctx {
        code,
        connective,
        memo: HashMap::new(),
    };
    Ok(eval(&mut ctx, &mut Vec::new())?.ones().collect())
}

fn filled(m: usize, value: bool) -> FixedBitSet {
    let mut bits = FixedBitSet::with_capacity(m);
    if value {
        bits.insert_range(..);
    }
    bits
}
