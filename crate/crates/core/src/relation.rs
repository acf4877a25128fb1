//! Finite binary relations on `{0, …, n-1}` and the quasi-orders and graphs
//! built on top of them.
//!
//! Relations are dense boolean matrices with one bitset per row. Ground sets
//! stay small (a few hundred points at most), so constant-time membership is
//! worth more than sparsity.

use std::fmt;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A binary relation on `{0, …, n-1}`; `get(i, j)` iff `i R j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteRelation {
    n: usize,
    rows: Vec<FixedBitSet>,
}

impl FiniteRelation {
    pub fn empty(n: usize) -> Self {
        FiniteRelation {
            n,
            rows: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n);
        for i in 0..n {
            r.set(i, i, true);
        }
        r
    }

    pub fn full(n: usize) -> Self {
        let mut r = Self::empty(n);
        for row in &mut r.rows {
            row.insert_range(..);
        }
        r
    }

    /// Builds a relation from ordered pairs. Panics if a pair is out of range.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut r = Self::empty(n);
        for &(i, j) in pairs {
            r.set(i, j, true);
        }
        r
    }

    pub fn from_matrix(matrix: &[Vec<bool>]) -> Result<Self> {
        let n = matrix.len();
        let mut r = Self::empty(n);
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedInput {
                    line: i + 1,
                    message: format!("row {i} has {} entries, expected {n}", row.len()),
                });
            }
            for (j, &b) in row.iter().enumerate() {
                r.set(i, j, b);
            }
        }
        Ok(r)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn row(&self, i: usize) -> &FixedBitSet {
        &self.rows[i]
    }

    pub fn check_index(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: v, n: self.n })
        }
    }

    /// All related pairs in row-major order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| self.rows[i].ones().map(move |j| (i, j)))
            .collect()
    }

    pub fn count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn is_subset(&self, other: &FiniteRelation) -> bool {
        self.n == other.n && self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset(b))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i))
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.n).all(|i| !self.get(i, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().into_iter().all(|(i, j)| self.get(j, i))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.pairs().into_iter().all(|(i, j)| i == j || !self.get(j, i))
    }

    /// First `(i, j, k)` in lexicographic order with `i R j R k` but not `i R k`.
    pub fn transitivity_violation(&self) -> Option<(usize, usize, usize)> {
        for i in 0..self.n {
            for j in self.rows[i].ones() {
                if let Some(k) = self.rows[j].difference(&self.rows[i]).next() {
                    return Some((i, j, k));
                }
            }
        }
        None
    }

    pub fn is_transitive(&self) -> bool {
        self.transitivity_violation().is_none()
    }

    /// Warshall closure on bit rows.
    pub fn transitive_closure(&self) -> FiniteRelation {
        let mut out = self.clone();
        for k in 0..self.n {
            let row_k = out.rows[k].clone();
            for i in 0..self.n {
                if out.rows[i].contains(k) {
                    out.rows[i].union_with(&row_k);
                }
            }
        }
        out
    }

    pub fn converse(&self) -> FiniteRelation {
        let mut out = Self::empty(self.n);
        for (i, j) in self.pairs() {
            out.set(j, i, true);
        }
        out
    }

    pub fn union(&self, other: &FiniteRelation) -> FiniteRelation {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().zip(&other.rows) {
            a.union_with(b);
        }
        out
    }

    pub fn difference(&self, other: &FiniteRelation) -> FiniteRelation {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().zip(&other.rows) {
            a.difference_with(b);
        }
        out
    }

    /// Restriction to `vertices`, re-indexed by position in the slice.
    pub fn induced(&self, vertices: &[usize]) -> FiniteRelation {
        let mut out = Self::empty(vertices.len());
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate() {
                if self.get(u, v) {
                    out.set(a, b, true);
                }
            }
        }
        out
    }

    /// Parses the `.qo` / `.gr` text format.
    pub fn parse(text: &str) -> Result<FiniteRelation> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (header_line, header) = lines.next().ok_or(Error::MalformedInput {
            line: 1,
            message: "missing size line".into(),
        })?;
        let n: usize = header.parse().map_err(|_| Error::MalformedInput {
            line: header_line,
            message: format!("expected a decimal size, found {header:?}"),
        })?;

        let mut rel = FiniteRelation::empty(n);
        for i in 0..n {
            let (line, row) = lines.next().ok_or_else(|| Error::MalformedInput {
                line: header_line + i + 1,
                message: format!("expected {n} rows, found {i}"),
            })?;
            if row.chars().count() != n {
                return Err(Error::MalformedInput {
                    line,
                    message: format!("row has {} characters, expected {n}", row.chars().count()),
                });
            }
            for (j, c) in row.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => rel.set(i, j, true),
                    other => {
                        return Err(Error::MalformedInput {
                            line,
                            message: format!("unexpected character {other:?}"),
                        })
                    }
                }
            }
        }
        if let Some((line, _)) = lines.next() {
            return Err(Error::MalformedInput {
                line,
                message: format!("trailing content after {n} rows"),
            });
        }
        Ok(rel)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                s.push(if self.get(i, j) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    /// Rows as `0`/`1` strings, for JSON bundles.
    pub fn to_row_strings(&self) -> Vec<String> {
        self.to_text().lines().skip(1).map(str::to_owned).collect()
    }

    pub fn from_row_strings(rows: &[String]) -> Result<FiniteRelation> {
        let mut text = format!("{}\n", rows.len());
        for r in rows {
            text.push_str(r);
            text.push('\n');
        }
        Self::parse(&text)
    }
}

impl fmt::Debug for FiniteRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRelation({}; {:?})", self.n, self.pairs())
    }
}

/// Why a relation fails to be a quasi-order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuasiOrderViolation {
    NotReflexive(usize),
    NotTransitive(usize, usize, usize),
}

impl fmt::Display for QuasiOrderViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuasiOrderViolation::NotReflexive(i) => write!(f, "{i} is not related to itself"),
            QuasiOrderViolation::NotTransitive(i, j, k) => {
                write!(f, "{i} R {j} and {j} R {k} but not {i} R {k}")
            }
        }
    }
}

pub fn is_quasi_order(rel: &FiniteRelation) -> std::result::Result<(), QuasiOrderViolation> {
    if let Some(i) = (0..rel.n()).find(|&i| !rel.get(i, i)) {
        return Err(QuasiOrderViolation::NotReflexive(i));
    }
    match rel.transitivity_violation() {
        Some((i, j, k)) => Err(QuasiOrderViolation::NotTransitive(i, j, k)),
        None => Ok(()),
    }
}

/// A reflexive, transitive relation.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuasiOrder(FiniteRelation);

impl QuasiOrder {
    pub fn new(rel: FiniteRelation) -> Result<Self> {
        is_quasi_order(&rel).map_err(|v| Error::NotQuasiOrder(v.to_string()))?;
        Ok(QuasiOrder(rel))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(FiniteRelation::parse(text)?)
    }

    pub fn identity(n: usize) -> Self {
        QuasiOrder(FiniteRelation::identity(n))
    }

    /// The total order `0 ≤ 1 ≤ … ≤ n-1`.
    pub fn chain(n: usize) -> Self {
        let mut r = FiniteRelation::empty(n);
        for i in 0..n {
            for j in i..n {
                r.set(i, j, true);
            }
        }
        QuasiOrder(r)
    }

    /// Reflexive-transitive closure of arbitrary pairs.
    pub fn generated_by(n: usize, pairs: &[(usize, usize)]) -> Self {
        let r = FiniteRelation::from_pairs(n, pairs).union(&FiniteRelation::identity(n));
        QuasiOrder(r.transitive_closure())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.0.n()
    }

    #[inline]
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.0.get(i, j)
    }

    #[inline]
    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.0.get(i, j) || self.0.get(j, i)
    }

    #[inline]
    pub fn equivalent(&self, i: usize, j: usize) -> bool {
        self.0.get(i, j) && self.0.get(j, i)
    }

    #[inline]
    pub fn strictly_below(&self, i: usize, j: usize) -> bool {
        self.0.get(i, j) && !self.0.get(j, i)
    }

    pub fn relation(&self) -> &FiniteRelation {
        &self.0
    }

    pub fn into_relation(self) -> FiniteRelation {
        self.0
    }

    /// Restriction to `vertices`; a sub-quasi-order, re-indexed by position.
    pub fn induced(&self, vertices: &[usize]) -> QuasiOrder {
        QuasiOrder(self.0.induced(vertices))
    }

    pub fn is_chain(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(a, &u)| set[a + 1..].iter().all(|&v| self.comparable(u, v)))
    }

    pub fn is_antichain(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(a, &u)| set[a + 1..].iter().all(|&v| u != v && !self.comparable(u, v)))
    }

    /// The incomparability graph ⊥.
    pub fn incomparability_graph(&self) -> Graph {
        Graph(derive(self, Derived::Incomparable))
    }
}

/// An irreflexive, symmetric relation.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Graph(FiniteRelation);

impl Graph {
    pub fn new(rel: FiniteRelation) -> Result<Self> {
        if let Some(i) = (0..rel.n()).find(|&i| rel.get(i, i)) {
            return Err(Error::NotGraph(format!("loop at vertex {i}")));
        }
        if let Some((i, j)) = rel.pairs().into_iter().find(|&(i, j)| !rel.get(j, i)) {
            return Err(Error::NotGraph(format!("edge ({i}, {j}) has no reverse")));
        }
        Ok(Graph(rel))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(FiniteRelation::parse(text)?)
    }

    pub fn edgeless(n: usize) -> Self {
        Graph(FiniteRelation::empty(n))
    }

    pub fn complete(n: usize) -> Self {
        Graph(FiniteRelation::full(n).difference(&FiniteRelation::identity(n)))
    }

    /// Builds a graph from undirected edges. Panics on loops or out-of-range ends.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut r = FiniteRelation::empty(n);
        for &(u, v) in edges {
            assert_ne!(u, v, "loop at {u}");
            r.set(u, v, true);
            r.set(v, u, true);
        }
        Graph(r)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.0.n()
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.0.get(u, v)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.0.row(v).ones()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.0.row(v).count_ones(..)
    }

    /// Undirected edges `(u, v)` with `u < v`, lexicographically ordered.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.0.pairs().into_iter().filter(|&(u, v)| u < v).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.0.count() / 2
    }

    pub fn relation(&self) -> &FiniteRelation {
        &self.0
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn induced(&self, vertices: &[usize]) -> Graph {
        Graph(self.0.induced(vertices))
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(a, &u)| set[a + 1..].iter().all(|&v| !self.adjacent(u, v)))
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(a, &u)| set[a + 1..].iter().all(|&v| u == v || self.adjacent(u, v)))
    }

    /// Adjacency lists, for the search routines.
    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        (0..self.n()).map(|v| self.neighbors(v).collect()).collect()
    }

    pub fn to_text(&self) -> String {
        self.0.to_text()
    }
}

/// Relations derived from a quasi-order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derived {
    Comparable,
    Equivalence,
    Incomparable,
    Strict,
}

pub fn derive(q: &QuasiOrder, kind: Derived) -> FiniteRelation {
    let n = q.n();
    let mut out = FiniteRelation::empty(n);
    for i in 0..n {
        for j in 0..n {
            let related = match kind {
                Derived::Comparable => q.comparable(i, j),
                Derived::Equivalence => q.equivalent(i, j),
                Derived::Incomparable => i != j && !q.comparable(i, j),
                Derived::Strict => q.strictly_below(i, j),
            };
            if related {
                out.set(i, j, true);
            }
        }
    }
    out
}

/// The partial order on ≈-classes of a quasi-order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientPoset {
    /// Classes ordered by least member, each sorted ascending.
    pub classes: Vec<Vec<usize>>,
    pub order: QuasiOrder,
    pub class_of: Vec<usize>,
}

impl QuotientPoset {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Least member of each class.
    pub fn representatives(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }
}

pub fn quotient(q: &QuasiOrder) -> QuotientPoset {
    let n = q.n();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if class_of[v] != usize::MAX {
            continue;
        }
        let idx = classes.len();
        let members: Vec<usize> = (v..n).filter(|&u| q.equivalent(v, u)).collect();
        for &u in &members {
            class_of[u] = idx;
        }
        classes.push(members);
    }
    let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    QuotientPoset {
        order: q.induced(&reps),
        classes,
        class_of,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalKind {
    /// `[x, y] = {z : x R z R y}`
    Closed,
    /// `(x, y] = [x, y]` minus the ≈-class of `x`
    OpenClosed,
}

pub fn interval(q: &QuasiOrder, x: usize, y: usize, kind: IntervalKind) -> Result<Vec<usize>> {
    q.relation().check_index(x)?;
    q.relation().check_index(y)?;
    Ok((0..q.n())
        .filter(|&z| q.le(x, z) && q.le(z, y))
        .filter(|&z| kind == IntervalKind::Closed || !q.equivalent(x, z))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `R^v = {y : v R y}`
    Vertical,
    /// `R_v = {x : x R v}`
    Horizontal,
}

pub fn section(r: &FiniteRelation, v: usize, side: Side) -> Result<Vec<usize>> {
    r.check_index(v)?;
    Ok(match side {
        Side::Vertical => r.row(v).ones().collect(),
        Side::Horizontal => (0..r.n()).filter(|&x| r.get(x, v)).collect(),
    })
}

/// Largest ≈-class the generator will create by merging.
pub const MAX_MERGED_CLASS: usize = 3;

const MERGE_PROBABILITY: f64 = 0.08;

/// Deterministic random quasi-order.
///
/// Draws a random linear order, keeps each forward pair with probability
/// `density`, closes transitively and reflexively, then occasionally collapses
/// a comparable pair into one ≈-class (never beyond [`MAX_MERGED_CLASS`]).
pub fn random_quasi_order(n: usize, density: f64, seed: u64) -> QuasiOrder {
    let density = if density.is_nan() { 0.0 } else { density.clamp(0.0, 1.0) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);

    let mut rel = FiniteRelation::identity(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                rel.set(perm[a], perm[b], true);
            }
        }
    }
    let mut rel = rel.transitive_closure();

    for u in 0..n {
        for v in 0..n {
            if u == v || !rel.get(u, v) || rel.get(v, u) {
                continue;
            }
            if !rng.gen_bool(MERGE_PROBABILITY) {
                continue;
            }
            let mut candidate = rel.clone();
            candidate.set(v, u, true);
            let candidate = candidate.transitive_closure();
            let largest = (0..n)
                .map(|i| (0..n).filter(|&j| candidate.get(i, j) && candidate.get(j, i)).count())
                .max()
                .unwrap_or(0);
            if largest <= MAX_MERGED_CLASS {
                rel = candidate;
            }
        }
    }
    QuasiOrder(rel)
}
