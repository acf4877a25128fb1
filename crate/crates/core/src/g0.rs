//! Finite truncations of the G₀ graph and a homomorphism search.
//!
//! Level `N` lives on binary words of length `N`; vertex `v` is the word
//! spelling `v` in binary, most significant bit first. For each `n < N` the
//! level joins `s_n ⌢ i ⌢ c` to `s_n ⌢ (1-i) ⌢ c`, i.e. it flips bit `n` of
//! every word extending the `n`-th dense sequence.

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::relation::Graph;

/// Largest supported word length.
pub const MAX_LEVEL: usize = 20;

/// Sequences `s[n]` of length `n`, one per level below the horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseSequences {
    pub seqs: Vec<Vec<u8>>,
}

impl DenseSequences {
    pub fn len(&self) -> usize {
        self.seqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seqs.is_empty()
    }

    /// Checks `|s[n]| = n` and `{0,1}` entries.
    pub fn validate(&self) -> Result<()> {
        for (n, s) in self.seqs.iter().enumerate() {
            if s.len() != n || s.iter().any(|&b| b > 1) {
                return Err(Error::InvalidArgument(format!(
                    "s[{n}] must be a binary word of length {n}"
                )));
            }
        }
        Ok(())
    }

    /// Every word whose length-lex index is below the horizon is a prefix of
    /// some `s[n]`.
    pub fn is_dense_to_horizon(&self) -> bool {
        let horizon = self.seqs.len();
        (0..horizon).all(|idx| {
            let t = length_lex_word(idx);
            self.seqs.iter().any(|s| s.starts_with(&t))
        })
    }

    /// One word per line, `-` for the empty word.
    pub fn to_text(&self) -> String {
        self.seqs.iter().map(|s| word_to_string(s) + "\n").collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut seqs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let word = if line == "-" {
                Vec::new()
            } else {
                line.chars()
                    .map(|c| match c {
                        '0' => Ok(0),
                        '1' => Ok(1),
                        other => Err(Error::MalformedInput {
                            line: i + 1,
                            message: format!("unexpected character {other:?}"),
                        }),
                    })
                    .collect::<Result<Vec<u8>>>()?
            };
            seqs.push(word);
        }
        let out = DenseSequences { seqs };
        out.validate()?;
        Ok(out)
    }
}

fn word_to_string(w: &[u8]) -> String {
    if w.is_empty() {
        "-".into()
    } else {
        w.iter().map(|b| if *b == 1 { '1' } else { '0' }).collect()
    }
}

/// The `idx`-th binary word in length-then-lexicographic order
/// (ε, 0, 1, 00, 01, …).
pub fn length_lex_word(idx: usize) -> Vec<u8> {
    let mut len = 0;
    while (1usize << (len + 1)) - 1 <= idx {
        len += 1;
    }
    let offset = idx - ((1usize << len) - 1);
    (0..len).rev().map(|bit| (offset >> bit & 1) as u8).collect()
}

/// The canonical choice: `s[n]` is the `n`-th length-lex word padded with
/// zeros to length `n`.
pub fn dense_sequences(levels: usize) -> DenseSequences {
    DenseSequences {
        seqs: (0..levels)
            .map(|n| {
                let mut w = length_lex_word(n);
                w.resize(n, 0);
                w
            })
            .collect(),
    }
}

/// One truncation of G₀, stored sparsely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct G0Level {
    pub word_length: usize,
    /// Edges `(u, v)` with `u < v`, sorted.
    pub edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl G0Level {
    pub fn vertex_count(&self) -> usize {
        1 << self.word_length
    }

    pub fn adjacency_lists(&self) -> &[Vec<usize>] {
        &self.adj
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.adj[v] {
                if !std::mem::replace(&mut seen[u], true) {
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == n
    }

    pub fn is_bipartite(&self) -> bool {
        crate::coloring::bipartition(&self.adj).is_some()
    }

    /// Dense graph form; only sensible for small levels.
    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.vertex_count(), &self.edges)
    }

    /// Vertex label as a word, most significant bit first.
    pub fn label(&self, v: usize) -> String {
        word_to_string(
            &(0..self.word_length)
                .rev()
                .map(|b| (v >> b & 1) as u8)
                .collect::<Vec<_>>(),
        )
    }
}

/// Level `word_length` of G₀ for the canonical dense sequences.
pub fn g0_level(word_length: usize) -> Result<G0Level> {
    g0_level_from(&dense_sequences(word_length), word_length)
}

/// Level `word_length` of G₀ for caller-supplied sequences.
pub fn g0_level_from(seqs: &DenseSequences, word_length: usize) -> Result<G0Level> {
    if word_length > MAX_LEVEL {
        return Err(Error::BudgetExceeded { limit: 1 << MAX_LEVEL });
    }
    seqs.validate()?;
    if seqs.len() < word_length {
        return Err(Error::InvalidArgument(format!(
            "need {word_length} sequences, got {}",
            seqs.len()
        )));
    }
    let size = 1usize << word_length;
    let mut edges = Vec::with_capacity(size.saturating_sub(1));
    for (n, s) in seqs.seqs.iter().take(word_length).enumerate() {
        let prefix = s.iter().fold(0usize, |acc, &b| acc << 1 | b as usize);
        let tail = word_length - n - 1;
        for c in 0..1usize << tail {
            let low = (prefix << 1) << tail | c;
            let high = ((prefix << 1) | 1) << tail | c;
            edges.push((low, high));
        }
    }
    edges.sort_unstable();
    let mut adj = vec![Vec::new(); size];
    for &(u, v) in &edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    Ok(G0Level {
        word_length,
        edges,
        adj,
    })
}

/// Read-only adjacency, so the search runs on dense and sparse graphs alike.
pub trait Adjacency {
    fn vertex_count(&self) -> usize;
    fn neighbours(&self, v: usize) -> Vec<usize>;
}

impl Adjacency for Graph {
    fn vertex_count(&self) -> usize {
        self.n()
    }
    fn neighbours(&self, v: usize) -> Vec<usize> {
        self.neighbors(v).collect()
    }
}

impl Adjacency for G0Level {
    fn vertex_count(&self) -> usize {
        G0Level::vertex_count(self)
    }
    fn neighbours(&self, v: usize) -> Vec<usize> {
        self.adj[v].clone()
    }
}

/// Largest target graph supported by [`hom_search`].
pub const MAX_TARGET: usize = 64;
/// Largest source graph supported by [`hom_search`].
pub const MAX_SOURCE: usize = 1 << 14;

/// The lexicographically least edge-preserving map `g → h`, if one exists.
///
/// Vertices of `g` are assigned in index order, smallest target first, with
/// arc-consistency propagation after each assignment; the search is complete.
pub fn hom_search<G: Adjacency + ?Sized>(g: &G, h: &Graph, budget: Budget) -> Result<Option<Vec<usize>>> {
    let n = g.vertex_count();
    let m = h.n();
    if m > MAX_TARGET || n > MAX_SOURCE {
        return Err(Error::InvalidArgument(format!(
            "hom_search supports |g| ≤ {MAX_SOURCE} and |h| ≤ {MAX_TARGET}"
        )));
    }
    let g_adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbours(v)).collect();
    // support[a] = targets adjacent to a
    let support: Vec<u64> = (0..m)
        .map(|a| h.neighbors(a).fold(0u64, |acc, b| acc | 1 << b))
        .collect();
    let full: u64 = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    if m == 0 {
        return Ok(None);
    }

    let allowed = |dom: u64| -> u64 {
        let mut acc = 0;
        let mut bits = dom;
        while bits != 0 {
            let a = bits.trailing_zeros() as usize;
            acc |= support[a];
            bits &= bits - 1;
        }
        acc
    };

    let mut domains = vec![full; n];
    let mut trail: Vec<(usize, u64)> = Vec::new();

    // Revise neighbours of every vertex in `queue` until stable.
    let propagate = |domains: &mut Vec<u64>, trail: &mut Vec<(usize, u64)>, mut queue: Vec<usize>| -> bool {
        while let Some(v) = queue.pop() {
            let ok = allowed(domains[v]);
            for &u in &g_adj[v] {
                let narrowed = domains[u] & ok;
                if narrowed != domains[u] {
                    if narrowed == 0 {
                        return false;
                    }
                    trail.push((u, domains[u]));
                    domains[u] = narrowed;
                    queue.push(u);
                }
            }
        }
        true
    };

    if !propagate(&mut domains, &mut trail, (0..n).collect()) {
        return Ok(None);
    }
    trail.clear();

    let mut meter = budget.meter();
    // Each frame: vertex, trail length on entry, least value not yet tried.
    let mut frames: Vec<(usize, usize, u32)> = vec![(0, 0, 0)];
    while let Some(frame) = frames.last_mut() {
        meter.tick()?;
        let (v, mark, next) = *frame;
        while trail.len() > mark {
            let (u, old) = trail.pop().unwrap();
            domains[u] = old;
        }
        let candidates = if next >= 64 { 0 } else { domains[v] & (u64::MAX << next) };
        if candidates == 0 {
            frames.pop();
            continue;
        }
        let a = candidates.trailing_zeros();
        frame.2 = a + 1;
        trail.push((v, domains[v]));
        domains[v] = 1 << a;
        if propagate(&mut domains, &mut trail, vec![v]) {
            if v + 1 == n {
                return Ok(Some(domains.iter().map(|d| d.trailing_zeros() as usize).collect()));
            }
            frames.push((v + 1, trail.len(), 0));
        }
    }
    Ok(None)
}
