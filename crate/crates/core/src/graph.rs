//! Directed graphs (loops allowed, no multiple edges) and their graph systems.
//!
//! The graph system of `Γ = (V, E)` has `E₁ = V`, `E₂ = E` and `Eₙ` the vertex
//! sequences of paths with `n − 1` edges. It is the word system excluding
//! exactly the non-edges `(V × V) \ E`, and `#Eₙ = S(A^{n−1})`, the sum of the
//! entries of a power of the adjacency matrix.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::words::{ExclusionSet, Letter, Level, Word, WordSystem};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    vertices: usize,
    edges: BTreeSet<(usize, usize)>,
}

type BigMatrix = Vec<Vec<BigUint>>;

impl Graph {
    pub fn new(vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        if let Some(&(i, j)) = edges.iter().find(|&&(i, j)| i >= vertices || j >= vertices) {
            return Err(Error::VertexOutOfRange {
                vertex: i.max(j),
                vertices,
            });
        }
        Ok(Graph { vertices, edges })
    }

    /// All `d²` ordered pairs, loops included.
    pub fn complete(vertices: usize) -> Self {
        let edges = (0..vertices)
            .flat_map(|i| (0..vertices).map(move |j| (i, j)))
            .collect();
        Graph { vertices, edges }
    }

    /// Centre `0` joined in both directions to each of `1..=leaves`.
    pub fn star(leaves: usize) -> Self {
        let edges = (1..=leaves).flat_map(|j| [(0, j), (j, 0)]).collect();
        Graph {
            vertices: leaves + 1,
            edges,
        }
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }

    /// The graph on the same vertices with exactly the missing pairs as edges.
    pub fn complement(&self) -> Graph {
        let edges = (0..self.vertices)
            .flat_map(|i| (0..self.vertices).map(move |j| (i, j)))
            .filter(|e| !self.edges.contains(e))
            .collect();
        Graph {
            vertices: self.vertices,
            edges,
        }
    }

    /// Non-edges as excluded words of length 2.
    pub fn non_edges(&self) -> ExclusionSet {
        let words = self
            .complement()
            .edges
            .into_iter()
            .map(|(i, j)| Word::new(vec![i as Letter, j as Letter]));
        ExclusionSet::new(self.vertices, words).expect("vertices are letters")
    }

    pub fn adjacency(&self) -> Vec<Vec<u8>> {
        let mut a = vec![vec![0u8; self.vertices]; self.vertices];
        for &(i, j) in &self.edges {
            a[i][j] = 1;
        }
        a
    }

    fn big_adjacency(&self) -> BigMatrix {
        self.adjacency()
            .into_iter()
            .map(|row| row.into_iter().map(BigUint::from).collect())
            .collect()
    }
}

/// `Eₙ` for `n = 0..=horizon`, built by extending paths one edge at a time.
pub fn graph_system(graph: &Graph, horizon: usize) -> WordSystem {
    let mut successors = vec![Vec::new(); graph.vertices];
    for &(i, j) in &graph.edges {
        successors[i].push(j as Letter);
    }
    let mut levels: Vec<Level> = vec![Level::from([Word::empty()])];
    if horizon >= 1 {
        levels.push((0..graph.vertices as Letter).map(Word::letter).collect());
    }
    for _ in 2..=horizon {
        let next = levels
            .last()
            .unwrap()
            .iter()
            .flat_map(|path| {
                let last = *path.letters().last().unwrap() as usize;
                successors[last].iter().map(move |&v| path.push(v))
            })
            .collect();
        levels.push(next);
    }
    WordSystem::new_unchecked(graph.vertices, levels)
}

fn multiply(a: &BigMatrix, b: &BigMatrix) -> BigMatrix {
    let d = a.len();
    let mut out = vec![vec![BigUint::zero(); d]; d];
    for i in 0..d {
        for k in 0..d {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..d {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

fn power(a: &BigMatrix, mut exponent: usize) -> BigMatrix {
    let d = a.len();
    let mut result: BigMatrix = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i == j {
                        BigUint::one()
                    } else {
                        BigUint::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut base = a.clone();
    while exponent > 0 {
        if exponent & 1 == 1 {
            result = multiply(&result, &base);
        }
        exponent >>= 1;
        if exponent > 0 {
            base = multiply(&base, &base);
        }
    }
    result
}

fn entry_sum(m: &BigMatrix) -> BigUint {
    m.iter().flatten().sum()
}

/// `S(A^{n−1})`, the number of paths with `n − 1` edges. `n = 0` counts the
/// empty path alone.
pub fn path_count(graph: &Graph, n: usize) -> BigUint {
    if n == 0 {
        return BigUint::one();
    }
    entry_sum(&power(&graph.big_adjacency(), n - 1))
}

/// Both sides of `S(A²) = S(Ā²) + d·(S(A) − S(Ā))`, evaluated independently.
pub fn complement_identity(graph: &Graph) -> (BigInt, BigInt) {
    let a = graph.big_adjacency();
    let complement = graph.complement().big_adjacency();
    let lhs = BigInt::from(entry_sum(&multiply(&a, &a)));
    let s_complement_sq = BigInt::from(entry_sum(&multiply(&complement, &complement)));
    let s_a = BigInt::from(entry_sum(&a));
    let s_complement = BigInt::from(entry_sum(&complement));
    let rhs = s_complement_sq + BigInt::from(graph.vertices) * (s_a - s_complement);
    (lhs, rhs)
}

/// Search options for [`max_paths`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MaxPathsOptions {
    /// Restrict to graphs whose out-degrees are non-increasing in the vertex
    /// index. Every graph is isomorphic to such a graph, so the maximum is
    /// unchanged.
    pub canonical: bool,
    /// Maximum number of search nodes; `None` for unlimited.
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxPaths {
    /// Largest `S(A²)` over graphs with the given vertex and edge counts.
    pub maximum: u64,
    /// Lexicographically least maximizer (by sorted edge list) among the
    /// graphs searched.
    pub witness: Graph,
    /// Search nodes visited.
    pub nodes: u64,
}

struct Search {
    d: usize,
    target: usize,
    canonical: bool,
    budget: Option<u64>,
    nodes: u64,
    out_deg: Vec<usize>,
    in_deg: Vec<usize>,
    chosen: Vec<(usize, usize)>,
    best: Option<(u64, Vec<(usize, usize)>)>,
}

impl Search {
    fn value(&self) -> u64 {
        self.out_deg
            .iter()
            .zip(&self.in_deg)
            .map(|(o, i)| (o * i) as u64)
            .sum()
    }

    /// Upper bound on the value reachable by adding `remaining` more edges
    /// at positions `>= slot`. Adding edge `(i, j)` raises `S(A²)` by
    /// `in(i) + out(j) + [i = j] ≤ 2d`, and both maxima grow by at most one
    /// per added edge.
    fn bound(&self, remaining: usize) -> u64 {
        let max_in = *self.in_deg.iter().max().unwrap_or(&0);
        let max_out = *self.out_deg.iter().max().unwrap_or(&0);
        let mut total = self.value();
        for step in 0..remaining {
            total += (max_in + max_out + 2 * step + 1).min(2 * self.d) as u64;
        }
        total
    }

    fn run(&mut self, slot: usize) -> std::result::Result<(), ()> {
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            return Err(());
        }
        let remaining = self.target - self.chosen.len();
        if remaining == 0 {
            let value = self.value();
            if self.best.as_ref().is_none_or(|(b, _)| value > *b) {
                self.best = Some((value, self.chosen.clone()));
            }
            return Ok(());
        }
        let total_slots = self.d * self.d;
        if total_slots - slot < remaining {
            return Ok(());
        }
        if let Some((best, _)) = &self.best {
            if self.bound(remaining) <= *best {
                return Ok(());
            }
        }
        let (i, j) = (slot / self.d, slot % self.d);
        if self.canonical && j == 0 && i > 0 {
            // row i-1 is complete: out-degrees must not increase, and later rows
            // cannot exceed the previous one
            let cap = self.out_deg[i - 1];
            if i >= 2 && cap > self.out_deg[i - 2] {
                return Ok(());
            }
            if remaining > cap * (self.d - i) {
                return Ok(());
            }
        }
        let row_cap_ok = !self.canonical || i == 0 || self.out_deg[i] < self.out_deg[i - 1];
        if row_cap_ok {
            self.chosen.push((i, j));
            self.out_deg[i] += 1;
            self.in_deg[j] += 1;
            let result = self.run(slot + 1);
            self.out_deg[i] -= 1;
            self.in_deg[j] -= 1;
            self.chosen.pop();
            result?;
        }
        self.run(slot + 1)
    }
}

/// Maximum of `S(A²)` over all graphs on `vertices` vertices with exactly
/// `edges` edges, by exhaustive branch-and-bound over edge subsets in
/// lexicographic order.
///
/// When the budget runs out, [`Error::BudgetExceeded`] carries the best
/// value found so far as a lower bound.
pub fn max_paths(vertices: usize, edges: usize, options: MaxPathsOptions) -> Result<MaxPaths> {
    if edges > vertices * vertices {
        return Err(Error::InvalidParameter(format!(
            "{edges} edges do not fit on {vertices} vertices"
        )));
    }
    let mut search = Search {
        d: vertices,
        target: edges,
        canonical: options.canonical,
        budget: options.budget,
        nodes: 0,
        out_deg: vec![0; vertices],
        in_deg: vec![0; vertices],
        chosen: Vec::with_capacity(edges),
        best: None,
    };
    let finished = search.run(0).is_ok();
    let to_graph = |edges: Vec<(usize, usize)>| Graph::new(vertices, edges).expect("in range");
    match (finished, search.best) {
        (true, Some((maximum, witness))) => Ok(MaxPaths {
            maximum,
            witness: to_graph(witness),
            nodes: search.nodes,
        }),
        (true, None) => unreachable!("some graph with {edges} edges always exists"),
        (false, best) => {
            let (lower_bound, witness) = match best {
                Some((v, w)) => (v, Some(to_graph(w))),
                None => (0, None),
            };
            Err(Error::BudgetExceeded {
                lower_bound,
                witness,
            })
        }
    }
}
