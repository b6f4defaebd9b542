//! Folded subgroup graphs for finitely generated subgroups of the free group.
//!
//! [`fold`] builds the Stallings graph of `<generators>`: a basepointed,
//! deterministic (in both directions) core graph. Membership is path
//! reading from the basepoint, the rank is `E - V + 1`, and a free basis is
//! read off a breadth-first spanning tree.
//!
//! Graphs are stored in a canonical numbering (breadth-first from the
//! basepoint, neighbours visited by generator index, outgoing before
//! incoming), so two folded graphs are basepoint-isomorphic exactly when
//! they compare equal.

mod closure;
mod fold;

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::words::{GeneratorMap, Letter, Sign, Word};

pub use closure::{support_closure, ClosureError, SupportClosure};

/// A directed edge `source --x_label--> target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GraphEdge {
    pub source: usize,
    pub label: u32,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupGraph {
    vertex_count: usize,
    edges: Vec<GraphEdge>,
    folded: bool,
    out: Vec<BTreeMap<u32, usize>>,
    inn: Vec<BTreeMap<u32, usize>>,
    /// Breadth-first tree edge into each vertex (none for the basepoint).
    tree_edge: Vec<Option<usize>>,
    /// Basis position of each non-tree edge.
    basis_slot: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {0:?} references a vertex outside the graph")]
    VertexOutOfRange(GraphEdge),
    #[error("graph is not connected to the basepoint")]
    Disconnected,
}

/// Result of expressing a word in the basis extracted from a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisExpression {
    pub member: bool,
    /// Word over basis symbols `b_j` (generator index `j`); the identity
    /// when `member` is false.
    pub expression: Word,
}

impl BasisExpression {
    /// Substitutes `basis[j]` for each `b_j` and reduces.
    pub fn substitute(&self, basis: &[Word]) -> Word {
        substitute_symbols(&self.expression, basis)
    }
}

/// Replaces symbol `j` in `expression` by `words[j]`.
pub fn substitute_symbols(expression: &Word, words: &[Word]) -> Word {
    let map = GeneratorMap::from_assignments(
        words
            .iter()
            .enumerate()
            .map(|(j, w)| (j as u32, w.clone())),
    );
    map.apply(expression)
}

/// Number of letters across all generators, i.e. the petal edge count that
/// [`fold_with_order`] permutes.
pub fn petal_edge_count(generators: &[Word]) -> usize {
    generators.iter().map(Word::len).sum()
}

pub fn fold(generators: &[Word]) -> SubgroupGraph {
    let order: Vec<usize> = (0..petal_edge_count(generators)).collect();
    fold_with_order(generators, &order)
}

/// Folds with petal edges inserted in the given order. The result does not
/// depend on the order.
pub fn fold_with_order(generators: &[Word], order: &[usize]) -> SubgroupGraph {
    fold_tracked_with_order(generators, order).graph
}

/// Folded graph that also expresses members in the input generators.
#[derive(Clone, Debug)]
pub struct TrackedGraph {
    graph: SubgroupGraph,
    weights: Vec<Word>,
    generator_count: usize,
    relation_found: bool,
}

impl TrackedGraph {
    pub fn graph(&self) -> &SubgroupGraph {
        &self.graph
    }

    /// Whether the input generators are a free basis of their subgroup.
    pub fn independent(&self) -> bool {
        !self.relation_found && self.graph.rank() == self.generator_count
    }

    /// Expression of `word` in the input generators (generator index `j`
    /// stands for input `j`). Unique when [`Self::independent`] holds.
    pub fn express(&self, word: &Word) -> Option<Word> {
        let path = self.graph.read_path(word)?;
        let mut out = Word::identity();
        for (edge, sign) in path {
            let weight = &self.weights[edge];
            out = match sign {
                Sign::Pos => out.product(weight),
                Sign::Neg => out.product(&weight.inverse()),
            };
        }
        Some(out)
    }
}

pub fn fold_tracked(generators: &[Word]) -> TrackedGraph {
    let order: Vec<usize> = (0..petal_edge_count(generators)).collect();
    fold_tracked_with_order(generators, &order)
}

pub fn fold_tracked_with_order(generators: &[Word], order: &[usize]) -> TrackedGraph {
    let (vertex_count, petals) = fold::petal_edges(generators);
    assert_eq!(order.len(), petals.len(), "order must permute the petal edges");
    let folded = fold::fold_petals(vertex_count, petals, order);
    let raw: Vec<GraphEdge> = folded
        .edges
        .iter()
        .map(|e| GraphEdge {
            source: e.source,
            label: e.label,
            target: e.target,
        })
        .collect();
    let (graph, positions) = SubgroupGraph::canonical(folded.vertex_count, &raw)
        .expect("folding yields a connected graph");
    let mut weights = vec![Word::identity(); graph.edges.len()];
    for (raw_index, edge) in folded.edges.into_iter().enumerate() {
        weights[positions[raw_index]] = edge.weight;
    }
    TrackedGraph {
        graph,
        weights,
        generator_count: generators.len(),
        relation_found: folded.relation_found,
    }
}

impl SubgroupGraph {
    /// Builds a graph from explicit edges with basepoint 0, renumbering the
    /// vertices canonically. The graph need not be folded.
    pub fn from_edges(vertex_count: usize, edges: &[GraphEdge]) -> Result<Self, GraphError> {
        Self::canonical(vertex_count, edges).map(|(g, _)| g)
    }

    /// Canonical renumbering; also returns the new position of every input
    /// edge.
    fn canonical(
        vertex_count: usize,
        edges: &[GraphEdge],
    ) -> Result<(SubgroupGraph, Vec<usize>), GraphError> {
        let vertex_count = vertex_count.max(1);
        if let Some(bad) = edges
            .iter()
            .find(|e| e.source >= vertex_count || e.target >= vertex_count)
        {
            return Err(GraphError::VertexOutOfRange(*bad));
        }
        // Half-edges per vertex: (label, outgoing-first, edge index, neighbour).
        let mut halves: Vec<Vec<(u32, u8, usize, usize)>> = vec![Vec::new(); vertex_count];
        for (i, e) in edges.iter().enumerate() {
            halves[e.source].push((e.label, 0, i, e.target));
            halves[e.target].push((e.label, 1, i, e.source));
        }
        for h in &mut halves {
            h.sort();
        }
        let mut number = vec![usize::MAX; vertex_count];
        number[0] = 0;
        let mut next = 1;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &(_, _, _, w) in &halves[v] {
                if number[w] == usize::MAX {
                    number[w] = next;
                    next += 1;
                    queue.push_back(w);
                }
            }
        }
        if number.contains(&usize::MAX) {
            // Isolated leftovers with no edges are tolerated; anything with
            // an edge must be reachable.
            let touched: Vec<bool> = (0..vertex_count)
                .map(|v| v == 0 || !halves[v].is_empty())
                .collect();
            if (0..vertex_count).any(|v| touched[v] && number[v] == usize::MAX) {
                return Err(GraphError::Disconnected);
            }
        }
        let mut renamed: Vec<(GraphEdge, usize)> = edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                (
                    GraphEdge {
                        source: number[e.source],
                        label: e.label,
                        target: number[e.target],
                    },
                    i,
                )
            })
            .collect();
        renamed.sort();
        let mut positions = vec![0; edges.len()];
        for (pos, (_, original)) in renamed.iter().enumerate() {
            positions[*original] = pos;
        }
        let edges: Vec<GraphEdge> = renamed.into_iter().map(|(e, _)| e).collect();
        Ok((SubgroupGraph::with_edges(next, edges), positions))
    }

    fn with_edges(vertex_count: usize, edges: Vec<GraphEdge>) -> SubgroupGraph {
        let mut out = vec![BTreeMap::new(); vertex_count];
        let mut inn = vec![BTreeMap::new(); vertex_count];
        let mut folded = true;
        for (i, e) in edges.iter().enumerate() {
            folded &= out[e.source].insert(e.label, i).is_none();
            folded &= inn[e.target].insert(e.label, i).is_none();
        }

        let mut halves: Vec<Vec<(u32, u8, usize, usize)>> = vec![Vec::new(); vertex_count];
        for (i, e) in edges.iter().enumerate() {
            halves[e.source].push((e.label, 0, i, e.target));
            halves[e.target].push((e.label, 1, i, e.source));
        }
        for h in &mut halves {
            h.sort();
        }
        let mut tree_edge = vec![None; vertex_count];
        let mut seen = vec![false; vertex_count];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &(_, _, i, w) in &halves[v] {
                if !seen[w] {
                    seen[w] = true;
                    tree_edge[w] = Some(i);
                    queue.push_back(w);
                }
            }
        }
        let mut is_tree = vec![false; edges.len()];
        for i in tree_edge.iter().flatten() {
            is_tree[*i] = true;
        }
        let mut slot = 0;
        let basis_slot = is_tree
            .iter()
            .map(|&t| {
                if t {
                    None
                } else {
                    slot += 1;
                    Some(slot - 1)
                }
            })
            .collect();
        SubgroupGraph {
            vertex_count,
            edges,
            folded,
            out,
            inn,
            tree_edge,
            basis_slot,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn basepoint(&self) -> usize {
        0
    }

    /// No vertex has two outgoing, or two incoming, edges with one label.
    pub fn is_folded(&self) -> bool {
        self.folded
    }

    /// `E - V + 1`.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.vertex_count
    }

    fn step(&self, vertex: usize, letter: Letter) -> Option<(usize, usize)> {
        match letter.sign {
            Sign::Pos => self.out[vertex]
                .get(&letter.index)
                .map(|&e| (e, self.edges[e].target)),
            Sign::Neg => self.inn[vertex]
                .get(&letter.index)
                .map(|&e| (e, self.edges[e].source)),
        }
    }

    /// Edges traversed reading `word` from the basepoint, if it labels a
    /// closed path there.
    fn read_path(&self, word: &Word) -> Option<Vec<(usize, Sign)>> {
        debug_assert!(self.folded, "path reading needs a folded graph");
        let mut at = 0;
        let mut path = Vec::with_capacity(word.len());
        for &letter in word.letters() {
            let (edge, next) = self.step(at, letter)?;
            path.push((edge, letter.sign));
            at = next;
        }
        (at == 0).then_some(path)
    }

    pub fn contains(&self, word: &Word) -> bool {
        self.read_path(word).is_some()
    }

    /// Label of the spanning-tree path from the basepoint to `vertex`.
    fn tree_path(&self, mut vertex: usize) -> Word {
        let mut letters = Vec::new();
        while let Some(e) = self.tree_edge[vertex] {
            let edge = self.edges[e];
            if edge.target == vertex {
                letters.push(Letter::pos(edge.label));
                vertex = edge.source;
            } else {
                letters.push(Letter::neg(edge.label));
                vertex = edge.target;
            }
        }
        letters.reverse();
        Word::from_letters(letters)
    }

    /// Free basis read off the spanning tree: one word per non-tree edge,
    /// in canonical edge order.
    pub fn basis(&self) -> Vec<Word> {
        self.edges
            .iter()
            .zip(&self.basis_slot)
            .filter(|(_, slot)| slot.is_some())
            .map(|(e, _)| {
                self.tree_path(e.source)
                    .product(&Word::generator(e.label))
                    .product(&self.tree_path(e.target).inverse())
            })
            .collect()
    }

    pub fn member_express(&self, word: &Word) -> BasisExpression {
        match self.read_path(word) {
            None => BasisExpression {
                member: false,
                expression: Word::identity(),
            },
            Some(path) => BasisExpression {
                member: true,
                expression: Word::from_letters(path.into_iter().filter_map(|(e, sign)| {
                    self.basis_slot[e].map(|j| Letter::new(j as u32, sign))
                })),
            },
        }
    }

    /// Graphviz rendering; the basepoint is drawn as a double circle.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph subgroup {\n  rankdir=LR;\n");
        for v in 0..self.vertex_count {
            let shape = if v == 0 { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  {v} [shape={shape}];");
        }
        for e in &self.edges {
            let _ = writeln!(out, "  {} -> {} [label=\"x{}\"];", e.source, e.target, e.label);
        }
        out.push_str("}\n");
        out
    }
}

pub fn member_express(graph: &SubgroupGraph, word: &Word) -> BasisExpression {
    graph.member_express(word)
}

pub fn graph_basis(graph: &SubgroupGraph) -> Vec<Word> {
    graph.basis()
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: usize,
    basepoint: usize,
    edges: Vec<(usize, u32, usize)>,
    rank: usize,
    folded: bool,
}

impl Serialize for SubgroupGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GraphJson {
            vertices: self.vertex_count,
            basepoint: 0,
            edges: self
                .edges
                .iter()
                .map(|e| (e.source, e.label, e.target))
                .collect(),
            rank: self.rank(),
            folded: self.folded,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SubgroupGraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = GraphJson::deserialize(deserializer)?;
        if raw.basepoint != 0 {
            return Err(serde::de::Error::custom("basepoint must be vertex 0"));
        }
        let edges: Vec<GraphEdge> = raw
            .edges
            .iter()
            .map(|&(source, label, target)| GraphEdge {
                source,
                label,
                target,
            })
            .collect();
        SubgroupGraph::from_edges(raw.vertices, &edges).map_err(serde::de::Error::custom)
    }
}
