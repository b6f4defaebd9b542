//! Folding engine.
//!
//! Vertices live in a union-find partition. Each edge carries a weight in
//! the free group on the input generators (`g_0, g_1, ...`, encoded as
//! generator indices), with the invariant that the weights read along any
//! closed path at the basepoint multiply to an expression of that path's
//! label in the input generators. Petal edges start with trivial weights
//! except the closing edge of petal `j`, which carries `g_j`.
//!
//! Identifying two edges first re-gauges one endpoint class by a group
//! element `c` (edges leaving the class get `c * w`, edges entering it get
//! `w * c^-1`), which leaves closed-path weights at the basepoint unchanged
//! as long as the basepoint is outside the class. After gauging, the two
//! edges carry the same weight and can be merged. Identifying two parallel
//! edges with different weights exposes a relation among the inputs.

use std::collections::{BTreeMap, VecDeque};

use crate::words::{Sign, Word};

pub(crate) struct RawEdge {
    pub source: usize,
    pub label: u32,
    pub target: usize,
    pub weight: Word,
}

pub(crate) struct Folded {
    pub vertex_count: usize,
    pub edges: Vec<RawEdge>,
    /// Some parallel identification merged edges with different weights.
    pub relation_found: bool,
}

/// Petal edges for `generators`, in letter order. Vertex 0 is the basepoint.
pub(crate) fn petal_edges(generators: &[crate::words::Word]) -> (usize, Vec<RawEdge>) {
    let mut vertex_count = 1;
    let mut edges = Vec::new();
    for (j, word) in generators.iter().enumerate() {
        let letters = word.letters();
        let m = letters.len();
        if m == 0 {
            continue;
        }
        let mut from = 0;
        for (t, letter) in letters.iter().enumerate() {
            let to = if t + 1 == m {
                0
            } else {
                vertex_count += 1;
                vertex_count - 1
            };
            let closing = t + 1 == m;
            let symbol = Word::generator(j as u32);
            let (source, target, weight) = match letter.sign {
                Sign::Pos => (from, to, if closing { symbol } else { Word::identity() }),
                Sign::Neg => (
                    to,
                    from,
                    if closing {
                        symbol.inverse()
                    } else {
                        Word::identity()
                    },
                ),
            };
            edges.push(RawEdge {
                source,
                label: letter.index,
                target,
                weight,
            });
            from = to;
        }
    }
    (vertex_count, edges)
}

struct Folder {
    parent: Vec<usize>,
    size: Vec<usize>,
    edges: Vec<RawEdge>,
    alive: Vec<bool>,
    out: Vec<BTreeMap<u32, usize>>,
    inn: Vec<BTreeMap<u32, usize>>,
    queue: VecDeque<usize>,
    relation_found: bool,
}

impl Folder {
    fn find(&mut self, mut v: usize) -> usize {
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[v] != root {
            let next = self.parent[v];
            self.parent[v] = root;
            v = next;
        }
        root
    }

    fn register(&mut self, e: usize) {
        if !self.alive[e] {
            return;
        }
        let label = self.edges[e].label;
        let s = self.find(self.edges[e].source);
        let d = self.find(self.edges[e].target);
        if let Some(&f) = self.out[s].get(&label) {
            if f != e && self.alive[f] {
                self.identify(e, f);
                return;
            }
        }
        if let Some(&f) = self.inn[d].get(&label) {
            if f != e && self.alive[f] {
                self.identify(e, f);
                return;
            }
        }
        self.out[s].insert(label, e);
        self.inn[d].insert(label, e);
    }

    /// Merges edge `e` into edge `f`; they share a label and one endpoint.
    fn identify(&mut self, e: usize, f: usize) {
        let se = self.find(self.edges[e].source);
        let de = self.find(self.edges[e].target);
        let sf = self.find(self.edges[f].source);
        let df = self.find(self.edges[f].target);
        let base = self.find(0);
        let we = self.edges[e].weight.clone();
        let wf = self.edges[f].weight.clone();
        self.alive[e] = false;

        if se == sf && de == df {
            if we != wf {
                self.relation_found = true;
            }
            return;
        }
        let (x, y) = if se == sf {
            if de != base {
                self.gauge(de, &wf.inverse().product(&we));
            } else {
                self.gauge(df, &we.inverse().product(&wf));
            }
            (de, df)
        } else {
            debug_assert_eq!(de, df);
            if se != base {
                self.gauge(se, &wf.product(&we.inverse()));
            } else {
                self.gauge(sf, &we.product(&wf.inverse()));
            }
            (se, sf)
        };
        self.union(x, y);
    }

    fn gauge(&mut self, class: usize, c: &Word) {
        if c.is_identity() {
            return;
        }
        let c_inv = c.inverse();
        for e in 0..self.edges.len() {
            if !self.alive[e] {
                continue;
            }
            let s = self.find(self.edges[e].source);
            let d = self.find(self.edges[e].target);
            if s == class {
                self.edges[e].weight = c.product(&self.edges[e].weight);
            }
            if d == class {
                self.edges[e].weight = self.edges[e].weight.product(&c_inv);
            }
        }
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut root, mut child) = (self.find(a), self.find(b));
        if root == child {
            return;
        }
        if self.size[root] < self.size[child] {
            std::mem::swap(&mut root, &mut child);
        }
        self.parent[child] = root;
        self.size[root] += self.size[child];
        let out = std::mem::take(&mut self.out[child]);
        let inn = std::mem::take(&mut self.inn[child]);
        self.queue.extend(out.into_values());
        self.queue.extend(inn.into_values());
    }
}

/// Folds the petal graph, inserting edges in `order` (a permutation of the
/// petal edge indices), then trims hanging trees away from the basepoint.
pub(crate) fn fold_petals(vertex_count: usize, edges: Vec<RawEdge>, order: &[usize]) -> Folded {
    let n = edges.len();
    let mut folder = Folder {
        parent: (0..vertex_count).collect(),
        size: vec![1; vertex_count],
        alive: vec![true; n],
        edges,
        out: vec![BTreeMap::new(); vertex_count],
        inn: vec![BTreeMap::new(); vertex_count],
        queue: VecDeque::new(),
        relation_found: false,
    };
    for &e in order {
        folder.register(e);
        while let Some(next) = folder.queue.pop_front() {
            folder.register(next);
        }
    }

    // Resolve to representatives and trim.
    let mut live: Vec<RawEdge> = Vec::new();
    for e in 0..n {
        if folder.alive[e] {
            let source = folder.find(folder.edges[e].source);
            let target = folder.find(folder.edges[e].target);
            let edge = &folder.edges[e];
            live.push(RawEdge {
                source,
                label: edge.label,
                target,
                weight: edge.weight.clone(),
            });
        }
    }
    let base = folder.find(0);
    let live = trim(live, base, vertex_count);

    // Compact vertex ids; the basepoint becomes 0.
    let mut id = vec![usize::MAX; vertex_count];
    id[base] = 0;
    let mut next = 1;
    for edge in &live {
        for v in [edge.source, edge.target] {
            if id[v] == usize::MAX {
                id[v] = next;
                next += 1;
            }
        }
    }
    let edges = live
        .into_iter()
        .map(|e| RawEdge {
            source: id[e.source],
            label: e.label,
            target: id[e.target],
            weight: e.weight,
        })
        .collect();
    Folded {
        vertex_count: next,
        edges,
        relation_found: folder.relation_found,
    }
}

/// Repeatedly removes non-basepoint vertices of degree at most one.
fn trim(mut edges: Vec<RawEdge>, base: usize, vertex_count: usize) -> Vec<RawEdge> {
    loop {
        let mut degree = vec![0usize; vertex_count];
        for e in &edges {
            degree[e.source] += 1;
            degree[e.target] += 1;
        }
        let before = edges.len();
        edges.retain(|e| {
            let dangling = |v: usize| v != base && degree[v] <= 1;
            !(dangling(e.source) || dangling(e.target))
        });
        if edges.len() == before {
            return edges;
        }
    }
}
