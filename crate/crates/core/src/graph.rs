//! Serre graphs labeled over `X ∪ X⁻¹`, folding, trimming, the core of a pointed
//! graph, and label-preserving morphisms.
//!
//! Edges are stored as half-edge pairs: half-edge `2k` carries the positive label of
//! geometric edge `k` and half-edge `2k + 1` is its reverse, so `bar(h) = h ^ 1`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::{self, Write as _};

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::words::{Alphabet, Letter, Word};

pub type VertexId = usize;
pub type HalfEdge = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph is not folded")]
    NotFolded,
    #[error("graph is not connected")]
    Disconnected,
    #[error("vertex {0} does not exist")]
    NoSuchVertex(VertexId),
    #[error("edges {0} and {1} cannot be folded: {2}")]
    NotFoldable(HalfEdge, HalfEdge, &'static str),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[inline]
pub fn bar(h: HalfEdge) -> HalfEdge {
    h ^ 1
}

/// An `X`-labeled graph. Frozen once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    alphabet: Alphabet,
    vertex_count: usize,
    origin: Vec<VertexId>,
    label: Vec<Letter>,
    out: Vec<Vec<HalfEdge>>,
}

/// Accumulates vertices and edges; edges may be given in either orientation.
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    alphabet: Alphabet,
    vertex_count: usize,
    edges: Vec<(VertexId, Letter, VertexId)>,
}

impl GraphBuilder {
    pub fn new(alphabet: &Alphabet) -> Self {
        GraphBuilder { alphabet: alphabet.clone(), vertex_count: 0, edges: Vec::new() }
    }

    pub fn with_vertices(alphabet: &Alphabet, n: usize) -> Self {
        GraphBuilder { alphabet: alphabet.clone(), vertex_count: n, edges: Vec::new() }
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Returns the half-edge running from `from` to `to`.
    pub fn add_edge(&mut self, from: VertexId, letter: Letter, to: VertexId) -> HalfEdge {
        self.alphabet.insert(letter.generator().clone());
        let h = 2 * self.edges.len();
        if letter.is_positive() {
            self.edges.push((from, letter, to));
            h
        } else {
            self.edges.push((to, letter.inverse(), from));
            bar(h)
        }
    }

    /// Adds a path spelling `word` from `from` to `to`, creating `|word| - 1` inner vertices.
    /// An empty word requires `from == to` and adds nothing.
    pub fn add_path(&mut self, from: VertexId, word: &Word, to: VertexId) -> Vec<HalfEdge> {
        let n = word.len();
        assert!(n > 0 || from == to, "empty path between distinct vertices");
        let mut current = from;
        let mut path = Vec::with_capacity(n);
        for (i, letter) in word.letters().iter().enumerate() {
            let next = if i + 1 == n { to } else { self.add_vertex() };
            path.push(self.add_edge(current, letter.clone(), next));
            current = next;
        }
        path
    }

    pub fn build(self) -> LabeledGraph {
        let mut origin = Vec::with_capacity(2 * self.edges.len());
        let mut label = Vec::with_capacity(2 * self.edges.len());
        let mut out = vec![Vec::new(); self.vertex_count];
        for (from, letter, to) in self.edges {
            assert!(from < self.vertex_count && to < self.vertex_count, "edge endpoint out of range");
            let h = origin.len();
            origin.push(from);
            origin.push(to);
            label.push(letter.clone());
            label.push(letter.inverse());
            out[from].push(h);
            out[to].push(h + 1);
        }
        LabeledGraph { alphabet: self.alphabet, vertex_count: self.vertex_count, origin, label, out }
    }
}

impl LabeledGraph {
    /// One vertex, no edges.
    pub fn point(alphabet: &Alphabet) -> Self {
        GraphBuilder::with_vertices(alphabet, 1).build()
    }

    /// The bouquet `R_X`: one vertex with a loop per generator.
    pub fn rose(alphabet: &Alphabet) -> Self {
        let mut b = GraphBuilder::with_vertices(alphabet, 1);
        for g in alphabet.generators() {
            b.add_edge(0, g.pos(), 0);
        }
        b.build()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.vertex_count
    }

    /// Number of geometric edges `{e, ē}`.
    pub fn edge_count(&self) -> usize {
        self.origin.len() / 2
    }

    pub fn half_edge_count(&self) -> usize {
        self.origin.len()
    }

    pub fn half_edges(&self) -> std::ops::Range<HalfEdge> {
        0..self.origin.len()
    }

    /// Positively labeled half-edges, one per geometric edge.
    pub fn positive_edges(&self) -> impl Iterator<Item = HalfEdge> {
        (0..self.origin.len()).step_by(2)
    }

    /// ι
    pub fn origin(&self, h: HalfEdge) -> VertexId {
        self.origin[h]
    }

    pub fn terminus(&self, h: HalfEdge) -> VertexId {
        self.origin[bar(h)]
    }

    pub fn label(&self, h: HalfEdge) -> &Letter {
        &self.label[h]
    }

    pub fn out(&self, v: VertexId) -> &[HalfEdge] {
        &self.out[v]
    }

    /// `|ι⁻¹(v)|`; a loop counts twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.out[v].len()
    }

    pub fn find_out(&self, v: VertexId, letter: &Letter) -> Option<HalfEdge> {
        self.out[v].iter().copied().find(|&h| &self.label[h] == letter)
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &h in &self.out[v] {
                let w = self.terminus(h);
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.vertex_count
    }

    pub fn is_folded(&self) -> bool {
        self.out.iter().all(|hs| {
            let labels: BTreeSet<&Letter> = hs.iter().map(|&h| &self.label[h]).collect();
            labels.len() == hs.len()
        })
    }

    /// Endpoint of the path spelling `word` from `start`, if there is one.
    pub fn trace(&self, start: VertexId, word: &Word) -> Result<Option<VertexId>, GraphError> {
        if start >= self.vertex_count {
            return Err(GraphError::NoSuchVertex(start));
        }
        if !self.is_folded() {
            return Err(GraphError::NotFolded);
        }
        Ok(self.trace_unchecked(start, word))
    }

    pub(crate) fn trace_unchecked(&self, start: VertexId, word: &Word) -> Option<VertexId> {
        let mut v = start;
        for letter in word.letters() {
            v = self.terminus(self.find_out(v, letter)?);
        }
        Some(v)
    }

    /// Label of a path given by half-edges.
    pub fn path_label(&self, path: &[HalfEdge]) -> Word {
        Word::reduce(path.iter().map(|&h| self.label[h].clone()))
    }

    pub fn with_alphabet(mut self, alphabet: &Alphabet) -> Self {
        self.alphabet = self.alphabet.union(alphabet);
        self
    }
}

/// A labeled graph with a distinguished base vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedGraph {
    graph: LabeledGraph,
    base: VertexId,
}

impl PointedGraph {
    pub fn new(graph: LabeledGraph, base: VertexId) -> Result<Self, GraphError> {
        if base >= graph.vertex_count() {
            return Err(GraphError::NoSuchVertex(base));
        }
        if !graph.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(PointedGraph { graph, base })
    }

    pub(crate) fn new_unchecked(graph: LabeledGraph, base: VertexId) -> Self {
        debug_assert!(base < graph.vertex_count());
        PointedGraph { graph, base }
    }

    pub fn point(alphabet: &Alphabet) -> Self {
        PointedGraph { graph: LabeledGraph::point(alphabet), base: 0 }
    }

    pub fn rose(alphabet: &Alphabet) -> Self {
        PointedGraph { graph: LabeledGraph::rose(alphabet), base: 0 }
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn into_graph(self) -> LabeledGraph {
        self.graph
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn is_folded(&self) -> bool {
        self.graph.is_folded()
    }

    /// Folded, and every vertex other than the base has degree at least 2.
    pub fn is_core(&self) -> bool {
        self.graph.is_folded() && self.graph.vertices().all(|v| v == self.base || self.graph.degree(v) >= 2)
    }

    pub fn trace(&self, word: &Word) -> Result<Option<VertexId>, GraphError> {
        self.graph.trace(self.base, word)
    }

    pub fn canonical(&self) -> CanonicalForm {
        canonical_form(&self.graph, self.base)
    }

    /// `base <id>` followed by one `<v> -<letter>-> <w>` line per positive edge, after
    /// renumbering vertices breadth-first from the base.
    pub fn to_canonical_text(&self) -> String {
        self.canonical().to_string()
    }

    pub fn to_dot(&self) -> String {
        self.canonical().to_dot()
    }

    pub fn with_alphabet(self, alphabet: &Alphabet) -> Self {
        PointedGraph { graph: self.graph.with_alphabet(alphabet), base: self.base }
    }
}

struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet { parent: (0..n).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Returns `(root, absorbed)`.
    fn union(&mut self, a: usize, b: usize) -> (usize, usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        (a, b)
    }
}

/// In-progress quotient of a graph by foldings.
struct Folding<'g> {
    graph: &'g LabeledGraph,
    vertices: DisjointSet,
    alive: Vec<bool>,
    redirect: Vec<HalfEdge>,
    incident: Vec<Vec<HalfEdge>>,
}

impl<'g> Folding<'g> {
    fn new(graph: &'g LabeledGraph) -> Self {
        Folding {
            graph,
            vertices: DisjointSet::new(graph.vertex_count()),
            alive: vec![true; graph.edge_count()],
            redirect: graph.half_edges().collect(),
            incident: graph.out.clone(),
        }
    }

    /// Identifies `h` with `keep`; returns the merged root if two vertices were joined.
    fn fold(&mut self, keep: HalfEdge, h: HalfEdge) -> Option<VertexId> {
        self.alive[h / 2] = false;
        self.redirect[h] = keep;
        self.redirect[bar(h)] = bar(keep);
        let a = self.vertices.find(self.graph.terminus(keep));
        let b = self.vertices.find(self.graph.terminus(h));
        if a == b {
            return None;
        }
        let (root, absorbed) = self.vertices.union(a, b);
        let moved = std::mem::take(&mut self.incident[absorbed]);
        self.incident[root].extend(moved);
        Some(root)
    }

    fn run<R: Rng + ?Sized>(&mut self, mut rng: Option<&mut R>) {
        let mut work: Vec<VertexId> = self.graph.vertices().rev().collect();
        while !work.is_empty() {
            let v = match rng.as_deref_mut() {
                Some(r) => {
                    let i = r.gen_range(0..work.len());
                    work.swap_remove(i)
                }
                None => work.pop().expect("non-empty"),
            };
            let v = self.vertices.find(v);
            let mut list = std::mem::take(&mut self.incident[v]);
            if let Some(r) = rng.as_deref_mut() {
                list.shuffle(r);
            }
            let mut kept: Vec<HalfEdge> = Vec::with_capacity(list.len());
            for h in list {
                if !self.alive[h / 2] || kept.contains(&h) {
                    continue;
                }
                let letter = &self.graph.label[h];
                match kept.iter().copied().find(|&k| &self.graph.label[k] == letter) {
                    Some(k) => {
                        if let Some(root) = self.fold(k, h) {
                            work.push(root);
                        }
                        kept.retain(|&k| self.alive[k / 2]);
                    }
                    None => kept.push(h),
                }
            }
            let root = self.vertices.find(v);
            let before = self.incident[root].len();
            self.incident[root].extend(kept);
            if root != v || before > 0 {
                work.push(root);
            }
        }
    }

    fn finish(mut self) -> (LabeledGraph, GraphMorphism) {
        let g = self.graph;
        let mut new_vertex = vec![usize::MAX; g.vertex_count()];
        let mut count = 0;
        for v in g.vertices() {
            let r = self.vertices.find(v);
            if new_vertex[r] == usize::MAX {
                new_vertex[r] = count;
                count += 1;
            }
        }
        let mut builder = GraphBuilder::with_vertices(&g.alphabet, count);
        let mut new_edge = vec![usize::MAX; g.edge_count()];
        for h in g.positive_edges() {
            if self.alive[h / 2] {
                new_edge[h / 2] = builder.edges.len();
                let from = new_vertex[self.vertices.find(g.origin(h))];
                let to = new_vertex[self.vertices.find(g.terminus(h))];
                builder.add_edge(from, g.label(h).clone(), to);
            }
        }
        let target = builder.build();
        let vmap = g.vertices().map(|v| new_vertex[self.vertices.find(v)]).collect();
        let emap = g
            .half_edges()
            .map(|h| {
                let mut r = h;
                while !self.alive[r / 2] {
                    r = self.redirect[r];
                }
                2 * new_edge[r / 2] + (r & 1)
            })
            .collect();
        let quotient = GraphMorphism { source: g.clone(), target: target.clone(), vmap, emap };
        (target, quotient)
    }
}

/// Folds until no two edges at a vertex share a label; returns the result and the
/// quotient morphism from the input.
pub fn fold_all(graph: &LabeledGraph) -> (LabeledGraph, GraphMorphism) {
    fold_all_with::<rand::rngs::ThreadRng>(graph, None)
}

/// As [`fold_all`], visiting vertices and edges in an order drawn from `rng` when given.
pub fn fold_all_with<R: Rng + ?Sized>(graph: &LabeledGraph, rng: Option<&mut R>) -> (LabeledGraph, GraphMorphism) {
    let mut folding = Folding::new(graph);
    folding.run(rng);
    folding.finish()
}

pub fn fold_all_pointed(graph: &PointedGraph) -> (PointedGraph, PointedMorphism) {
    let (folded, quotient) = fold_all(&graph.graph);
    let base = quotient.vmap[graph.base];
    let pointed = PointedGraph::new_unchecked(folded, base);
    (pointed, PointedMorphism { map: quotient, source_base: graph.base, target_base: base })
}

/// A single fold of two distinct half-edges with the same origin and label.
pub fn fold_step(graph: &LabeledGraph, e: HalfEdge, f: HalfEdge) -> Result<(LabeledGraph, GraphMorphism), GraphError> {
    if e >= graph.half_edge_count() || f >= graph.half_edge_count() {
        return Err(GraphError::NotFoldable(e, f, "no such half-edge"));
    }
    if e / 2 == f / 2 {
        return Err(GraphError::NotFoldable(e, f, "same geometric edge"));
    }
    if graph.origin(e) != graph.origin(f) || graph.label(e) != graph.label(f) {
        return Err(GraphError::NotFoldable(e, f, "different origin or label"));
    }
    let mut folding = Folding::new(graph);
    folding.fold(e, f);
    Ok(folding.finish())
}

/// A subgraph left after trimming, with its embedding into the original.
#[derive(Clone, Debug)]
pub struct Trimmed {
    pub graph: LabeledGraph,
    /// Original vertex of each kept vertex.
    pub vertex_origin: Vec<VertexId>,
    /// Original half-edge of each kept half-edge.
    pub edge_origin: Vec<HalfEdge>,
}

impl Trimmed {
    /// Kept index of an original vertex.
    pub fn vertex_index(&self, original: VertexId) -> Option<VertexId> {
        self.vertex_origin.iter().position(|&v| v == original)
    }
}

/// Repeatedly removes vertices of degree at most one other than `keep`. Never removes
/// the last vertex.
pub fn trim(graph: &LabeledGraph, keep: Option<VertexId>) -> Trimmed {
    let n = graph.vertex_count();
    let mut degree: Vec<usize> = graph.vertices().map(|v| graph.degree(v)).collect();
    let mut vertex_alive = vec![true; n];
    let mut edge_alive = vec![true; graph.edge_count()];
    let mut remaining = n;
    let mut queue: VecDeque<VertexId> = graph.vertices().filter(|&v| degree[v] <= 1).collect();
    while let Some(v) = queue.pop_front() {
        if !vertex_alive[v] || Some(v) == keep || degree[v] > 1 || remaining == 1 {
            continue;
        }
        vertex_alive[v] = false;
        remaining -= 1;
        if let Some(&h) = graph.out(v).iter().find(|&&h| edge_alive[h / 2]) {
            edge_alive[h / 2] = false;
            let w = graph.terminus(h);
            degree[v] -= 1;
            degree[w] -= 1;
            if degree[w] <= 1 {
                queue.push_back(w);
            }
        }
    }
    let vertex_origin: Vec<VertexId> = graph.vertices().filter(|&v| vertex_alive[v]).collect();
    let mut new_index = vec![usize::MAX; n];
    for (i, &v) in vertex_origin.iter().enumerate() {
        new_index[v] = i;
    }
    let mut builder = GraphBuilder::with_vertices(&graph.alphabet, vertex_origin.len());
    let mut edge_origin = Vec::new();
    for h in graph.positive_edges() {
        if edge_alive[h / 2] {
            builder.add_edge(new_index[graph.origin(h)], graph.label(h).clone(), new_index[graph.terminus(h)]);
            edge_origin.push(h);
            edge_origin.push(bar(h));
        }
    }
    Trimmed { graph: builder.build(), vertex_origin, edge_origin }
}

pub fn trim_all(graph: &PointedGraph) -> PointedGraph {
    let trimmed = trim(&graph.graph, Some(graph.base));
    let base = trimmed.vertex_index(graph.base).expect("base is never trimmed");
    PointedGraph::new_unchecked(trimmed.graph, base)
}

/// `Core(Γ)`: fold and trim to a fixpoint.
pub fn core(graph: &PointedGraph) -> PointedGraph {
    let mut current = graph.clone();
    loop {
        let (folded, _) = fold_all_pointed(&current);
        let trimmed = trim_all(&folded);
        if trimmed.is_core() {
            return trimmed;
        }
        current = trimmed;
    }
}

/// Attaches a path spelling `word` whose end is the old base; the start becomes the new base.
pub fn attach_path(graph: &PointedGraph, word: &Word) -> PointedGraph {
    if word.is_identity() {
        return graph.clone();
    }
    let g = &graph.graph;
    let mut builder = GraphBuilder::with_vertices(&g.alphabet, g.vertex_count());
    for h in g.positive_edges() {
        builder.add_edge(g.origin(h), g.label(h).clone(), g.terminus(h));
    }
    let start = builder.add_vertex();
    builder.add_path(start, word, graph.base);
    PointedGraph::new_unchecked(builder.build(), start)
}

/// Vertex renumbering and sorted edge list of a pointed graph; equal forms mean
/// isomorphic pointed graphs when both graphs are folded and connected.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    pub vertex_count: usize,
    pub edges: Vec<(VertexId, Letter, VertexId)>,
}

pub fn canonical_form(graph: &LabeledGraph, base: VertexId) -> CanonicalForm {
    let n = graph.vertex_count();
    let mut number = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let visit = |v: VertexId, number: &mut Vec<usize>, order: &mut Vec<VertexId>| {
        if number[v] == usize::MAX {
            number[v] = order.len();
            order.push(v);
        }
    };
    let starts = std::iter::once(base).chain(graph.vertices());
    for s in starts {
        if number[s] != usize::MAX {
            continue;
        }
        visit(s, &mut number, &mut order);
        let mut head = order.len() - 1;
        while head < order.len() {
            let v = order[head];
            head += 1;
            let mut hs: Vec<HalfEdge> = graph.out(v).to_vec();
            hs.sort_by(|&a, &b| graph.label(a).cmp(graph.label(b)).then(a.cmp(&b)));
            for h in hs {
                visit(graph.terminus(h), &mut number, &mut order);
            }
        }
    }
    let mut edges: Vec<(VertexId, Letter, VertexId)> = graph
        .positive_edges()
        .map(|h| (number[graph.origin(h)], graph.label(h).clone(), number[graph.terminus(h)]))
        .collect();
    edges.sort();
    CanonicalForm { vertex_count: n, edges }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "base 0")?;
        for (v, letter, w) in &self.edges {
            writeln!(f, "{v} -{letter}-> {w}")?;
        }
        Ok(())
    }
}

impl CanonicalForm {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph stallings {\n");
        for v in 0..self.vertex_count {
            let shape = if v == 0 { "doublecircle" } else { "circle" };
            let _ = writeln!(s, "  {v} [shape={shape}];");
        }
        for (v, letter, w) in &self.edges {
            let _ = writeln!(s, "  {v} -> {w} [label=\"{letter}\"];");
        }
        s.push_str("}\n");
        s
    }

    /// Parses the canonical text format back into a pointed graph.
    pub fn parse(text: &str) -> Result<PointedGraph, GraphError> {
        let mut base = None;
        let mut edges = Vec::new();
        let mut max_vertex = 0;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: &str| GraphError::Parse { line: i + 1, message: message.to_string() };
            if let Some(rest) = line.strip_prefix("base ") {
                base = Some(rest.trim().parse::<usize>().map_err(|_| err("bad base"))?);
                continue;
            }
            let (v, rest) = line.split_once(" -").ok_or_else(|| err("expected `<v> -<letter>-> <w>`"))?;
            let (letter, w) = rest.split_once("-> ").ok_or_else(|| err("expected `-> <w>`"))?;
            let v: usize = v.trim().parse().map_err(|_| err("bad vertex"))?;
            let w: usize = w.trim().parse().map_err(|_| err("bad vertex"))?;
            let letter: Letter = letter.parse().map_err(|_| err("bad letter"))?;
            max_vertex = max_vertex.max(v).max(w);
            edges.push((v, letter, w));
        }
        let base = base.ok_or(GraphError::Parse { line: 0, message: "missing base line".to_string() })?;
        let n = (max_vertex + 1).max(base + 1);
        let mut builder = GraphBuilder::with_vertices(&Alphabet::default(), n);
        for (v, letter, w) in edges {
            builder.add_edge(v, letter, w);
        }
        PointedGraph::new(builder.build(), base)
    }
}

/// A label-preserving graph morphism, given on vertices and on all half-edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMorphism {
    source: LabeledGraph,
    target: LabeledGraph,
    vmap: Vec<VertexId>,
    emap: Vec<HalfEdge>,
}

/// Injectivity and surjectivity on vertices and on edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MorphismClass {
    pub vertex_injective: bool,
    pub vertex_surjective: bool,
    pub edge_injective: bool,
    pub edge_surjective: bool,
}

impl MorphismClass {
    pub fn injective(&self) -> bool {
        self.vertex_injective && self.edge_injective
    }

    pub fn surjective(&self) -> bool {
        self.vertex_surjective && self.edge_surjective
    }
}

impl fmt::Display for MorphismClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "injective: {}", self.injective())?;
        writeln!(f, "surjective: {}", self.surjective())?;
        writeln!(f, "vertex_injective: {}", self.vertex_injective)?;
        writeln!(f, "vertex_surjective: {}", self.vertex_surjective)?;
        writeln!(f, "edge_injective: {}", self.edge_injective)?;
        write!(f, "edge_surjective: {}", self.edge_surjective)
    }
}

fn injective_surjective(map: &[usize], codomain: usize) -> (bool, bool) {
    let mut hit = vec![false; codomain];
    let mut injective = true;
    for &x in map {
        if hit[x] {
            injective = false;
        }
        hit[x] = true;
    }
    (injective, hit.iter().all(|&b| b))
}

impl GraphMorphism {
    pub fn new(
        source: LabeledGraph,
        target: LabeledGraph,
        vmap: Vec<VertexId>,
        emap: Vec<HalfEdge>,
    ) -> Result<Self, GraphError> {
        let bad = |m: String| Err(GraphError::InvalidMorphism(m));
        if vmap.len() != source.vertex_count() || emap.len() != source.half_edge_count() {
            return bad("map sizes do not match the source".into());
        }
        if vmap.iter().any(|&v| v >= target.vertex_count()) || emap.iter().any(|&h| h >= target.half_edge_count()) {
            return bad("map leaves the target".into());
        }
        for h in source.half_edges() {
            let image = emap[h];
            if emap[bar(h)] != bar(image) {
                return bad(format!("half-edge {h}: does not commute with bar"));
            }
            if target.origin(image) != vmap[source.origin(h)] {
                return bad(format!("half-edge {h}: does not commute with the initial vertex map"));
            }
            if target.label(image) != source.label(h) {
                return bad(format!("half-edge {h}: label changes"));
            }
        }
        Ok(GraphMorphism { source, target, vmap, emap })
    }

    pub fn identity(graph: &LabeledGraph) -> Self {
        GraphMorphism {
            source: graph.clone(),
            target: graph.clone(),
            vmap: graph.vertices().collect(),
            emap: graph.half_edges().collect(),
        }
    }

    pub fn source(&self) -> &LabeledGraph {
        &self.source
    }

    pub fn target(&self) -> &LabeledGraph {
        &self.target
    }

    pub fn vertex_map(&self) -> &[VertexId] {
        &self.vmap
    }

    pub fn edge_map(&self) -> &[HalfEdge] {
        &self.emap
    }

    pub fn classify(&self) -> MorphismClass {
        let (vertex_injective, vertex_surjective) = injective_surjective(&self.vmap, self.target.vertex_count());
        let (edge_injective, edge_surjective) = injective_surjective(&self.emap, self.target.half_edge_count());
        MorphismClass { vertex_injective, vertex_surjective, edge_injective, edge_surjective }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GraphMorphism) -> Result<GraphMorphism, GraphError> {
        if self.target.vertex_count() != next.source.vertex_count()
            || self.target.half_edge_count() != next.source.half_edge_count()
        {
            return Err(GraphError::InvalidMorphism("morphisms are not composable".into()));
        }
        GraphMorphism::new(
            self.source.clone(),
            next.target.clone(),
            self.vmap.iter().map(|&v| next.vmap[v]).collect(),
            self.emap.iter().map(|&h| next.emap[h]).collect(),
        )
    }

    /// Whether every vertex has at most one outgoing edge per label in its image star.
    pub fn is_locally_injective(&self) -> bool {
        self.source.vertices().all(|v| {
            let images: BTreeSet<HalfEdge> = self.source.out(v).iter().map(|&h| self.emap[h]).collect();
            images.len() == self.source.degree(v)
        })
    }
}

/// A morphism of pointed graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedMorphism {
    map: GraphMorphism,
    source_base: VertexId,
    target_base: VertexId,
}

impl PointedMorphism {
    pub fn new(map: GraphMorphism, source_base: VertexId, target_base: VertexId) -> Result<Self, GraphError> {
        if map.vmap.get(source_base) != Some(&target_base) {
            return Err(GraphError::InvalidMorphism("base point is not preserved".into()));
        }
        Ok(PointedMorphism { map, source_base, target_base })
    }

    pub fn identity(graph: &PointedGraph) -> Self {
        PointedMorphism { map: GraphMorphism::identity(&graph.graph), source_base: graph.base, target_base: graph.base }
    }

    pub fn map(&self) -> &GraphMorphism {
        &self.map
    }

    pub fn forget(&self) -> GraphMorphism {
        self.map.clone()
    }

    pub fn source(&self) -> PointedGraph {
        PointedGraph::new_unchecked(self.map.source.clone(), self.source_base)
    }

    pub fn target(&self) -> PointedGraph {
        PointedGraph::new_unchecked(self.map.target.clone(), self.target_base)
    }

    pub fn classify(&self) -> MorphismClass {
        self.map.classify()
    }

    pub fn then(&self, next: &PointedMorphism) -> Result<PointedMorphism, GraphError> {
        PointedMorphism::new(self.map.then(&next.map)?, self.source_base, next.target_base)
    }
}

/// The morphism sending `source_start ↦ target_start` determined by labels, if any.
/// The target must be folded for the result to be unique.
pub fn extend_by_labels(
    source: &LabeledGraph,
    target: &LabeledGraph,
    source_start: VertexId,
    target_start: VertexId,
) -> Option<GraphMorphism> {
    let mut vmap = vec![usize::MAX; source.vertex_count()];
    let mut emap = vec![usize::MAX; source.half_edge_count()];
    vmap[source_start] = target_start;
    let mut stack = vec![source_start];
    let mut reached = 1;
    while let Some(v) = stack.pop() {
        let image = vmap[v];
        for &h in source.out(v) {
            let h_image = target.find_out(image, source.label(h))?;
            emap[h] = h_image;
            emap[bar(h)] = bar(h_image);
            let w = source.terminus(h);
            let w_image = target.terminus(h_image);
            if vmap[w] == usize::MAX {
                vmap[w] = w_image;
                reached += 1;
                stack.push(w);
            } else if vmap[w] != w_image {
                return None;
            }
        }
    }
    if reached != source.vertex_count() {
        return None;
    }
    Some(GraphMorphism { source: source.clone(), target: target.clone(), vmap, emap })
}

/// The unique base-preserving morphism between pointed graphs with folded target, if any.
pub fn unique_pointed_morphism(source: &PointedGraph, target: &PointedGraph) -> Option<PointedMorphism> {
    let map = extend_by_labels(&source.graph, &target.graph, source.base, target.base)?;
    Some(PointedMorphism { map, source_base: source.base, target_base: target.base })
}

fn is_bijection(map: &GraphMorphism) -> bool {
    map.source.vertex_count() == map.target.vertex_count()
        && map.source.half_edge_count() == map.target.half_edge_count()
        && map.classify().injective()
}

/// Isomorphism of folded connected graphs, ignoring base points.
pub fn iso_unpointed(a: &LabeledGraph, b: &LabeledGraph) -> bool {
    find_isomorphism(a, b, 0).is_some()
}

fn find_isomorphism(a: &LabeledGraph, b: &LabeledGraph, start: VertexId) -> Option<GraphMorphism> {
    if a.vertex_count() != b.vertex_count() || a.half_edge_count() != b.half_edge_count() {
        return None;
    }
    if a.vertex_count() == 0 {
        return Some(GraphMorphism::identity(a));
    }
    b.vertices().find_map(|d| extend_by_labels(a, b, start, d).filter(is_bijection))
}

/// Whether `f: A → B` and `g: A' → B'` are isomorphic as arrows: there are isomorphisms
/// `α: A → A'` and `β: B → B'` with `β ∘ f = g ∘ α`. All graphs must be folded and connected.
pub fn morphisms_isomorphic(f: &GraphMorphism, g: &GraphMorphism) -> bool {
    let (a, b) = (&f.source, &f.target);
    let (a2, b2) = (&g.source, &g.target);
    if a.vertex_count() != a2.vertex_count()
        || a.half_edge_count() != a2.half_edge_count()
        || b.vertex_count() != b2.vertex_count()
        || b.half_edge_count() != b2.half_edge_count()
    {
        return false;
    }
    if a.vertex_count() == 0 || b.vertex_count() == 0 {
        return a.vertex_count() == b.vertex_count();
    }
    for d in b2.vertices() {
        let Some(beta) = extend_by_labels(b, b2, 0, d).filter(is_bijection) else { continue };
        let wanted = beta.vmap[f.vmap[0]];
        for s in a2.vertices().filter(|&s| g.vmap[s] == wanted) {
            let Some(alpha) = extend_by_labels(a, a2, 0, s).filter(is_bijection) else { continue };
            if a.vertices().all(|v| beta.vmap[f.vmap[v]] == g.vmap[alpha.vmap[v]]) {
                return true;
            }
        }
    }
    false
}
