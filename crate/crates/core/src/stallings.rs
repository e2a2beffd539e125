//! Subgroups of free groups and their Stallings core graphs.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{self, bar, GraphBuilder, GraphError, HalfEdge, LabeledGraph, PointedGraph, PointedMorphism, VertexId};
use crate::words::{Alphabet, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StallingsError {
    #[error("the first subgroup is not contained in the second")]
    NotIncluded,
    #[error("the subgroup is trivial")]
    TrivialSubgroup,
    #[error("the graph has no edges")]
    TrivialGraph,
    #[error("no reduced covering circuit exists: {0}")]
    NoCircuit(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A finitely generated subgroup `⟨w₁, …, wₖ⟩ ≤ F_X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    alphabet: Alphabet,
    generators: Vec<Word>,
}

impl Subgroup {
    pub fn new(alphabet: &Alphabet, generators: Vec<Word>) -> Result<Self, WordError> {
        for w in &generators {
            if let Some(g) = w.generators().find(|g| !alphabet.contains(g)) {
                return Err(WordError::UnknownGenerator(g.to_string()));
            }
        }
        Ok(Subgroup { alphabet: alphabet.clone(), generators })
    }

    /// Over the generators actually used.
    pub fn from_words(generators: Vec<Word>) -> Self {
        Subgroup { alphabet: Alphabet::from_words(&generators), generators }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(Word::is_identity)
    }

    /// `u H u⁻¹`, generator by generator.
    pub fn conjugate(&self, u: &Word) -> Subgroup {
        Subgroup {
            alphabet: self.alphabet.union(&Alphabet::from_words([u])),
            generators: self.generators.iter().map(|w| u.conjugate(w)).collect(),
        }
    }

    pub fn with_alphabet(mut self, alphabet: &Alphabet) -> Self {
        self.alphabet = self.alphabet.union(alphabet);
        self
    }
}

/// Parses one generator word per line; blank lines and `#` comments are skipped.
pub fn parse_subgroup(text: &str, alphabet: Option<&Alphabet>) -> Result<Subgroup, WordError> {
    let mut generators = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if !line.is_empty() {
            generators.push(line.parse::<Word>()?);
        }
    }
    match alphabet {
        Some(a) => Subgroup::new(a, generators),
        None => Ok(Subgroup::from_words(generators)),
    }
}

/// `Γ_X(H)`: the core of a wedge of loops, one per generator.
pub fn gamma(h: &Subgroup) -> PointedGraph {
    let mut builder = GraphBuilder::with_vertices(&h.alphabet, 1);
    for w in h.generators.iter().filter(|w| !w.is_identity()) {
        builder.add_path(0, w, 0);
    }
    graph::core(&PointedGraph::new(builder.build(), 0).expect("wedge of loops is connected"))
}

/// Membership `w ∈ π₁(Γ)` for a folded pointed graph.
pub fn graph_contains(gamma: &PointedGraph, w: &Word) -> Result<bool, GraphError> {
    Ok(gamma.trace(w)? == Some(gamma.base()))
}

pub fn contains(h: &Subgroup, w: &Word) -> bool {
    graph_contains(&gamma(h), w).expect("gamma is folded")
}

/// Whether every generator of `h` lies in `k`.
pub fn is_subgroup_of(h: &Subgroup, k: &Subgroup) -> bool {
    let gk = gamma(k);
    h.generators.iter().all(|w| graph_contains(&gk, w).expect("gamma is folded"))
}

/// Words along a breadth-first spanning tree: `tree[v]` labels the tree path base → v.
fn spanning_tree(g: &PointedGraph) -> (Vec<Word>, Vec<bool>) {
    let graph = g.graph();
    let mut tree_word: Vec<Option<Word>> = vec![None; graph.vertex_count()];
    let mut in_tree = vec![false; graph.edge_count()];
    tree_word[g.base()] = Some(Word::identity());
    let mut queue = VecDeque::from([g.base()]);
    while let Some(v) = queue.pop_front() {
        let here = tree_word[v].clone().expect("visited");
        for &h in graph.out(v) {
            let w = graph.terminus(h);
            if tree_word[w].is_none() {
                tree_word[w] = Some(here.mul(&Word::letter(graph.label(h).clone())));
                in_tree[h / 2] = true;
                queue.push_back(w);
            }
        }
    }
    (tree_word.into_iter().map(|w| w.expect("graph is connected")).collect(), in_tree)
}

/// Free basis of `π₁(Γ)`, one element per positive edge outside a spanning tree.
pub fn pi1_basis(g: &PointedGraph) -> Vec<Word> {
    let graph = g.graph();
    let (tree_word, in_tree) = spanning_tree(g);
    graph
        .positive_edges()
        .filter(|&h| !in_tree[h / 2])
        .map(|h| {
            tree_word[graph.origin(h)]
                .mul(&Word::letter(graph.label(h).clone()))
                .mul(&tree_word[graph.terminus(h)].inverse())
        })
        .collect()
}

/// The morphism `Γ(H) → Γ(K)` when `H ≤ K`.
pub fn inclusion_morphism(h: &Subgroup, k: &Subgroup) -> Option<PointedMorphism> {
    graph::unique_pointed_morphism(&gamma(h), &gamma(k))
}

/// `Γ(wHw⁻¹)` from `Γ(H)`: attach a path labeled `w` and take the core.
pub fn conjugate_core(gamma_h: &PointedGraph, w: &Word) -> PointedGraph {
    graph::core(&graph::attach_path(gamma_h, w))
}

/// Label of a reduced closed path at the base that crosses every geometric edge.
pub fn covering_circuit(g: &PointedGraph) -> Result<Word, StallingsError> {
    let graph = g.graph();
    if graph.edge_count() == 0 {
        return Err(StallingsError::TrivialGraph);
    }
    if !graph.is_folded() {
        return Err(GraphError::NotFolded.into());
    }
    let mut covered = vec![false; graph.edge_count()];
    let mut remaining = graph.edge_count();
    let mut path: Vec<HalfEdge> = Vec::new();
    while remaining > 0 {
        let last = path.last().copied();
        let segment = shortest_continuation(graph, g.base(), last, |h| !covered[h / 2])
            .ok_or(StallingsError::NoCircuit("an edge is unreachable by non-backtracking walks"))?;
        for &h in &segment {
            if !covered[h / 2] {
                covered[h / 2] = true;
                remaining -= 1;
            }
        }
        path.extend(segment);
    }
    let at_base = |p: &[HalfEdge]| p.last().map(|&h| graph.terminus(h)) == Some(g.base());
    if !at_base(&path) {
        let last = path.last().copied();
        let segment = shortest_continuation(graph, g.base(), last, |h| graph.terminus(h) == g.base())
            .ok_or(StallingsError::NoCircuit("cannot return to the base"))?;
        path.extend(segment);
    }
    let word = graph.path_label(&path);
    debug_assert_eq!(word.len(), path.len());
    Ok(word)
}

/// Shortest non-backtracking walk continuing after `last` (or starting at `start`)
/// whose final half-edge satisfies `goal`.
fn shortest_continuation(
    graph: &LabeledGraph,
    start: VertexId,
    last: Option<HalfEdge>,
    goal: impl Fn(HalfEdge) -> bool,
) -> Option<Vec<HalfEdge>> {
    let mut parent: Vec<Option<HalfEdge>> = vec![None; graph.half_edge_count()];
    let mut seen = vec![false; graph.half_edge_count()];
    let mut queue = VecDeque::new();
    let (from, forbidden) = match last {
        Some(h) => (graph.terminus(h), Some(bar(h))),
        None => (start, None),
    };
    for &h in graph.out(from) {
        if Some(h) != forbidden {
            seen[h] = true;
            queue.push_back(h);
        }
    }
    while let Some(h) = queue.pop_front() {
        if goal(h) {
            let mut walk = vec![h];
            let mut cur = h;
            while let Some(p) = parent[cur] {
                walk.push(p);
                cur = p;
            }
            walk.reverse();
            return Some(walk);
        }
        for &next in graph.out(graph.terminus(h)) {
            if next != bar(h) && !seen[next] {
                seen[next] = true;
                parent[next] = Some(h);
                queue.push_back(next);
            }
        }
    }
    None
}

/// Label of the maximal path from a degree-one base through degree-two vertices.
pub fn tail_word(g: &PointedGraph) -> Word {
    let graph = g.graph();
    let mut letters = Vec::new();
    let mut v = g.base();
    let mut came: Option<HalfEdge> = None;
    loop {
        let onward: Vec<HalfEdge> = graph.out(v).iter().copied().filter(|&h| Some(h) != came.map(bar)).collect();
        let expected = if came.is_none() { 1 } else { 2 };
        if graph.degree(v) != expected || onward.len() != 1 {
            break;
        }
        let h = onward[0];
        letters.push(graph.label(h).clone());
        v = graph.terminus(h);
        came = Some(h);
        if v == g.base() {
            break;
        }
    }
    Word::reduce(letters)
}

/// Result of conjugating `H ≤ K` so that `Γ(H) → Γ(K)` becomes onto.
#[derive(Clone, Debug)]
pub struct OntoBase {
    /// Conjugator applied first to give the base of `Γ(H)` degree at least two.
    pub pre: Word,
    /// Covering circuit of `Γ(pre · K · pre⁻¹)`.
    pub circuit: Word,
    /// `circuit · pre`; the morphism is `Γ(c H c⁻¹) → Γ(c K c⁻¹)`.
    pub conjugator: Word,
    pub morphism: PointedMorphism,
}

pub fn onto_base(h: &Subgroup, k: &Subgroup) -> Result<OntoBase, StallingsError> {
    if h.is_trivial() {
        return Err(StallingsError::TrivialSubgroup);
    }
    if !is_subgroup_of(h, k) {
        return Err(StallingsError::NotIncluded);
    }
    let gh = gamma(h);
    let pre = if gh.graph().degree(gh.base()) < 2 { tail_word(&gh).inverse() } else { Word::identity() };
    let h1 = h.conjugate(&pre);
    let k1 = k.conjugate(&pre);
    let gk1 = gamma(&k1);
    let circuit = covering_circuit(&gk1)?;
    let source = conjugate_core(&gamma(&h1), &circuit);
    let morphism = graph::unique_pointed_morphism(&source, &gk1).ok_or(StallingsError::NotIncluded)?;
    let conjugator = circuit.mul(&pre);
    log::debug!("onto_base: pre {pre}, circuit {circuit}");
    Ok(OntoBase { pre, circuit, conjugator, morphism })
}
