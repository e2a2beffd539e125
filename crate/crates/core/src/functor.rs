//! The subdivision functor `𝓕_φ`, `Core ∘ 𝓕_φ`, and `Trimf`.

use thiserror::Error;

use crate::graph::{self, bar, GraphBuilder, GraphError, GraphMorphism, HalfEdge, LabeledGraph, PointedGraph, PointedMorphism, VertexId};
use crate::words::{GroupHom, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FunctorError {
    #[error("homomorphism sends a generator to 1")]
    DegenerateHom,
    #[error("graph uses {0}, which is not in the homomorphism's source")]
    AlphabetMismatch(String),
    #[error("the image subgroup is trivial")]
    TrivialImage,
    #[error("no pointed morphism between the images")]
    NoMorphism,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `Γ_w`: a path from vertex 0 to vertex `|w|` spelling `w`.
pub fn path_graph(w: &Word) -> LabeledGraph {
    let alphabet = crate::words::Alphabet::from_words([w]);
    let mut builder = GraphBuilder::with_vertices(&alphabet, w.len() + 1);
    for (i, letter) in w.letters().iter().enumerate() {
        builder.add_edge(i, letter.clone(), i + 1);
    }
    builder.build()
}

/// `𝓕_φ(Δ)` with the subdivision recorded: old vertices keep their ids, and every
/// half-edge of `Δ` becomes a path of new half-edges.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub graph: LabeledGraph,
    /// `paths[h]` spells `φ(l(h))` from `ι(h)`.
    pub paths: Vec<Vec<HalfEdge>>,
}

pub fn f_phi(phi: &GroupHom, delta: &LabeledGraph) -> Result<Subdivision, FunctorError> {
    if !phi.is_nondegenerate() {
        return Err(FunctorError::DegenerateHom);
    }
    let mut builder = GraphBuilder::with_vertices(phi.target(), delta.vertex_count());
    let mut paths = vec![Vec::new(); delta.half_edge_count()];
    for h in delta.positive_edges() {
        let letter = delta.label(h);
        let image = phi
            .apply_letter(letter)
            .map_err(|_| FunctorError::AlphabetMismatch(letter.generator().to_string()))?;
        let forward = builder.add_path(delta.origin(h), &image, delta.terminus(h));
        paths[bar(h)] = forward.iter().rev().map(|&e| bar(e)).collect();
        paths[h] = forward;
    }
    Ok(Subdivision { graph: builder.build(), paths })
}

/// `𝓕_φ` on a pointed graph; the base point is kept.
pub fn f_phi_pointed(phi: &GroupHom, delta: &PointedGraph) -> Result<PointedGraph, FunctorError> {
    let sub = f_phi(phi, delta.graph())?;
    Ok(PointedGraph::new(sub.graph, delta.base())?)
}

/// `𝓕_φ(f)`: each subdivided path maps position by position onto the subdivided image.
pub fn f_phi_morphism(phi: &GroupHom, f: &GraphMorphism) -> Result<GraphMorphism, FunctorError> {
    let source = f_phi(phi, f.source())?;
    let target = f_phi(phi, f.target())?;
    let mut vmap: Vec<VertexId> = vec![usize::MAX; source.graph.vertex_count()];
    let mut emap: Vec<HalfEdge> = vec![usize::MAX; source.graph.half_edge_count()];
    for (v, &image) in f.vertex_map().iter().enumerate() {
        vmap[v] = image;
    }
    for h in f.source().half_edges() {
        let image_path = &target.paths[f.edge_map()[h]];
        for (&e, &e_image) in source.paths[h].iter().zip(image_path) {
            emap[e] = e_image;
            vmap[source.graph.origin(e)] = target.graph.origin(e_image);
        }
    }
    Ok(GraphMorphism::new(source.graph, target.graph, vmap, emap)?)
}

pub fn f_phi_pointed_morphism(phi: &GroupHom, f: &PointedMorphism) -> Result<PointedMorphism, FunctorError> {
    let map = f_phi_morphism(phi, f.map())?;
    Ok(PointedMorphism::new(map, f.source().base(), f.target().base())?)
}

/// `Core(𝓕_φ(Γ))`.
pub fn core_f_phi(phi: &GroupHom, gamma: &PointedGraph) -> Result<PointedGraph, FunctorError> {
    Ok(graph::core(&f_phi_pointed(phi, gamma)?))
}

/// `Trimf(Γ)`: forget the base point and trim the tail.
pub fn trimf(gamma: &PointedGraph) -> Result<LabeledGraph, FunctorError> {
    Ok(trimf_parts(gamma)?.graph)
}

fn trimf_parts(gamma: &PointedGraph) -> Result<graph::Trimmed, FunctorError> {
    if !gamma.is_folded() {
        return Err(GraphError::NotFolded.into());
    }
    Ok(graph::trim(gamma.graph(), None))
}

/// `Trimf(f)`: the restriction of `f` to the trimmed source and target.
pub fn trimf_morphism(f: &PointedMorphism) -> Result<GraphMorphism, FunctorError> {
    let source = trimf_parts(&f.source())?;
    let target = trimf_parts(&f.target())?;
    let mut vertex_index = vec![usize::MAX; f.target().graph().vertex_count()];
    for (i, &v) in target.vertex_origin.iter().enumerate() {
        vertex_index[v] = i;
    }
    let mut edge_index = vec![usize::MAX; f.target().graph().half_edge_count()];
    for (i, &h) in target.edge_origin.iter().enumerate() {
        edge_index[h] = i;
    }
    let lost = |what: &str| GraphError::InvalidMorphism(format!("a kept {what} maps into the trimmed tail"));
    let vmap = source
        .vertex_origin
        .iter()
        .map(|&v| Some(vertex_index[f.map().vertex_map()[v]]).filter(|&i| i != usize::MAX).ok_or_else(|| lost("vertex")))
        .collect::<Result<Vec<_>, _>>()?;
    let emap = source
        .edge_origin
        .iter()
        .map(|&h| Some(edge_index[f.map().edge_map()[h]]).filter(|&i| i != usize::MAX).ok_or_else(|| lost("edge")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GraphMorphism::new(source.graph, target.graph, vmap, emap)?)
}

/// `Trimf ∘ Core ∘ 𝓕_φ` applied to a pointed morphism.
pub fn pipeline(phi: &GroupHom, f: &PointedMorphism) -> Result<GraphMorphism, FunctorError> {
    let source = core_f_phi(phi, &f.source())?;
    let target = core_f_phi(phi, &f.target())?;
    if target.graph().edge_count() == 0 {
        return Err(FunctorError::TrivialImage);
    }
    let induced = graph::unique_pointed_morphism(&source, &target).ok_or(FunctorError::NoMorphism)?;
    trimf_morphism(&induced)
}
