//! Random reduced words, subgroups, homomorphisms and graphs.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{GraphBuilder, LabeledGraph};
use crate::stallings::Subgroup;
use crate::words::{Alphabet, GroupHom, Letter, Word};

/// Uniform reduced word of exactly `len` letters.
pub fn random_reduced_word<R: Rng + ?Sized>(rng: &mut R, alphabet: &Alphabet, len: usize) -> Word {
    let letters: Vec<Letter> = alphabet.letters().collect();
    let mut out: Vec<Letter> = Vec::with_capacity(len);
    while out.len() < len {
        let x = letters.choose(rng).expect("non-empty alphabet").clone();
        if out.last().is_some_and(|l| l.is_inverse_of(&x)) {
            continue;
        }
        out.push(x);
    }
    Word::reduce(out)
}

/// Reduced word with length uniform in `min..=max`.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, alphabet: &Alphabet, min: usize, max: usize) -> Word {
    let len = rng.gen_range(min..=max.max(min));
    random_reduced_word(rng, alphabet, len)
}

/// Cyclically reduced word of exactly `len ≥ 1` letters.
pub fn random_cyclic_word<R: Rng + ?Sized>(rng: &mut R, alphabet: &Alphabet, len: usize) -> Word {
    loop {
        let w = random_reduced_word(rng, alphabet, len);
        if w.is_cyclically_reduced() {
            return w;
        }
    }
}

/// Between one and `max_gens` non-trivial generators of length at most `max_len`.
pub fn random_subgroup<R: Rng + ?Sized>(rng: &mut R, alphabet: &Alphabet, max_gens: usize, max_len: usize) -> Subgroup {
    let count = rng.gen_range(1..=max_gens.max(1));
    let gens = (0..count).map(|_| random_word(rng, alphabet, 1, max_len)).collect();
    Subgroup::new(alphabet, gens).expect("words over the alphabet")
}

/// Non-degenerate homomorphism with image lengths in `min_len.max(1)..=max_len`.
pub fn random_hom<R: Rng + ?Sized>(
    rng: &mut R,
    source: &Alphabet,
    target: &Alphabet,
    min_len: usize,
    max_len: usize,
) -> GroupHom {
    let images: BTreeMap<_, _> =
        source.generators().iter().map(|g| (g.clone(), random_word(rng, target, min_len.max(1), max_len))).collect();
    GroupHom::new(source.clone(), target.clone(), images).expect("images over the target")
}

/// Connected labelled graph on `vertices` vertices: a random spanning tree plus
/// `extra` further edges.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, alphabet: &Alphabet, vertices: usize, extra: usize) -> LabeledGraph {
    let vertices = vertices.max(1);
    let letters: Vec<Letter> = alphabet.letters().collect();
    let mut b = GraphBuilder::with_vertices(alphabet, vertices);
    for v in 1..vertices {
        let u = rng.gen_range(0..v);
        b.add_edge(u, letters.choose(rng).expect("non-empty alphabet").clone(), v);
    }
    for _ in 0..extra {
        let u = rng.gen_range(0..vertices);
        let v = rng.gen_range(0..vertices);
        b.add_edge(u, letters.choose(rng).expect("non-empty alphabet").clone(), v);
    }
    b.build()
}
