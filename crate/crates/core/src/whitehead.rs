//! Whitehead graphs, restricted free-group objects `(X, N)` and their morphisms,
//! stencils and stencil spaces.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::functor;
use crate::graph::LabeledGraph;
use crate::words::{Alphabet, Generator, GroupHom, Letter, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WhiteheadError {
    #[error("`{0}.{0}` is not a Whitehead edge")]
    LoopEdge(Letter),
    #[error("invalid Whitehead edge `{0}`")]
    InvalidEdge(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// An unordered pair `x.y` of distinct letters, stored with `x < y`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WhiteheadEdge(Letter, Letter);

impl WhiteheadEdge {
    pub fn new(x: Letter, y: Letter) -> Result<Self, WhiteheadError> {
        match x.cmp(&y) {
            std::cmp::Ordering::Less => Ok(WhiteheadEdge(x, y)),
            std::cmp::Ordering::Greater => Ok(WhiteheadEdge(y, x)),
            std::cmp::Ordering::Equal => Err(WhiteheadError::LoopEdge(x)),
        }
    }

    pub fn letters(&self) -> (&Letter, &Letter) {
        (&self.0, &self.1)
    }

    pub fn generators(&self) -> [&Generator; 2] {
        [self.0.generator(), self.1.generator()]
    }
}

impl fmt::Display for WhiteheadEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.0, self.1)
    }
}

impl fmt::Debug for WhiteheadEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for WhiteheadEdge {
    type Err = WhiteheadError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || WhiteheadError::InvalidEdge(s.to_string());
        let (x, y) = s.split_once('.').ok_or_else(bad)?;
        let x: Letter = x.trim().parse().map_err(|_| bad())?;
        let y: Letter = y.trim().parse().map_err(|_| bad())?;
        WhiteheadEdge::new(x, y)
    }
}

pub type RestrictionSet = BTreeSet<WhiteheadEdge>;

/// Comma-separated `x.y` tokens, e.g. `b.b^-1, a.b`. `∅`, `{}` and the empty string
/// are the empty set.
pub fn parse_restrictions(text: &str) -> Result<RestrictionSet, WhiteheadError> {
    let text = text.trim().trim_start_matches('{').trim_end_matches('}').trim();
    if text.is_empty() || text == "∅" {
        return Ok(RestrictionSet::new());
    }
    text.split(',').map(str::parse).collect()
}

pub fn format_restrictions(set: &RestrictionSet) -> String {
    set.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// `W(Γ)`: for each vertex, every pair of distinct outgoing half-edges `e, f` gives the
/// edge `l(ē).l(f̄)`.
pub fn whitehead_graph(graph: &LabeledGraph) -> RestrictionSet {
    let mut set = RestrictionSet::new();
    for v in graph.vertices() {
        let out = graph.out(v);
        for (i, &e) in out.iter().enumerate() {
            for &f in &out[i + 1..] {
                let x = graph.label(e).inverse();
                let y = graph.label(f).inverse();
                if x != y {
                    set.insert(WhiteheadEdge(x, y).normalized());
                }
            }
        }
    }
    set
}

impl WhiteheadEdge {
    fn normalized(self) -> Self {
        if self.0 <= self.1 {
            self
        } else {
            WhiteheadEdge(self.1, self.0)
        }
    }
}

/// `W_X = W(R_X)`, all pairs of distinct letters.
pub fn full_whitehead(alphabet: &Alphabet) -> RestrictionSet {
    let letters: Vec<Letter> = alphabet.letters().collect();
    let mut set = RestrictionSet::new();
    for (i, x) in letters.iter().enumerate() {
        for y in &letters[i + 1..] {
            set.insert(WhiteheadEdge(x.clone(), y.clone()).normalized());
        }
    }
    set
}

/// `W(Γ_w)` of the path graph of `w`.
pub fn word_whitehead(w: &Word) -> RestrictionSet {
    whitehead_graph(&functor::path_graph(w))
}

/// An object `(X, N)` with `N ⊆ W_X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgrObject {
    pub alphabet: Alphabet,
    pub restrictions: RestrictionSet,
}

impl FgrObject {
    pub fn new(alphabet: Alphabet, restrictions: RestrictionSet) -> Result<Self, WhiteheadError> {
        if let Some(e) = restrictions.iter().find(|e| e.generators().iter().any(|g| !alphabet.contains(g))) {
            return Err(WhiteheadError::AlphabetMismatch(format!("restriction {e} is not over {alphabet}")));
        }
        Ok(FgrObject { alphabet, restrictions })
    }

    pub fn full(alphabet: &Alphabet) -> Self {
        FgrObject { alphabet: alphabet.clone(), restrictions: full_whitehead(alphabet) }
    }

    pub fn unrestricted(alphabet: &Alphabet) -> Self {
        FgrObject { alphabet: alphabet.clone(), restrictions: RestrictionSet::new() }
    }
}

impl fmt::Display for FgrObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {{{}}})", self.alphabet, format_restrictions(&self.restrictions))
    }
}

/// A failed condition of [`is_fgr_morphism`] with its witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FgrViolation {
    /// (i) `φ(x) = 1`.
    Degenerate(Generator),
    /// (ii) an edge of `W(Γ_{φ(x)})` outside the target restrictions.
    ImageEdge { generator: Generator, edge: WhiteheadEdge },
    /// (iii) `τ(φ(x)) = τ(φ(y))` for a source restriction `x.y`.
    TauCollision { restriction: WhiteheadEdge, tau: Letter },
    /// (iv) `τ(φ(x)).τ(φ(y))` outside the target restrictions.
    TauPair { restriction: WhiteheadEdge, image: WhiteheadEdge },
}

impl fmt::Display for FgrViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FgrViolation::Degenerate(g) => write!(f, "(i) {g} maps to 1"),
            FgrViolation::ImageEdge { generator, edge } => {
                write!(f, "(ii) {edge} in the Whitehead graph of the image of {generator} is not allowed")
            }
            FgrViolation::TauCollision { restriction, tau } => {
                write!(f, "(iii) both letters of {restriction} have last image letter {tau}")
            }
            FgrViolation::TauPair { restriction, image } => {
                write!(f, "(iv) {restriction} maps to {image}, which is not allowed")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FgrReport {
    pub violations: Vec<FgrViolation>,
}

impl FgrReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `τ(φ(x))` for a signed letter.
pub fn tau_image(phi: &GroupHom, x: &Letter) -> Result<Option<Letter>, WordError> {
    Ok(phi.apply_letter(x)?.tau().ok().cloned())
}

/// The image `τ(φ x).τ(φ y)` of a restriction edge, or `None` when the two `τ` agree
/// or an image is trivial.
pub fn map_restriction(phi: &GroupHom, edge: &WhiteheadEdge) -> Result<Option<WhiteheadEdge>, WordError> {
    let (x, y) = edge.letters();
    match (tau_image(phi, x)?, tau_image(phi, y)?) {
        (Some(tx), Some(ty)) => Ok(WhiteheadEdge::new(tx, ty).ok()),
        _ => Ok(None),
    }
}

/// Checks conditions (i)-(iv) for `φ: F_src → F_dst` from `(src, N)` to `(dst, M)`.
pub fn is_fgr_morphism(src: &FgrObject, dst: &FgrObject, phi: &GroupHom) -> Result<FgrReport, WhiteheadError> {
    if !phi.source().same_set(&src.alphabet) {
        return Err(WhiteheadError::AlphabetMismatch(format!(
            "homomorphism source {} differs from {}",
            phi.source(),
            src.alphabet
        )));
    }
    for (g, w) in phi.images() {
        if let Some(x) = w.generators().find(|x| !dst.alphabet.contains(x)) {
            return Err(WhiteheadError::AlphabetMismatch(format!("image of {g} uses {x}, not in {}", dst.alphabet)));
        }
    }
    let mut report = FgrReport::default();
    for (g, w) in phi.images() {
        if w.is_identity() {
            report.violations.push(FgrViolation::Degenerate(g.clone()));
            continue;
        }
        for edge in word_whitehead(w) {
            if !dst.restrictions.contains(&edge) {
                report.violations.push(FgrViolation::ImageEdge { generator: g.clone(), edge });
            }
        }
    }
    for restriction in &src.restrictions {
        let (x, y) = restriction.letters();
        let (Some(tx), Some(ty)) = (tau_image(phi, x)?, tau_image(phi, y)?) else { continue };
        if tx == ty {
            report.violations.push(FgrViolation::TauCollision { restriction: restriction.clone(), tau: tx });
            continue;
        }
        let image = WhiteheadEdge::new(tx, ty)?;
        if !dst.restrictions.contains(&image) {
            report.violations.push(FgrViolation::TauPair { restriction: restriction.clone(), image });
        }
    }
    Ok(report)
}

/// `(φ, Γ)` is a stencil when `F_φ(Γ)` is folded.
pub fn is_stencil(phi: &GroupHom, graph: &LabeledGraph) -> bool {
    graph.is_folded()
        && functor::f_phi(phi, graph).map(|s| s.graph.is_folded()).unwrap_or(false)
}

/// Edges of `W(Γ)` missing from `N`.
pub fn stencil_space_missing(obj: &FgrObject, graph: &LabeledGraph) -> RestrictionSet {
    whitehead_graph(graph).difference(&obj.restrictions).cloned().collect()
}

pub fn is_stencil_space(obj: &FgrObject, graph: &LabeledGraph) -> bool {
    stencil_space_missing(obj, graph).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stallings::{gamma, Subgroup};

    fn ab() -> Alphabet {
        Alphabet::new(&["a", "b"]).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn set(s: &str) -> RestrictionSet {
        parse_restrictions(s).unwrap()
    }

    fn delta() -> LabeledGraph {
        gamma(&Subgroup::new(&ab(), vec![w("b"), w("a b a^-1")]).unwrap()).into_graph()
    }

    fn b_loop() -> LabeledGraph {
        gamma(&Subgroup::new(&ab(), vec![w("b")]).unwrap()).into_graph()
    }

    /// Adjacent letter pairs `{x_i, x_{i+1}⁻¹}` of the cyclic word, read directly.
    fn cyclic_word_whitehead(w: &Word) -> RestrictionSet {
        let letters = w.letters();
        let n = letters.len();
        (0..n)
            .filter_map(|i| WhiteheadEdge::new(letters[i].clone(), letters[(i + 1) % n].inverse()).ok())
            .collect()
    }

    #[test]
    fn edges_are_unordered_and_never_loops() {
        let x: Letter = "a".parse().unwrap();
        let y: Letter = "b^-1".parse().unwrap();
        assert_eq!(WhiteheadEdge::new(x.clone(), y.clone()), WhiteheadEdge::new(y, x.clone()));
        assert!(WhiteheadEdge::new(x.clone(), x.clone()).is_err());
        assert!(WhiteheadEdge::new(x.clone(), x.inverse()).is_ok());
    }

    #[test]
    fn whitehead_graph_examples() {
        assert_eq!(whitehead_graph(&b_loop()), set("b.b^-1"));
        assert_eq!(whitehead_graph(&delta()), set("b.b^-1, a.b, a.b^-1, a^-1.b, a^-1.b^-1"));
        assert_eq!(word_whitehead(&w("a b a^-1")), set("a.b^-1, a.b"));
    }

    #[test]
    fn full_whitehead_examples() {
        assert_eq!(full_whitehead(&Alphabet::new(&["a"]).unwrap()), set("a.a^-1"));
        assert_eq!(full_whitehead(&ab()), set("a.a^-1, a.b, a.b^-1, a^-1.b, a^-1.b^-1, b.b^-1"));
        for n in 1..6 {
            let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            assert_eq!(full_whitehead(&Alphabet::new(&names).unwrap()).len(), n * (2 * n - 1));
        }
    }

    #[test]
    fn whitehead_of_cyclic_words() {
        for s in ["a b", "a b a^-1 b^-1", "a a b", "b a^-1 b^-1 a^-1"] {
            let word = w(s);
            assert!(word.is_cyclically_reduced());
            let mut g = crate::graph::GraphBuilder::with_vertices(&ab(), 1);
            g.add_path(0, &word, 0);
            assert_eq!(whitehead_graph(&g.build()), cyclic_word_whitehead(&word), "{s}");
        }
    }

    #[test]
    fn fgr_morphism_examples() {
        let greek = Alphabet::new(&["alpha", "beta"]).unwrap();
        let sigma = GroupHom::from_pairs(&greek, &ab(), &[("alpha", "b"), ("beta", "a b a^-1")]).unwrap();
        let report = is_fgr_morphism(&FgrObject::unrestricted(&greek), &FgrObject::full(&ab()), &sigma).unwrap();
        assert!(report.is_valid());

        let uy = Alphabet::new(&["u", "y"]).unwrap();
        let uyt = Alphabet::new(&["u", "y", "t"]).unwrap();
        let psi = GroupHom::from_pairs(&uy, &uyt, &[("u", "u t"), ("y", "t^-1 y")]).unwrap();
        let src = FgrObject::new(uy, set("u.y, y.u^-1, u^-1.y^-1, u.u^-1")).unwrap();
        let dst = FgrObject::new(uyt, set("t.y, y.u^-1, t.u^-1, u.t^-1, u.y^-1, t^-1.y^-1")).unwrap();
        assert!(is_fgr_morphism(&src, &dst, &psi).unwrap().is_valid());

        let degenerate = GroupHom::from_pairs(&ab(), &ab(), &[("a", "1"), ("b", "b")]).unwrap();
        let report = is_fgr_morphism(&FgrObject::full(&ab()), &FgrObject::full(&ab()), &degenerate).unwrap();
        assert!(report.violations.iter().any(|v| matches!(v, FgrViolation::Degenerate(_))));

        let swap = GroupHom::from_pairs(&ab(), &ab(), &[("a", "b"), ("b", "b")]).unwrap();
        let report = is_fgr_morphism(&FgrObject::full(&ab()), &FgrObject::full(&ab()), &swap).unwrap();
        assert!(report.violations.iter().any(|v| matches!(v, FgrViolation::TauCollision { .. })));

        let c = Alphabet::new(&["c"]).unwrap();
        assert!(is_fgr_morphism(&FgrObject::full(&c), &FgrObject::full(&ab()), &swap).is_err());
    }

    #[test]
    fn stencil_examples() {
        assert!(is_stencil(&GroupHom::identity(&ab()), &delta()));
        let collapse = GroupHom::from_pairs(&ab(), &ab(), &[("a", "b"), ("b", "b")]).unwrap();
        assert!(!is_stencil(&collapse, &LabeledGraph::rose(&ab())));
        let greek = Alphabet::new(&["alpha", "beta"]).unwrap();
        let sigma = GroupHom::from_pairs(&greek, &ab(), &[("alpha", "b"), ("beta", "a b a^-1")]).unwrap();
        assert!(!is_stencil(&sigma, &LabeledGraph::rose(&greek)));
    }

    #[test]
    fn stencil_space_examples() {
        assert!(is_stencil_space(&FgrObject::full(&ab()), &delta()));
        let narrow = FgrObject::new(ab(), set("b.b^-1")).unwrap();
        assert_eq!(stencil_space_missing(&narrow, &delta()), set("a.b, a.b^-1, a^-1.b, a^-1.b^-1"));
        assert!(is_stencil_space(&narrow, &b_loop()));
    }

    #[test]
    fn restriction_syntax_round_trips() {
        let s = set("b.b^-1, a.b");
        assert_eq!(format_restrictions(&s), "a.b, b.b^-1");
        assert_eq!(set(&format_restrictions(&s)), s);
        assert!(set("∅").is_empty());
        assert!(parse_restrictions("a.a").is_err());
    }
}
