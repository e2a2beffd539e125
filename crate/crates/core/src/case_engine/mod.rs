//! Injectivity problems `(Γ → Δ, (U, N))`, their classification, FGR case splitting
//! and containment between cases, for the extension `⟨b⟩ ≤ ⟨b, aba⁻¹⟩`.

mod table;

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use thiserror::Error;

pub use table::{build_tree, verify_tables, CaseTree, Expect, Origin, RowReport, TableReport, TableRow, TABLE};

use crate::functor::{self, FunctorError};
use crate::graph::{self, PointedGraph, PointedMorphism};
use crate::parallel::{run_trials, Execution};
use crate::random;
use crate::stallings::{gamma, Subgroup};
use crate::whitehead::{
    self, format_restrictions, is_fgr_morphism, map_restriction, FgrObject, RestrictionSet, WhiteheadEdge,
    WhiteheadError,
};
use crate::words::{Alphabet, Generator, GroupHom, Letter, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CaseError {
    #[error("case {0} is not ambiguous")]
    NotAmbiguous(String),
    #[error("{0} is not a missing edge of case {1}")]
    EdgeNotMissing(WhiteheadEdge, String),
    #[error("no pointed morphism Γ → Δ in case {0}")]
    NoMorphism(String),
    #[error("unknown case {0}")]
    UnknownCase(String),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error(transparent)]
    Whitehead(#[from] WhiteheadError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// An injectivity problem: the pointed morphism `Γ_i → Δ_i` over `(U_i, N_i)`.
#[derive(Clone, Debug)]
pub struct CaseState {
    pub id: String,
    pub obj: FgrObject,
    pub morphism: PointedMorphism,
    /// Substitutions applied since the root problem, first to last.
    pub chain: Vec<GroupHom>,
}

impl CaseState {
    pub fn new(
        id: impl Into<String>,
        obj: FgrObject,
        gamma: &PointedGraph,
        delta: &PointedGraph,
        chain: Vec<GroupHom>,
    ) -> Result<Self, CaseError> {
        let id = id.into();
        let morphism = graph::unique_pointed_morphism(gamma, delta).ok_or_else(|| CaseError::NoMorphism(id.clone()))?;
        Ok(CaseState { id, obj, morphism, chain })
    }

    pub fn gamma(&self) -> PointedGraph {
        self.morphism.source()
    }

    pub fn delta(&self) -> PointedGraph {
        self.morphism.target()
    }

    /// `W(Δ_i) \ N_i`.
    pub fn missing(&self) -> RestrictionSet {
        whitehead::stencil_space_missing(&self.obj, self.morphism.map().target())
    }

    /// The same problem with `extra` added to the restrictions.
    pub fn restricted(&self, id: impl Into<String>, extra: &RestrictionSet) -> CaseState {
        let mut obj = self.obj.clone();
        obj.restrictions.extend(extra.iter().cloned());
        CaseState { id: id.into(), obj, morphism: self.morphism.clone(), chain: self.chain.clone() }
    }

    /// Composite of the chain, from the first substitution's source.
    pub fn substitution(&self) -> Option<GroupHom> {
        let mut iter = self.chain.iter();
        let first = iter.next()?.clone();
        iter.try_fold(first, |acc, next| next.compose(&acc).ok())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    NegativeNotInjective,
    PositiveStencil,
    Ambiguous(RestrictionSet),
}

impl Classification {
    pub fn missing(&self) -> RestrictionSet {
        match self {
            Classification::Ambiguous(m) => m.clone(),
            _ => RestrictionSet::new(),
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::NegativeNotInjective => write!(f, "negative"),
            Classification::PositiveStencil => write!(f, "positive"),
            Classification::Ambiguous(_) => write!(f, "ambiguous"),
        }
    }
}

pub fn classify(s: &CaseState) -> Classification {
    if !s.morphism.classify().injective() {
        return Classification::NegativeNotInjective;
    }
    let missing = s.missing();
    if missing.is_empty() {
        Classification::PositiveStencil
    } else {
        Classification::Ambiguous(missing)
    }
}

/// The five ways an FGR-valid homomorphism can treat a missing edge `p.q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SplitShape {
    /// Identity; `p.q` becomes a restriction.
    AddEdge = 1,
    /// `p ↦ p·t`, `q ↦ q·t` for a fresh `t`.
    CommonSuffix = 2,
    /// `p ↦ p·q`.
    FirstAbsorbs = 3,
    /// `q ↦ q·p`.
    SecondAbsorbs = 4,
    /// `q ↦ p`.
    Identify = 5,
}

impl SplitShape {
    pub const ALL: [SplitShape; 5] = [
        SplitShape::AddEdge,
        SplitShape::CommonSuffix,
        SplitShape::FirstAbsorbs,
        SplitShape::SecondAbsorbs,
        SplitShape::Identify,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Debug)]
pub struct SplitCase {
    pub parent: String,
    pub selector: WhiteheadEdge,
    pub shape: SplitShape,
    pub substitution: GroupHom,
    pub state: CaseState,
}

impl SplitCase {
    pub fn index(&self) -> usize {
        self.shape.index()
    }

    pub fn new_obj(&self) -> &FgrObject {
        &self.state.obj
    }
}

fn letter_word(x: &Letter) -> Word {
    Word::letter(x.clone())
}

/// Appends `m` to the image of the signed letter `x`: `g ↦ g·m` for `x = g`, and
/// `g ↦ m⁻¹·g` for `x = g⁻¹`.
fn append_to_letter(images: &mut BTreeMap<Generator, Word>, x: &Letter, m: &Word) {
    let current = images[x.generator()].clone();
    let updated = if x.is_positive() { current.mul(m) } else { m.inverse().mul(&current) };
    images.insert(x.generator().clone(), updated);
}

fn identity_images(alphabet: &Alphabet) -> BTreeMap<Generator, Word> {
    alphabet.generators().iter().map(|g| (g.clone(), Word::letter(g.pos()))).collect()
}

/// Restrictions after substituting `psi`, or `None` when some restriction collapses to
/// `x.x`.
fn transport_restrictions(
    psi: &GroupHom,
    restrictions: &RestrictionSet,
) -> Result<Option<RestrictionSet>, WordError> {
    let mut out = RestrictionSet::new();
    for r in restrictions {
        match map_restriction(psi, r)? {
            Some(e) => {
                out.insert(e);
            }
            None => return Ok(None),
        }
    }
    for (_, w) in psi.images() {
        out.extend(whitehead::word_whitehead(w));
    }
    Ok(Some(out))
}

/// The child problem under a substitution `psi: F_U → F_U'`.
pub fn substitute(
    s: &CaseState,
    id: impl Into<String>,
    psi: &GroupHom,
    restrictions: RestrictionSet,
) -> Result<CaseState, CaseError> {
    let gamma = functor::core_f_phi(psi, &s.gamma())?;
    let delta = functor::core_f_phi(psi, &s.delta())?;
    let obj = FgrObject::new(psi.target().clone(), restrictions)?;
    let mut chain = s.chain.clone();
    chain.push(psi.clone());
    CaseState::new(id, obj, &gamma, &delta, chain)
}

/// Splits an ambiguous case on one of its missing edges. Subcases whose substitution
/// would collapse a restriction to `x.x` are dropped, as are the subcases that make
/// no sense for an edge `v.v⁻¹`.
pub fn split_on_edge(s: &CaseState, edge: &WhiteheadEdge) -> Result<Vec<SplitCase>, CaseError> {
    let missing = match classify(s) {
        Classification::Ambiguous(m) => m,
        _ => return Err(CaseError::NotAmbiguous(s.id.clone())),
    };
    if !missing.contains(edge) {
        return Err(CaseError::EdgeNotMissing(edge.clone(), s.id.clone()));
    }
    let (p, q) = edge.letters();
    let same_generator = p.generator() == q.generator();
    let alphabet = &s.obj.alphabet;
    let mut children = Vec::new();
    for shape in SplitShape::ALL {
        let mut target = alphabet.clone();
        let mut images = identity_images(alphabet);
        match shape {
            SplitShape::AddEdge => {}
            SplitShape::CommonSuffix => {
                let t = target.mint_fresh(&["t", "s"]);
                let suffix = if p.is_inverse() && q.is_inverse() { t.neg() } else { t.pos() };
                append_to_letter(&mut images, p, &letter_word(&suffix));
                append_to_letter(&mut images, q, &letter_word(&suffix));
            }
            SplitShape::FirstAbsorbs | SplitShape::SecondAbsorbs | SplitShape::Identify if same_generator => continue,
            SplitShape::FirstAbsorbs => append_to_letter(&mut images, p, &letter_word(q)),
            SplitShape::SecondAbsorbs => append_to_letter(&mut images, q, &letter_word(p)),
            SplitShape::Identify => {
                let image = if q.is_positive() { p.clone() } else { p.inverse() };
                images.insert(q.generator().clone(), letter_word(&image));
                target.remove(q.generator());
            }
        }
        let psi = GroupHom::new(alphabet.clone(), target, images)?;
        let restrictions = if shape == SplitShape::AddEdge {
            let mut n = s.obj.restrictions.clone();
            n.insert(edge.clone());
            n
        } else {
            match transport_restrictions(&psi, &s.obj.restrictions)? {
                Some(mut n) => {
                    if shape == SplitShape::CommonSuffix {
                        n.insert(edge.clone());
                    }
                    n
                }
                None => {
                    log::debug!("split {} on {edge}: subcase {} collapses a restriction", s.id, shape.index());
                    continue;
                }
            }
        };
        let id = format!("{}.{}", s.id, shape.index());
        let state = if shape == SplitShape::AddEdge {
            s.restricted(id, &std::iter::once(edge.clone()).collect())
        } else {
            substitute(s, id, &psi, restrictions)?
        };
        children.push(SplitCase { parent: s.id.clone(), selector: edge.clone(), shape, substitution: psi, state });
    }
    Ok(children)
}

/// Builds `target.alphabet → child.alphabet` from the moved letters, every other
/// generator mapping to itself.
pub fn renaming(source: &Alphabet, target: &Alphabet, moved: &[(&str, &str)]) -> Result<GroupHom, WordError> {
    let mut images = identity_images(source);
    for (name, image) in moved {
        let gen = source.get(name).cloned().ok_or_else(|| WordError::UnknownGenerator(name.to_string()))?;
        images.insert(gen, image.parse()?);
    }
    GroupHom::new(source.clone(), target.clone(), images)
}

/// Whether `rho` carries `target` into `child`: `rho` is FGR-valid from the target's
/// object to the child's, and `Trimf ∘ Core ∘ 𝓕_ρ` of the target morphism is
/// isomorphic to `Trimf` of the child's.
pub fn reduce_to(child: &CaseState, target: &CaseState, rho: &GroupHom) -> bool {
    match is_fgr_morphism(&target.obj, &child.obj, rho) {
        Ok(report) if report.is_valid() => {}
        Ok(report) => {
            for v in &report.violations {
                log::debug!("{} -> {}: {v}", target.id, child.id);
            }
            return false;
        }
        Err(e) => {
            log::debug!("{} -> {}: {e}", target.id, child.id);
            return false;
        }
    }
    let Ok(image) = functor::pipeline(rho, &target.morphism) else { return false };
    let Ok(own) = functor::trimf_morphism(&child.morphism) else { return false };
    graph::morphisms_isomorphic(&image, &own)
}

fn ab() -> Alphabet {
    Alphabet::new(&["a", "b"]).expect("valid names")
}

fn greek() -> Alphabet {
    Alphabet::new(&["alpha", "beta"]).expect("valid names")
}

fn parse_set(text: &str) -> RestrictionSet {
    whitehead::parse_restrictions(text).expect("built-in restriction sets parse")
}

/// `(Γ(⟨b⟩) → Γ(⟨b, aba⁻¹⟩), ({a,b}, {b.b⁻¹}))`.
pub fn root_problem() -> CaseState {
    let a = ab();
    let w = |s: &str| s.parse::<Word>().expect("valid word");
    let g = gamma(&Subgroup::new(&a, vec![w("b")]).expect("over {a,b}"));
    let d = gamma(&Subgroup::new(&a, vec![w("b"), w("a b a^-1")]).expect("over {a,b}"));
    let obj = FgrObject::new(a, parse_set("b.b^-1")).expect("over {a,b}");
    CaseState::new("root", obj, &g, &d, Vec::new()).expect("⟨b⟩ ≤ ⟨b, aba⁻¹⟩")
}

/// `σ: α ↦ b, β ↦ aba⁻¹`.
pub fn sigma() -> GroupHom {
    GroupHom::from_pairs(&greek(), &ab(), &[("alpha", "b"), ("beta", "a b a^-1")]).expect("valid")
}

/// One row of the change of coordinates.
#[derive(Clone, Debug)]
pub struct InitialCase {
    pub state: CaseState,
    /// `ψ_i: F_{α,β} → F_{U_i}`.
    pub psi: GroupHom,
    /// `σ_i: F_{a,b} → F_{U_i}`, with `σ_i ∘ σ = ψ_i`.
    pub sigma: GroupHom,
    /// The generic restriction rule: `⋃ W(Γ_{ψ_i(g)})`, plus `u.u⁻¹` when `v̄ = 1`.
    pub rule_restrictions: RestrictionSet,
}

/// Id, generators, restrictions, images of `α, β` under `ψ_i`, images of `a, b` under `σ_i`.
type InitialSpec = (&'static str, &'static [&'static str], &'static str, [&'static str; 2], [&'static str; 2]);

/// The four cases given by whether `ȳ` and `v̄` are trivial, where
/// `φ(b) = ū·v̄` and `φ(aba⁻¹) = ȳ·v̄·ū·ȳ⁻¹`.
pub fn initial_split() -> Vec<InitialCase> {
    let specs: [InitialSpec; 4] = [
        ("1", &["u"], "u.u^-1", ["u", "u"], ["u", "u"]),
        ("2", &["y", "u"], "y.u^-1, u.y, u.u^-1", ["u", "y u y^-1"], ["y", "u"]),
        ("3", &["v", "u"], "v.u^-1, u.v^-1", ["u v", "v u"], ["u^-1", "u v"]),
        ("4", &["v", "u", "y"], "v.u^-1, u.v^-1, y.v^-1, u.y", ["u v", "y v u y^-1"], ["y v", "u v"]),
    ];
    let alpha_loop = gamma(&Subgroup::new(&greek(), vec!["alpha".parse().expect("valid")]).expect("valid"));
    let rose = PointedGraph::rose(&greek());
    specs
        .iter()
        .map(|(id, names, n, psi_images, sigma_images)| {
            let u = Alphabet::new(names).expect("valid names");
            let psi = GroupHom::from_pairs(&greek(), &u, &[("alpha", psi_images[0]), ("beta", psi_images[1])])
                .expect("valid");
            let sigma_i =
                GroupHom::from_pairs(&ab(), &u, &[("a", sigma_images[0]), ("b", sigma_images[1])]).expect("valid");
            let g = functor::core_f_phi(&psi, &alpha_loop).expect("non-degenerate");
            let d = functor::core_f_phi(&psi, &rose).expect("non-degenerate");
            let obj = FgrObject::new(u, parse_set(n)).expect("over U_i");
            let mut rule = RestrictionSet::new();
            for (_, w) in psi.images() {
                rule.extend(whitehead::word_whitehead(w));
            }
            if id == &"1" || id == &"2" {
                rule.extend(parse_set("u.u^-1"));
            }
            let state = CaseState::new(*id, obj, &g, &d, vec![psi.clone()]).expect("Γ_i → Δ_i exists");
            InitialCase { state, psi, sigma: sigma_i, rule_restrictions: rule }
        })
        .collect()
}

/// The auxiliary cases `x` over `{u, v, x}` and `x'` over `{u, v, t, x}`.
pub fn auxiliary_cases() -> (CaseState, CaseState) {
    let build = |id: &str, names: &[&str], gens: &[&str], n: &str| {
        let u = Alphabet::new(names).expect("valid names");
        let words: Vec<Word> = gens.iter().map(|s| s.parse().expect("valid word")).collect();
        let g = gamma(&Subgroup::new(&u, words[..1].to_vec()).expect("over U"));
        let d = gamma(&Subgroup::new(&u, words).expect("over U"));
        let obj = FgrObject::new(u, parse_set(n)).expect("over U");
        CaseState::new(id, obj, &g, &d, Vec::new()).expect("Γ ≤ Δ")
    };
    let x = build(
        "x",
        &["u", "v", "x"],
        &["u v x", "v u x"],
        "v.u^-1, u.v^-1, x.v^-1, x.u^-1, u.x^-1, v.x^-1",
    );
    let x_prime = build(
        "x'",
        &["u", "v", "t", "x"],
        &["u t v x", "v t u x"],
        "t.u^-1, t.v^-1, v.t^-1, u.t^-1, x.u^-1, x.v^-1, u.x^-1, v.x^-1, u.v",
    );
    (x, x_prime)
}

/// Outcome of [`fuzz_theorem`].
#[derive(Clone, Debug, Default)]
pub struct FuzzReport {
    pub trials: usize,
    pub counterexamples: Vec<GroupHom>,
    pub errors: Vec<String>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty() && self.errors.is_empty()
    }
}

/// `x1, …, xn`, or `a, b, c, …` for `n ≤ 26`.
pub fn target_alphabet(n: usize) -> Alphabet {
    let names: Vec<String> = if n <= 26 {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    };
    Alphabet::new(&names).expect("valid names")
}

/// `Trimf ∘ Core ∘ 𝓕_φ` of the root morphism for one `φ`; the error string describes
/// a failed evaluation.
pub fn theorem_instance(phi: &GroupHom, root: &PointedMorphism) -> Result<bool, String> {
    functor::pipeline(phi, root).map(|m| m.classify().injective()).map_err(|e| format!("{phi}: {e}"))
}

/// Samples non-degenerate `φ: F_{a,b} → F_X`, `|X| = n`, with images of length at most
/// `max_len`, and checks that the pipeline result on the root morphism is injective.
pub fn fuzz_theorem(trials: usize, n: usize, max_len: usize, seed: u64, exec: Execution) -> FuzzReport {
    let x = target_alphabet(n);
    let root = root_problem().morphism;
    let results = run_trials(exec, seed, trials, |_, rng| {
        let phi = random::random_hom(rng, &ab(), &x, 1, max_len);
        (theorem_instance(&phi, &root), phi)
    });
    collect_fuzz(trials, results)
}

/// As [`fuzz_theorem`] with `|X|` drawn per trial from `sizes`.
pub fn fuzz_theorem_sizes(trials: usize, sizes: &[usize], max_len: usize, seed: u64, exec: Execution) -> FuzzReport {
    let alphabets: Vec<Alphabet> = sizes.iter().map(|&n| target_alphabet(n)).collect();
    let root = root_problem().morphism;
    let results = run_trials(exec, seed, trials, |_, rng| {
        let x = &alphabets[rng.gen_range(0..alphabets.len())];
        let phi = random::random_hom(rng, &ab(), x, 1, max_len);
        (theorem_instance(&phi, &root), phi)
    });
    collect_fuzz(trials, results)
}

fn collect_fuzz(trials: usize, results: Vec<(Result<bool, String>, GroupHom)>) -> FuzzReport {
    let mut report = FuzzReport { trials, ..FuzzReport::default() };
    for (outcome, phi) in results {
        match outcome {
            Ok(true) => {}
            Ok(false) => report.counterexamples.push(phi),
            Err(e) => report.errors.push(e),
        }
    }
    report
}

/// `W \ N` of a case as text, `∅` when empty.
pub fn format_missing(set: &RestrictionSet) -> String {
    if set.is_empty() {
        "∅".to_string()
    } else {
        format_restrictions(set)
    }
}
