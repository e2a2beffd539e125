//! Reduced words in free groups, alphabets, and homomorphisms between free groups.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("the identity word has no last letter")]
    EmptyWord,
    #[error("generator `{0}` is not in the source alphabet")]
    UnknownGenerator(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("invalid token `{0}`")]
    InvalidToken(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
}

/// A generator name. Cheap to clone and safe to share between threads.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator(Arc<str>);

impl Generator {
    pub fn new(name: &str) -> Result<Self, WordError> {
        if is_valid_name(name) {
            Ok(Generator(Arc::from(name)))
        } else {
            Err(WordError::InvalidToken(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn pos(&self) -> Letter {
        Letter::new(self.clone(), false)
    }

    pub fn neg(&self) -> Letter {
        Letter::new(self.clone(), true)
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric())
}

/// An element of `X ∪ X⁻¹`: a generator together with a sign.
///
/// Letters order by generator name first, with the positive letter before its inverse.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    gen: Generator,
    inv: bool,
}

impl Letter {
    pub fn new(gen: Generator, inv: bool) -> Self {
        Letter { gen, inv }
    }

    pub fn generator(&self) -> &Generator {
        &self.gen
    }

    pub fn is_inverse(&self) -> bool {
        self.inv
    }

    pub fn is_positive(&self) -> bool {
        !self.inv
    }

    pub fn inverse(&self) -> Letter {
        Letter { gen: self.gen.clone(), inv: !self.inv }
    }

    pub fn is_inverse_of(&self, other: &Letter) -> bool {
        self.gen == other.gen && self.inv != other.inv
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inv {
            write!(f, "{}^-1", self.gen)
        } else {
            write!(f, "{}", self.gen)
        }
    }
}

impl FromStr for Letter {
    type Err = WordError;

    fn from_str(token: &str) -> Result<Self, Self::Err> {
        let (name, inv) = match token.strip_suffix("^-1") {
            Some(name) => (name, true),
            None => (token, false),
        };
        Ok(Letter::new(Generator::new(name).map_err(|_| WordError::InvalidToken(token.to_string()))?, inv))
    }
}

/// An ordered set of generator names with a counter for minting fresh ones.
#[derive(Clone, Debug, Default)]
pub struct Alphabet {
    gens: Vec<Generator>,
    fresh: u64,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens
    }
}

impl Eq for Alphabet {}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, WordError> {
        let mut alphabet = Alphabet::default();
        for name in names {
            let gen = Generator::new(name.as_ref())?;
            if alphabet.contains(&gen) {
                return Err(WordError::DuplicateGenerator(gen.to_string()));
            }
            alphabet.gens.push(gen);
        }
        Ok(alphabet)
    }

    /// Alphabet of all generators occurring in `words`, in order of first appearance.
    pub fn from_words<'a>(words: impl IntoIterator<Item = &'a Word>) -> Self {
        let mut alphabet = Alphabet::default();
        for word in words {
            for letter in word.letters() {
                alphabet.insert(letter.generator().clone());
            }
        }
        alphabet
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains(&self, gen: &Generator) -> bool {
        self.gens.contains(gen)
    }

    pub fn get(&self, name: &str) -> Option<&Generator> {
        self.gens.iter().find(|g| g.name() == name)
    }

    /// Adds `gen` if absent; returns whether it was added.
    pub fn insert(&mut self, gen: Generator) -> bool {
        if self.contains(&gen) {
            false
        } else {
            self.gens.push(gen);
            true
        }
    }

    pub fn remove(&mut self, gen: &Generator) {
        self.gens.retain(|g| g != gen);
    }

    pub fn union(&self, other: &Alphabet) -> Alphabet {
        let mut out = self.clone();
        for gen in &other.gens {
            out.insert(gen.clone());
        }
        out.fresh = self.fresh.max(other.fresh);
        out
    }

    /// Same generator set, ignoring order.
    pub fn same_set(&self, other: &Alphabet) -> bool {
        self.len() == other.len() && self.gens.iter().all(|g| other.contains(g))
    }

    /// All letters of `X ∪ X⁻¹`, each generator followed by its inverse.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.gens.iter().flat_map(|g| [g.pos(), g.neg()])
    }

    /// Adds and returns a generator that is not yet in the alphabet. The preferred
    /// names are tried first, then `t1`, `t2`, ...
    pub fn mint_fresh(&mut self, preferred: &[&str]) -> Generator {
        for name in preferred {
            if let Ok(gen) = Generator::new(name) {
                if !self.contains(&gen) {
                    self.gens.push(gen.clone());
                    return gen;
                }
            }
        }
        loop {
            self.fresh += 1;
            let gen = Generator::new(&format!("t{}", self.fresh)).expect("minted names are valid");
            if !self.contains(&gen) {
                self.gens.push(gen.clone());
                return gen;
            }
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "}}")
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn letter(letter: Letter) -> Self {
        Word { letters: vec![letter] }
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut stack: Vec<Letter> = Vec::new();
        for letter in letters {
            if stack.last().is_some_and(|top| top.is_inverse_of(&letter)) {
                stack.pop();
            } else {
                stack.push(letter);
            }
        }
        Word { letters: stack }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    pub fn first(&self) -> Option<&Letter> {
        self.letters.first()
    }

    /// The last letter (τ). Undefined on the identity.
    pub fn tau(&self) -> Result<&Letter, WordError> {
        self.letters.last().ok_or(WordError::EmptyWord)
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(Letter::inverse).collect() }
    }

    /// Reduced product, plus whether the concatenation needed no cancellation.
    pub fn concat(&self, other: &Word) -> (Word, bool) {
        let no_cancel = match (self.letters.last(), other.letters.first()) {
            (Some(last), Some(first)) => !last.is_inverse_of(first),
            _ => true,
        };
        (self.mul(other), no_cancel)
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::reduce(self.letters.iter().chain(other.letters.iter()).cloned())
    }

    /// `self · other · self⁻¹`.
    pub fn conjugate(&self, other: &Word) -> Word {
        self.mul(other).mul(&self.inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(first), Some(last)) if self.letters.len() > 1 => !first.is_inverse_of(last),
            _ => true,
        }
    }

    /// Splits `w = y · core · y⁻¹` with `core` cyclically reduced and `y` maximal.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.letters.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k].is_inverse_of(&self.letters[n - 1 - k]) {
            k += 1;
        }
        let prefix = Word { letters: self.letters[..k].to_vec() };
        let core = Word { letters: self.letters[k..n - k].to_vec() };
        (prefix, core)
    }

    pub fn generators(&self) -> impl Iterator<Item = &Generator> {
        self.letters.iter().map(Letter::generator)
    }

    /// Text syntax: whitespace-separated tokens, empty string for the identity.
    pub fn to_text(&self) -> String {
        self.letters.iter().map(Letter::to_string).collect::<Vec<_>>().join(" ")
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            f.write_str("1")
        } else {
            f.write_str(&self.to_text())
        }
    }
}

impl FromStr for Word {
    type Err = WordError;

    /// Parses the word text syntax. `1` is accepted as the identity; the result is reduced.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut letters = Vec::new();
        for token in s.split_whitespace() {
            if token == "1" {
                continue;
            }
            letters.push(token.parse()?);
        }
        Ok(Word::reduce(letters))
    }
}

/// A homomorphism `F_source → F_target`, given by the images of the source generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: Alphabet,
    target: Alphabet,
    images: BTreeMap<Generator, Word>,
}

impl GroupHom {
    pub fn new(source: Alphabet, target: Alphabet, images: BTreeMap<Generator, Word>) -> Result<Self, WordError> {
        for gen in source.generators() {
            let image = images.get(gen).ok_or_else(|| WordError::UnknownGenerator(gen.to_string()))?;
            if let Some(g) = image.generators().find(|g| !target.contains(g)) {
                return Err(WordError::AlphabetMismatch(format!("image of {gen} uses {g}, not in target {target}")));
            }
        }
        if let Some(g) = images.keys().find(|g| !source.contains(g)) {
            return Err(WordError::UnknownGenerator(g.to_string()));
        }
        Ok(GroupHom { source, target, images })
    }

    pub fn from_pairs(source: &Alphabet, target: &Alphabet, pairs: &[(&str, &str)]) -> Result<Self, WordError> {
        let mut images = BTreeMap::new();
        for (name, image) in pairs {
            let gen = Generator::new(name)?;
            images.insert(gen, image.parse::<Word>()?);
        }
        GroupHom::new(source.clone(), target.clone(), images)
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        let images = alphabet.generators().iter().map(|g| (g.clone(), Word::letter(g.pos()))).collect();
        GroupHom { source: alphabet.clone(), target: alphabet.clone(), images }
    }

    /// `x ↦ u x u⁻¹` for every generator `x`.
    pub fn conjugation(u: &Word, alphabet: &Alphabet) -> Self {
        let target = alphabet.union(&Alphabet::from_words([u]));
        let images =
            alphabet.generators().iter().map(|g| (g.clone(), u.conjugate(&Word::letter(g.pos())))).collect();
        GroupHom { source: alphabet.clone(), target, images }
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn image(&self, gen: &Generator) -> Option<&Word> {
        self.images.get(gen)
    }

    pub fn images(&self) -> impl Iterator<Item = (&Generator, &Word)> {
        self.source.generators().iter().map(move |g| (g, &self.images[g]))
    }

    /// Image of a signed letter.
    pub fn apply_letter(&self, letter: &Letter) -> Result<Word, WordError> {
        let image =
            self.images.get(letter.generator()).ok_or_else(|| WordError::UnknownGenerator(letter.to_string()))?;
        Ok(if letter.is_inverse() { image.inverse() } else { image.clone() })
    }

    pub fn apply(&self, word: &Word) -> Result<Word, WordError> {
        let mut raw = Vec::new();
        for letter in word.letters() {
            raw.extend(self.apply_letter(letter)?.letters().iter().cloned());
        }
        Ok(Word::reduce(raw))
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &GroupHom) -> Result<GroupHom, WordError> {
        if !inner.target.generators().iter().all(|g| self.source.contains(g)) {
            return Err(WordError::AlphabetMismatch(format!(
                "inner target {} is not contained in outer source {}",
                inner.target, self.source
            )));
        }
        let mut images = BTreeMap::new();
        for (gen, word) in inner.images() {
            images.insert(gen.clone(), self.apply(word)?);
        }
        Ok(GroupHom { source: inner.source.clone(), target: self.target.clone(), images })
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.images.values().all(|w| !w.is_identity())
    }

    /// Generators whose image differs from the generator itself.
    pub fn moved(&self) -> impl Iterator<Item = (&Generator, &Word)> {
        self.images().filter(|(g, w)| **w != Word::letter(g.pos()))
    }
}

impl fmt::Display for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (g, w)) in self.images().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}->{w}")?;
        }
        Ok(())
    }
}

/// Parses `x -> word` lines; blank lines and `#` comments are skipped. The source
/// alphabet is the left-hand sides in order, the target alphabet every generator
/// appearing on a right-hand side.
pub fn parse_hom(text: &str) -> Result<GroupHom, WordError> {
    let mut source = Alphabet::default();
    let mut images = BTreeMap::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (lhs, rhs) = line.split_once("->").ok_or_else(|| WordError::InvalidToken(line.to_string()))?;
        let gen = Generator::new(lhs.trim())?;
        if !source.insert(gen.clone()) {
            return Err(WordError::DuplicateGenerator(gen.to_string()));
        }
        images.insert(gen, rhs.parse::<Word>()?);
    }
    let target = Alphabet::from_words(images.values());
    GroupHom::new(source, target, images)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn ab() -> Alphabet {
        Alphabet::new(&["a", "b"]).unwrap()
    }

    /// Repeatedly deletes the first adjacent cancelling pair until none is left.
    fn reduce_by_pair_elimination(mut letters: Vec<Letter>) -> Vec<Letter> {
        loop {
            let pos = letters.windows(2).position(|p| p[0].is_inverse_of(&p[1]));
            match pos {
                Some(i) => {
                    letters.drain(i..i + 2);
                }
                None => return letters,
            }
        }
    }

    fn raw(s: &str) -> Vec<Letter> {
        s.split_whitespace().map(|t| t.parse().unwrap()).collect()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(Word::reduce(raw("a a^-1 b")), w("b"));
        assert_eq!(Word::reduce(vec![]), Word::identity());
        let input = raw("a b b^-1 a a^-1 b");
        let expected = reduce_by_pair_elimination(input.clone());
        assert_eq!(Word::reduce(input).letters(), &expected[..]);
        assert_eq!(Word::reduce(raw("a b b^-1 a a^-1 b")), w("a b"));
    }

    #[test]
    fn concat_examples() {
        let (p, ok) = w("a b").concat(&w("b^-1 a"));
        assert_eq!((p, ok), (w("a a"), false));
        assert_eq!(w("a").concat(&w("b")), (w("a b"), true));
        assert_eq!(w("a b").concat(&w("a^-1")), (w("a b a^-1"), true));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w("a b").inverse(), w("b^-1 a^-1"));
        assert_eq!(Word::identity().inverse(), Word::identity());
        assert_eq!(w("a b a^-1").inverse(), w("a b^-1 a^-1"));
    }

    #[test]
    fn tau_examples() {
        assert_eq!(w("a b a^-1").tau().unwrap(), &"a^-1".parse::<Letter>().unwrap());
        assert_eq!(w("b").tau().unwrap().to_string(), "b");
        assert_eq!(w("t^-1 y").tau().unwrap().to_string(), "y");
        assert_eq!(Word::identity().tau(), Err(WordError::EmptyWord));
    }

    #[test]
    fn cyclic_reduce_examples() {
        let word = w("a b a b^-1 a^-1");
        let (y, core) = word.cyclic_reduce();
        assert_eq!((y.clone(), core.clone()), (w("a b"), w("a")));
        assert_eq!(y.mul(&core).mul(&y.inverse()), word);
        assert_eq!(w("b").cyclic_reduce(), (Word::identity(), w("b")));
        assert_eq!(Word::identity().cyclic_reduce(), (Word::identity(), Word::identity()));
    }

    #[test]
    fn apply_hom_examples() {
        let greek = Alphabet::new(&["alpha", "beta"]).unwrap();
        let sigma = GroupHom::from_pairs(&greek, &ab(), &[("alpha", "b"), ("beta", "a b a^-1")]).unwrap();
        assert_eq!(sigma.apply(&w("alpha beta")).unwrap(), w("b a b a^-1"));
        assert_eq!(sigma.apply(&Word::identity()).unwrap(), Word::identity());
        let phi = GroupHom::from_pairs(&ab(), &ab(), &[("a", "a b"), ("b", "b^-1")]).unwrap();
        assert_eq!(phi.apply(&w("a b")).unwrap(), w("a"));
        assert!(matches!(phi.apply(&w("c")), Err(WordError::UnknownGenerator(_))));
    }

    #[test]
    fn compose_examples() {
        let uyt = Alphabet::new(&["u", "y", "t"]).unwrap();
        let uy = Alphabet::new(&["u", "y"]).unwrap();
        let psi = GroupHom::from_pairs(&uy, &uyt, &[("u", "u t"), ("y", "t^-1 y")]).unwrap();
        assert_eq!(GroupHom::identity(&uyt).compose(&psi).unwrap(), psi);

        let greek = Alphabet::new(&["alpha", "beta"]).unwrap();
        let sigma = GroupHom::from_pairs(&greek, &ab(), &[("alpha", "b"), ("beta", "a b a^-1")]).unwrap();
        let phi = GroupHom::from_pairs(&ab(), &ab(), &[("a", "a b"), ("b", "b a")]).unwrap();
        let composed = phi.compose(&sigma).unwrap();
        assert_eq!(composed.image(&Generator::new("alpha").unwrap()).unwrap(), &phi.apply(&w("b")).unwrap());

        let swap = GroupHom::from_pairs(&ab(), &ab(), &[("a", "b"), ("b", "a")]).unwrap();
        let inv = GroupHom::from_pairs(&ab(), &ab(), &[("a", "a^-1"), ("b", "b")]).unwrap();
        let both = swap.compose(&inv).unwrap();
        for gen in ab().generators() {
            let expected = swap.apply(inv.image(gen).unwrap()).unwrap();
            assert_eq!(both.image(gen).unwrap(), &expected);
        }
        assert!(matches!(psi.compose(&sigma), Err(WordError::AlphabetMismatch(_))));
    }

    #[test]
    fn nondegenerate_examples() {
        let greek = Alphabet::new(&["alpha", "beta"]).unwrap();
        let sigma = GroupHom::from_pairs(&greek, &ab(), &[("alpha", "b"), ("beta", "a b a^-1")]).unwrap();
        assert!(sigma.is_nondegenerate());
        let kill = GroupHom::from_pairs(&ab(), &ab(), &[("a", ""), ("b", "b")]).unwrap();
        assert!(!kill.is_nondegenerate());
        assert!(GroupHom::identity(&ab()).is_nondegenerate());
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(GroupHom::conjugation(&Word::identity(), &ab()), GroupHom::identity(&ab()));
        let c = GroupHom::conjugation(&w("a"), &ab());
        assert_eq!(c.image(&Generator::new("a").unwrap()).unwrap(), &w("a"));
        assert_eq!(c.image(&Generator::new("b").unwrap()).unwrap(), &w("a b a^-1"));
        let c = GroupHom::conjugation(&w("a b"), &ab());
        assert_eq!(c.image(&Generator::new("a").unwrap()).unwrap(), &w("a b a b^-1 a^-1"));
        assert_eq!(c.image(&Generator::new("b").unwrap()).unwrap(), &w("a b a^-1"));
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(w("").to_text(), "");
        assert_eq!(w("1"), Word::identity());
        assert_eq!(w("a b^-1 a").to_string(), "a b^-1 a");
        assert!("a ^-1".parse::<Word>().is_err());
        assert!("9a".parse::<Word>().is_err());
        let hom = parse_hom("# sigma\nalpha -> b\nbeta -> a b a^-1\n").unwrap();
        assert_eq!(hom.source().len(), 2);
        assert!(hom.target().same_set(&ab()));
    }

    #[test]
    fn fresh_minting_avoids_collisions() {
        let mut alphabet = Alphabet::new(&["t", "t1", "u"]).unwrap();
        assert_eq!(alphabet.mint_fresh(&["t", "s"]).name(), "s");
        assert_eq!(alphabet.mint_fresh(&["t", "s"]).name(), "t2");
        assert_eq!(alphabet.len(), 5);
        assert!(Alphabet::new(&["a", "a"]).is_err());
    }
}
