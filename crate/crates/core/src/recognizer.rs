//! Morphisms `A+ -> S`, sets of linked pairs, and recognizers built from them.

use std::fmt;
use std::sync::Arc;

use crate::conjugacy;
use crate::error::{Error, Result};
use crate::semigroup::{Element, Semigroup};

/// A letter is its position in the alphabet.
pub type Letter = usize;

/// A finite, ordered, non-empty set of letter names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        for (i, a) in letters.iter().enumerate() {
            if a.is_empty() || a.chars().any(|c| c.is_whitespace() || "()^.#".contains(c)) {
                return Err(Error::InvalidAlphabet(format!("bad letter name `{a}`")));
            }
            if letters[..i].contains(a) {
                return Err(Error::InvalidAlphabet(format!("duplicate letter `{a}`")));
            }
        }
        Ok(Alphabet { letters })
    }

    /// Single-character letters `a`, `b`, ...
    pub fn from_chars(chars: &str) -> Result<Self> {
        Alphabet::new(chars.chars().map(String::from))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn name(&self, a: Letter) -> &str {
        &self.letters[a]
    }

    pub fn index_of(&self, name: &str) -> Option<Letter> {
        self.letters.iter().position(|l| l == name)
    }

    fn single_chars(&self) -> bool {
        self.letters.iter().all(|l| l.chars().count() == 1)
    }

    /// Parses a finite word. Words over single-character alphabets are
    /// written contiguously, others separate letters with `.`.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Letter>> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Vec::new());
        }
        if self.single_chars() {
            text.chars()
                .map(|c| {
                    let s = c.to_string();
                    self.index_of(&s).ok_or(Error::UnknownLetter(s))
                })
                .collect()
        } else {
            text.split('.')
                .map(|s| self.index_of(s).ok_or_else(|| Error::UnknownLetter(s.to_string())))
                .collect()
        }
    }

    pub fn format_word(&self, word: &[Letter]) -> String {
        let sep = if self.single_chars() { "" } else { "." };
        word.iter().map(|&a| self.name(a)).collect::<Vec<_>>().join(sep)
    }
}

/// A morphism `h: A+ -> S` onto a finite semigroup, given by the images of
/// the letters. The target is always generated by the letter images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    alphabet: Alphabet,
    target: Semigroup,
    images: Vec<Element>,
    /// Letter -> index into `target.generators()`.
    generator_of_letter: Vec<usize>,
    /// Generator index -> first letter mapping to it.
    letter_of_generator: Vec<Letter>,
    /// Shortlex-least word per element, stored as (prefix element, letter).
    representative: Vec<(u32, u32)>,
}

impl Morphism {
    /// Builds the morphism sending letter `i` to `images[i]`. The generating
    /// set of `target` is replaced by the distinct images; fails if they do
    /// not generate all of `target`.
    pub fn new(alphabet: Alphabet, target: Semigroup, images: Vec<Element>) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::InvalidSemigroup(format!(
                "{} letter images for {} letters",
                images.len(),
                alphabet.len()
            )));
        }
        let mut distinct: Vec<Element> = Vec::new();
        for &x in &images {
            if x.index() >= target.size() {
                return Err(Error::InvalidSemigroup(format!("image {x} out of range")));
            }
            if !distinct.contains(&x) {
                distinct.push(x);
            }
        }
        let target = if target.generators() == distinct.as_slice() {
            target
        } else {
            target.with_generators(distinct)?
        };
        Ok(Morphism::assemble(alphabet, target, images))
    }

    /// Used when `target` was closed from exactly the distinct letter images
    /// in letter order.
    pub(crate) fn assemble(alphabet: Alphabet, target: Semigroup, images: Vec<Element>) -> Self {
        let generator_of_letter: Vec<usize> = images
            .iter()
            .map(|x| {
                target
                    .generators()
                    .iter()
                    .position(|g| g == x)
                    .expect("letter image is not a generator")
            })
            .collect();
        let mut letter_of_generator = vec![usize::MAX; target.generators().len()];
        for (a, &g) in generator_of_letter.iter().enumerate() {
            if letter_of_generator[g] == usize::MAX {
                letter_of_generator[g] = a;
            }
        }
        let n = target.size();
        let mut representative = vec![(u32::MAX, u32::MAX); n];
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        for (gi, g) in target.generators().iter().enumerate() {
            seen[g.index()] = true;
            representative[g.index()] = (u32::MAX, letter_of_generator[gi] as u32);
            queue.push_back(*g);
        }
        while let Some(s) = queue.pop_front() {
            for (gi, &a) in letter_of_generator.iter().enumerate() {
                let t = target.right(s, gi);
                if !seen[t.index()] {
                    seen[t.index()] = true;
                    representative[t.index()] = (s.index() as u32, a as u32);
                    queue.push_back(t);
                }
            }
        }
        Morphism {
            alphabet,
            target,
            images,
            generator_of_letter,
            letter_of_generator,
            representative,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn target(&self) -> &Semigroup {
        &self.target
    }

    pub fn image(&self, a: Letter) -> Element {
        self.images[a]
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    /// Index of `h(a)` among the generators of the target.
    pub fn generator_of(&self, a: Letter) -> usize {
        self.generator_of_letter[a]
    }

    /// A letter whose image is the `gen`-th generator.
    pub fn letter_of_generator(&self, gen: usize) -> Letter {
        self.letter_of_generator[gen]
    }

    /// `h(w)` for a non-empty word.
    pub fn evaluate(&self, word: &[Letter]) -> Result<Element> {
        let (&first, rest) = word.split_first().ok_or(Error::EmptyWord)?;
        let check = |a: Letter| {
            if a < self.alphabet.len() {
                Ok(a)
            } else {
                Err(Error::UnknownLetter(format!("#{a}")))
            }
        };
        let mut x = self.images[check(first)?];
        for &a in rest {
            x = self.target.right(x, self.generator_of_letter[check(a)?]);
        }
        Ok(x)
    }

    pub fn evaluate_str(&self, word: &str) -> Result<Element> {
        self.evaluate(&self.alphabet.parse_word(word)?)
    }

    /// The shortlex-least word mapped to `s`.
    pub fn representative(&self, s: Element) -> Vec<Letter> {
        let mut word = Vec::new();
        let mut cur = s.index() as u32;
        loop {
            let (prev, a) = self.representative[cur as usize];
            word.push(a as usize);
            if prev == u32::MAX {
                break;
            }
            cur = prev;
        }
        word.reverse();
        word
    }
}

/// A set of pairs of elements, stored as a flat `|S| x |S|` bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PairSet {
    n: usize,
    bits: Vec<u64>,
}

impl PairSet {
    pub fn new(n: usize) -> Self {
        PairSet {
            n,
            bits: vec![0; (n * n).div_ceil(64)],
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (Element, Element)>>(n: usize, pairs: I) -> Self {
        let mut set = PairSet::new(n);
        for (s, e) in pairs {
            set.insert(s, e);
        }
        set
    }

    /// Size of the underlying semigroup.
    pub fn universe(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, s: Element, e: Element) -> bool {
        let i = s.index() * self.n + e.index();
        self.bits[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, s: Element, e: Element) -> bool {
        let i = s.index() * self.n + e.index();
        let had = self.bits[i >> 6] >> (i & 63) & 1 == 1;
        self.bits[i >> 6] |= 1 << (i & 63);
        !had
    }

    pub fn remove(&mut self, s: Element, e: Element) {
        let i = s.index() * self.n + e.index();
        self.bits[i >> 6] &= !(1 << (i & 63));
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Element, Element)> + '_ {
        let n = self.n;
        self.bits.iter().enumerate().flat_map(move |(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                let i = wi * 64 + b;
                Some((Element::new(i / n), Element::new(i % n)))
            })
        })
    }

    pub fn is_subset(&self, other: &PairSet) -> bool {
        self.n == other.n && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn difference(&self, other: &PairSet) -> PairSet {
        assert_eq!(self.n, other.n);
        PairSet {
            n: self.n,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a & !b).collect(),
        }
    }

    pub fn union(&self, other: &PairSet) -> PairSet {
        assert_eq!(self.n, other.n);
        PairSet {
            n: self.n,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect(),
        }
    }
}

impl fmt::Debug for PairSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.iter().map(|(s, e)| (s.index(), e.index())))
            .finish()
    }
}

/// All linked pairs `(s, e)`: `e` idempotent and `s e = s`.
///
/// For each idempotent `e`, the elements `s` with `s e = s` are exactly
/// `S^1 e`, found by a search in the left Cayley graph starting at `e`.
pub fn linked_pairs(s: &Semigroup) -> PairSet {
    let n = s.size();
    let ng = s.generators().len();
    let mut set = PairSet::new(n);
    let mut seen = vec![u32::MAX; n];
    let mut stack = Vec::new();
    for e in s.idempotents() {
        let mark = e.index() as u32;
        seen[e.index()] = mark;
        stack.push(e);
        while let Some(x) = stack.pop() {
            set.insert(x, e);
            for gi in 0..ng {
                let y = s.left(x, gi);
                if seen[y.index()] != mark {
                    seen[y.index()] = mark;
                    stack.push(y);
                }
            }
        }
    }
    set
}

pub fn is_linked_pair(s: &Semigroup, x: Element, e: Element) -> bool {
    s.is_idempotent(e) && s.mul(x, e) == x
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Weak,
    Strong,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Weak => "weak",
            Mode::Strong => "strong",
        })
    }
}

/// A morphism together with a set of linked pairs; recognizes `[P]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recognizer {
    morphism: Arc<Morphism>,
    accepting: PairSet,
    mode: Mode,
}

impl Recognizer {
    /// Checks that every accepting pair is linked and, in strong mode, that
    /// the set is closed under conjugation.
    pub fn new(morphism: Arc<Morphism>, accepting: PairSet, mode: Mode) -> Result<Self> {
        let s = morphism.target();
        if accepting.universe() != s.size() {
            return Err(Error::InvalidSemigroup("pair set over a different semigroup".into()));
        }
        for (x, e) in accepting.iter() {
            if !is_linked_pair(s, x, e) {
                return Err(Error::NotLinkedPair {
                    s: x.index(),
                    e: e.index(),
                });
            }
        }
        if mode == Mode::Strong && conjugacy::close_under_conjugation(&morphism, &accepting)? != accepting {
            return Err(Error::NotClosed);
        }
        Ok(Recognizer {
            morphism,
            accepting,
            mode,
        })
    }

    pub(crate) fn new_unchecked(morphism: Arc<Morphism>, accepting: PairSet, mode: Mode) -> Self {
        debug_assert!(accepting.iter().all(|(x, e)| is_linked_pair(morphism.target(), x, e)));
        Recognizer {
            morphism,
            accepting,
            mode,
        }
    }

    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }

    pub fn shared_morphism(&self) -> &Arc<Morphism> {
        &self.morphism
    }

    pub fn semigroup(&self) -> &Semigroup {
        self.morphism.target()
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.morphism.alphabet()
    }

    pub fn accepting(&self) -> &PairSet {
        &self.accepting
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Same morphism and accepting set, but a weak-mode view.
    pub fn as_weak(&self) -> Recognizer {
        Recognizer {
            mode: Mode::Weak,
            ..self.clone()
        }
    }

    pub fn with_accepting(&self, accepting: PairSet, mode: Mode) -> Result<Recognizer> {
        Recognizer::new(self.morphism.clone(), accepting, mode)
    }

    /// `[P]` is empty iff `P` is: the morphism is onto, so every `[s][e]^w`
    /// with `(s, e)` linked is non-empty.
    pub fn is_empty(&self) -> bool {
        self.accepting.is_empty()
    }

    /// Decides `u v^w in [P]`.
    pub fn member(&self, word: &UpWord) -> Result<bool> {
        member(self, word)
    }

    pub fn stats(&self) -> RecognizerStats {
        RecognizerStats {
            size: self.semigroup().size(),
            linked_pairs: linked_pairs(self.semigroup()).len(),
            accepting: self.accepting.len(),
        }
    }
}

/// The three columns `|S|`, `|F|`, `|P|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RecognizerStats {
    pub size: usize,
    pub linked_pairs: usize,
    pub accepting: usize,
}

impl fmt::Display for RecognizerStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|S|={} |F|={} |P|={}", self.size, self.linked_pairs, self.accepting)
    }
}

/// The strong recognizer of `A^w`: all linked pairs accept.
pub fn universal_recognizer(h: Arc<Morphism>) -> Recognizer {
    let all = linked_pairs(h.target());
    Recognizer::new_unchecked(h, all, Mode::Strong)
}

/// An ultimately periodic word `u v^w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UpWord {
    prefix: Vec<Letter>,
    period: Vec<Letter>,
}

impl UpWord {
    pub fn new(prefix: Vec<Letter>, period: Vec<Letter>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        Ok(UpWord { prefix, period })
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    /// Letter at position `i` of the infinite word.
    pub fn letter_at(&self, i: usize) -> Letter {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// Parses `u(v)^w`.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self> {
        let text = text.trim();
        let bad = |m: &str| Error::parse(1, 1, format!("{m} in `{text}`"));
        let open = text.find('(').ok_or_else(|| bad("missing `(`"))?;
        let rest = &text[open + 1..];
        let close = rest.rfind(')').ok_or_else(|| bad("missing `)`"))?;
        if rest[close + 1..].trim() != "^w" {
            return Err(bad("expected `^w` after the period"));
        }
        let prefix = alphabet.parse_word(&text[..open])?;
        let period = alphabet.parse_word(&rest[..close])?;
        UpWord::new(prefix, period)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        struct D<'a>(&'a UpWord, &'a Alphabet);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(
                    f,
                    "{}({})^w",
                    self.1.format_word(&self.0.prefix),
                    self.1.format_word(&self.0.period)
                )
            }
        }
        D(self, alphabet)
    }
}

/// Decides whether `u v^w` lies in `[P]`.
///
/// With `f = h(v)^n` the idempotent power of `h(v)` and `u' = u v^n`, the pair
/// `(h(u'), f)` is linked. In strong mode that pair alone decides membership.
/// In weak mode every factorization `v^n = v1 v2` with `v1` non-empty is
/// tested against `P` via `(h(u' v1), h(v2 v^n v1))`.
pub fn member(r: &Recognizer, word: &UpWord) -> Result<bool> {
    let h = r.morphism();
    let s = h.target();
    if word.period.is_empty() {
        return Err(Error::EmptyPeriod);
    }
    let t = h.evaluate(&word.period)?;
    let (f, n) = s.idempotent_power_with_exponent(t);
    // h(u v^n); an empty prefix is absorbed by rotating one period in.
    let head = if word.prefix.is_empty() {
        f
    } else {
        s.mul(h.evaluate(&word.prefix)?, f)
    };
    if r.mode() == Mode::Strong {
        return Ok(r.accepting().contains(head, f));
    }

    let m = word.period.len() * n;
    let letter = |i: usize| word.period[i % word.period.len()];
    // prefix[i] = h(v'[..i+1]); suffix[i] = h(v'[i..]) for i < m.
    let mut prefix = Vec::with_capacity(m);
    let mut x = h.image(letter(0));
    prefix.push(x);
    for i in 1..m {
        x = s.right(x, h.generator_of(letter(i)));
        prefix.push(x);
    }
    let mut suffix = vec![Element::new(0); m];
    let mut y = h.image(letter(m - 1));
    suffix[m - 1] = y;
    for i in (0..m - 1).rev() {
        y = s.left(y, h.generator_of(letter(i)));
        suffix[i] = y;
    }
    for cut in 1..=m {
        let v1 = prefix[cut - 1];
        let first = s.mul(head, v1);
        let loop_ = if cut == m { f } else { s.mul(s.mul(suffix[cut], f), v1) };
        if r.accepting().contains(first, loop_) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testgen;

    #[test]
    fn evaluate_follows_the_table() {
        let h = testgen::rectangular_band_morphism(false);
        let e = |w: &str| h.evaluate_str(w).unwrap();
        assert_eq!(testgen::band_value(&h, e("a")), (1, 2));
        assert_eq!(testgen::band_value(&h, e("ab")), (1, 1));
        assert_eq!(testgen::band_value(&h, e("abab")), (1, 1));
        assert!(matches!(h.evaluate(&[]), Err(Error::EmptyWord)));
        assert!(matches!(h.evaluate_str("z"), Err(Error::UnknownLetter(_))));
    }

    #[test]
    fn linked_pairs_of_rectangular_band() {
        let h = testgen::rectangular_band_morphism(false);
        let s = h.target();
        let f = linked_pairs(s);
        assert_eq!(f.len(), 8);
        for (x, e) in f.iter() {
            let (xv, ev) = (testgen::band_value(&h, x), testgen::band_value(&h, e));
            assert_eq!(xv.1, ev.1);
        }
        // brute force
        let brute = s
            .elements()
            .flat_map(|x| s.elements().map(move |e| (x, e)))
            .filter(|&(x, e)| is_linked_pair(s, x, e))
            .count();
        assert_eq!(brute, 8);
    }

    #[test]
    fn membership_in_band_language() {
        let r = testgen::rectangular_band_recognizer(false, false);
        let a = r.alphabet();
        let w = |t: &str| UpWord::parse(t, a).unwrap();
        assert!(r.member(&w("(ab)^w")).unwrap());
        assert!(r.member(&w("aab(abb)^w")).unwrap());
        assert!(!r.member(&w("(a)^w")).unwrap());
        assert!(!r.member(&w("ab(b)^w")).unwrap());
        assert!(!r.member(&w("b(ab)^w")).unwrap());
    }

    #[test]
    fn closing_the_band_set_adds_a_points() {
        // ((1,1),(1,1)) is conjugate to ((1,2),(1,2)), whose language holds a^w.
        let r = testgen::rectangular_band_recognizer(false, true);
        let a = r.alphabet();
        assert!(r.member(&UpWord::parse("(a)^w", a).unwrap()).unwrap());
        assert!(r.member(&UpWord::parse("(ab)^w", a).unwrap()).unwrap());
    }

    #[test]
    fn empty_accepting_set_rejects_everything() {
        let h = Arc::new(testgen::rectangular_band_morphism(true));
        let r = Recognizer::new(h.clone(), PairSet::new(h.target().size()), Mode::Strong).unwrap();
        assert!(r.is_empty());
        let a = r.alphabet().clone();
        for t in ["(a)^w", "(abc)^w", "cc(b)^w"] {
            assert!(!r.member(&UpWord::parse(t, &a).unwrap()).unwrap());
        }
    }

    #[test]
    fn universal_recognizer_accepts_everything() {
        let h = Arc::new(testgen::rectangular_band_morphism(false));
        let r = universal_recognizer(h);
        assert!(!r.is_empty());
        let a = r.alphabet().clone();
        for t in ["(ab)^w", "(a)^w", "b(b)^w"] {
            assert!(r.member(&UpWord::parse(t, &a).unwrap()).unwrap());
        }
    }

    #[test]
    fn upword_text_round_trip() {
        let a = Alphabet::from_chars("abc").unwrap();
        let w = UpWord::parse("c(c)^w", &a).unwrap();
        assert_eq!(w.display(&a).to_string(), "c(c)^w");
        let w = UpWord::parse("(ab)^w", &a).unwrap();
        assert!(w.prefix().is_empty());
        assert!(matches!(UpWord::parse("a()^w", &a), Err(Error::EmptyPeriod)));
        let bits = Alphabet::new(["00", "01", "10", "11"]).unwrap();
        let w = UpWord::parse("01.10(11)^w", &bits).unwrap();
        assert_eq!(w.prefix(), &[1, 2]);
        assert_eq!(w.display(&bits).to_string(), "01.10(11)^w");
    }

    #[test]
    fn strong_recognizer_rejects_unclosed_set() {
        let h = Arc::new(testgen::rectangular_band_morphism(false));
        let band = |i, j| testgen::band_element(&h, (i, j));
        let p = PairSet::from_pairs(4, [(band(1, 1), band(1, 1))]);
        assert!(matches!(
            Recognizer::new(h.clone(), p.clone(), Mode::Strong),
            Err(Error::NotClosed)
        ));
        assert!(Recognizer::new(h, p, Mode::Weak).is_ok());
    }

    #[test]
    fn non_linked_pair_is_rejected() {
        let h = Arc::new(testgen::rectangular_band_morphism(false));
        let band = |i, j| testgen::band_element(&h, (i, j));
        let p = PairSet::from_pairs(4, [(band(1, 1), band(2, 2))]);
        assert!(matches!(
            Recognizer::new(h, p, Mode::Weak),
            Err(Error::NotLinkedPair { .. })
        ));
    }
}
