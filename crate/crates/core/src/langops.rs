//! Boolean operations, length-preserving images and inverse images on
//! strong recognizers.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::inclusion::{inclusion_test, InclusionResult};
use crate::recognizer::{linked_pairs, Alphabet, Letter, Mode, Morphism, PairSet, Recognizer};
use crate::semigroup::{close_generators, ClosureOptions, Element};
use crate::syntactic::syntactic_morphism;

/// A letter-to-letter map `π: A -> B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LetterMap {
    source: Alphabet,
    target: Alphabet,
    map: Vec<Letter>,
}

impl LetterMap {
    pub fn new(source: Alphabet, target: Alphabet, map: Vec<Letter>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::InvalidAlphabet(format!(
                "letter map has {} entries for {} letters",
                map.len(),
                source.len()
            )));
        }
        if let Some(&b) = map.iter().find(|&&b| b >= target.len()) {
            return Err(Error::InvalidAlphabet(format!("target letter {b} out of range")));
        }
        Ok(LetterMap { source, target, map })
    }

    /// Builds the map from `(source name, target name)` pairs.
    pub fn from_names<'a>(
        source: Alphabet,
        target: Alphabet,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let mut map = vec![usize::MAX; source.len()];
        for (a, b) in pairs {
            let ai = source.index_of(a).ok_or_else(|| Error::UnknownLetter(a.to_string()))?;
            let bi = target.index_of(b).ok_or_else(|| Error::UnknownLetter(b.to_string()))?;
            map[ai] = bi;
        }
        if let Some(a) = map.iter().position(|&b| b == usize::MAX) {
            return Err(Error::InvalidAlphabet(format!(
                "letter {} is not mapped",
                source.name(a)
            )));
        }
        LetterMap::new(source, target, map)
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn apply(&self, a: Letter) -> Letter {
        self.map[a]
    }

    pub fn map(&self) -> &[Letter] {
        &self.map
    }
}

fn require_strong(r: &Recognizer) -> Result<()> {
    if r.mode() == Mode::Strong {
        Ok(())
    } else {
        Err(Error::NotStrong)
    }
}

/// `A^w \ [P]`, as `F \ P` over the same morphism.
pub fn complement(r: &Recognizer) -> Result<Recognizer> {
    require_strong(r)?;
    let all = linked_pairs(r.semigroup());
    Ok(Recognizer::new_unchecked(
        r.shared_morphism().clone(),
        all.difference(r.accepting()),
        Mode::Strong,
    ))
}

/// How a product combines the two factor languages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combine {
    Union,
    Intersection,
}

/// The morphism `a -> (h1(a), h2(a))` onto the generated subsemigroup of
/// `S1 x S2`, with the accepting sets of both factors lifted to it. A linked
/// pair of the product has linked components, and strong recognition makes
/// each factor's verdict depend only on them.
pub fn lift_to_product(r1: &Recognizer, r2: &Recognizer) -> Result<(Arc<Morphism>, PairSet, PairSet)> {
    require_strong(r1)?;
    require_strong(r2)?;
    if r1.alphabet() != r2.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let (s1, s2) = (r1.semigroup(), r2.semigroup());
    let seeds: Vec<(Element, Element)> = (0..r1.alphabet().len())
        .map(|a| (r1.morphism().image(a), r2.morphism().image(a)))
        .collect();
    let c = close_generators(
        &seeds,
        |x, y| (s1.mul(x.0, y.0), s2.mul(x.1, y.1)),
        ClosureOptions::unaudited(),
    )?;
    let morphism = Arc::new(Morphism::new(r1.alphabet().clone(), c.semigroup, c.seeds)?);
    let n = c.elements.len();
    let (mut p1, mut p2) = (PairSet::new(n), PairSet::new(n));
    for (x, e) in linked_pairs(morphism.target()).iter() {
        let (xv, ev) = (c.elements[x.index()], c.elements[e.index()]);
        if r1.accepting().contains(xv.0, ev.0) {
            p1.insert(x, e);
        }
        if r2.accepting().contains(xv.1, ev.1) {
            p2.insert(x, e);
        }
    }
    Ok((morphism, p1, p2))
}

/// Union or intersection via the direct product, minimized.
pub fn product(r1: &Recognizer, r2: &Recognizer, combine: Combine) -> Result<Recognizer> {
    let (morphism, p1, p2) = lift_to_product(r1, r2)?;
    let p = match combine {
        Combine::Union => p1.union(&p2),
        Combine::Intersection => p1.difference(&p1.difference(&p2)),
    };
    let r = Recognizer::new_unchecked(morphism, p, Mode::Strong);
    Ok(syntactic_morphism(&r)?.recognizer)
}

pub fn union(r1: &Recognizer, r2: &Recognizer) -> Result<Recognizer> {
    product(r1, r2, Combine::Union)
}

pub fn intersection(r1: &Recognizer, r2: &Recognizer) -> Result<Recognizer> {
    product(r1, r2, Combine::Intersection)
}

/// Decides `L(r1) ⊆ L(r2)` for strong recognizers over possibly different
/// morphisms, through their product.
pub fn language_inclusion(r1: &Recognizer, r2: &Recognizer) -> Result<InclusionResult> {
    let (morphism, p1, p2) = lift_to_product(r1, r2)?;
    inclusion_test(&morphism, &p1, &p2)
}

/// Language equality for strong recognizers over possibly different
/// morphisms. Strong recognition makes the lifted sets exact, so set
/// equality decides it.
pub fn language_equivalent(r1: &Recognizer, r2: &Recognizer) -> Result<bool> {
    let (_, p1, p2) = lift_to_product(r1, r2)?;
    Ok(p1 == p2)
}

/// Subset of `S` as a bitset.
type Subset = Vec<u64>;

fn subset_product(s: &crate::semigroup::Semigroup, x: &Subset, y: &Subset) -> Subset {
    let ys: Vec<Element> = members(y).collect();
    let mut out = vec![0u64; x.len()];
    for a in members(x) {
        for &b in &ys {
            let c = s.mul(a, b).index();
            out[c / 64] |= 1 << (c % 64);
        }
    }
    out
}

fn members(x: &Subset) -> impl Iterator<Item = Element> + '_ {
    x.iter().enumerate().flat_map(|(i, &w)| {
        let mut bits = w;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(Element::new(i * 64 + b))
        })
    })
}

/// The image `π(L)`: the subset semigroup generated by
/// `g(b) = {h(a) : π(a) = b}` with `(X, E)` accepting iff some `t in X` and
/// idempotent `f in E` with `t f = t` form an accepting pair. Minimized.
pub fn project(r: &Recognizer, pi: &LetterMap) -> Result<Recognizer> {
    require_strong(r)?;
    if pi.source() != r.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let s = r.semigroup();
    let words = s.size().div_ceil(64);
    let mut seeds = vec![vec![0u64; words]; pi.target().len()];
    for a in 0..pi.source().len() {
        let x = r.morphism().image(a).index();
        seeds[pi.apply(a)][x / 64] |= 1 << (x % 64);
    }
    let c = close_generators(&seeds, |x, y| subset_product(s, x, y), ClosureOptions::unaudited())?;
    let morphism = Arc::new(Morphism::new(pi.target().clone(), c.semigroup, c.seeds)?);
    let mut p = PairSet::new(c.elements.len());
    let accepting_in = |x: &Subset, e: &Subset| {
        let es: Vec<Element> = members(e).filter(|&f| s.is_idempotent(f)).collect();
        members(x).any(|t| es.iter().any(|&f| s.mul(t, f) == t && r.accepting().contains(t, f)))
    };
    for (x, e) in linked_pairs(morphism.target()).iter() {
        if accepting_in(&c.elements[x.index()], &c.elements[e.index()]) {
            p.insert(x, e);
        }
    }
    let image = Recognizer::new_unchecked(morphism, p, Mode::Strong);
    Ok(syntactic_morphism(&image)?.recognizer)
}

/// The inverse image `π⁻¹(L)` over the source alphabet of `π`: letters act
/// as `a -> h(π(a))` on the generated subsemigroup. Minimized.
pub fn inverse_project(r: &Recognizer, pi: &LetterMap) -> Result<Recognizer> {
    require_strong(r)?;
    if pi.target() != r.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let s = r.semigroup();
    let seeds: Vec<Element> = (0..pi.source().len())
        .map(|a| r.morphism().image(pi.apply(a)))
        .collect();
    let c = close_generators(&seeds, |x, y| s.mul(*x, *y), ClosureOptions::unaudited())?;
    let morphism = Arc::new(Morphism::new(pi.source().clone(), c.semigroup, c.seeds)?);
    let index: HashMap<Element, Element> = c
        .elements
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, Element::new(i)))
        .collect();
    let mut p = PairSet::new(c.elements.len());
    for (x, e) in r.accepting().iter() {
        if let (Some(&xi), Some(&ei)) = (index.get(&x), index.get(&e)) {
            p.insert(xi, ei);
        }
    }
    let pre = Recognizer::new_unchecked(morphism, p, Mode::Strong);
    Ok(syntactic_morphism(&pre)?.recognizer)
}
