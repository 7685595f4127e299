//! Fixture generators: small hand-made instances, random semigroups and
//! recognizers, and the adversarial family with many conjugacy classes.

use std::sync::Arc;

use rand::Rng;

use crate::buchi::BuchiAutomaton;
use crate::conjugacy::close_under_conjugation;
use crate::error::{Error, Result};
use crate::recognizer::{linked_pairs, Alphabet, Letter, Mode, Morphism, PairSet, Recognizer, UpWord};
use crate::semigroup::{close_generators, ClosureOptions, Element};

/// The rectangular band `{1,2} x {1,2}` with `(i,j)(k,l) = (i,l)`, generated
/// by `a -> (1,2)` and `b -> (2,1)`, plus `c -> (1,1)` if `with_c`.
pub fn rectangular_band_morphism(with_c: bool) -> Morphism {
    let mut seeds = vec![(1u8, 2u8), (2, 1)];
    let mut letters = "ab".to_string();
    if with_c {
        seeds.push((1, 1));
        letters.push('c');
    }
    let c = close_generators(&seeds, |x, y| (x.0, y.1), ClosureOptions::default()).expect("band closes");
    Morphism::new(Alphabet::from_chars(&letters).unwrap(), c.semigroup, c.seeds).expect("band morphism")
}

/// The band coordinates `(i, j)` of an element of [`rectangular_band_morphism`].
pub fn band_value(h: &Morphism, s: Element) -> (u8, u8) {
    let value = |a: Letter| match h.alphabet().name(a) {
        "a" => (1, 2),
        "b" => (2, 1),
        _ => (1, 1),
    };
    let word = h.representative(s);
    let first = value(word[0]);
    let last = value(word[word.len() - 1]);
    (first.0, last.1)
}

pub fn band_element(h: &Morphism, value: (u8, u8)) -> Element {
    h.target()
        .elements()
        .find(|&s| band_value(h, s) == value)
        .expect("band coordinates in range")
}

/// Recognizer of `(a+b+)^w` over the band with `P = {((1,1),(1,1))}`,
/// closed under conjugation in strong mode.
pub fn rectangular_band_recognizer(with_c: bool, strong: bool) -> Recognizer {
    let h = Arc::new(rectangular_band_morphism(with_c));
    let one = band_element(&h, (1, 1));
    let mut p = PairSet::from_pairs(4, [(one, one)]);
    let mode = if strong {
        p = close_under_conjugation(&h, &p).unwrap();
        Mode::Strong
    } else {
        Mode::Weak
    };
    Recognizer::new(h, p, mode).unwrap()
}

/// A morphism onto a random transformation semigroup over `letters` letters
/// with at most `max_size` elements. Degrees and maps are redrawn until the
/// closure fits.
pub fn random_morphism<R: Rng>(rng: &mut R, letters: usize, max_size: usize) -> Morphism {
    let names: Vec<String> = (0..letters).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let alphabet = Alphabet::new(names).unwrap();
    loop {
        let degree = rng.gen_range(2..=5usize);
        let maps: Vec<Vec<u8>> = (0..letters)
            .map(|_| (0..degree).map(|_| rng.gen_range(0..degree) as u8).collect())
            .collect();
        let options = ClosureOptions {
            cap: max_size,
            ..ClosureOptions::unaudited()
        };
        let compose = |f: &Vec<u8>, g: &Vec<u8>| f.iter().map(|&i| g[i as usize]).collect::<Vec<u8>>();
        if let Ok(c) = close_generators(&maps, compose, options) {
            return Morphism::new(alphabet, c.semigroup, c.seeds).unwrap();
        }
    }
}

/// A random recognizer whose accepting set holds each linked pair with
/// probability `density`; closed under conjugation in strong mode.
pub fn random_recognizer<R: Rng>(rng: &mut R, letters: usize, max_size: usize, density: f64, mode: Mode) -> Recognizer {
    let h = Arc::new(random_morphism(rng, letters, max_size));
    let n = h.target().size();
    let mut p = PairSet::new(n);
    for (s, e) in linked_pairs(h.target()).iter() {
        if rng.gen_bool(density) {
            p.insert(s, e);
        }
    }
    if mode == Mode::Strong {
        p = close_under_conjugation(&h, &p).unwrap();
    }
    Recognizer::new(h, p, mode).unwrap()
}

/// A random Büchi automaton with `states` states over the first `letters`
/// lowercase letters.
pub fn random_buchi<R: Rng>(rng: &mut R, states: usize, letters: usize, density: f64) -> BuchiAutomaton {
    let names: Vec<String> = (0..letters).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let alphabet = Alphabet::new(names).unwrap();
    let mut transitions = Vec::new();
    for p in 0..states {
        for a in 0..letters {
            for q in 0..states {
                if rng.gen_bool(density) {
                    transitions.push((p, a, q));
                }
            }
        }
    }
    let mut initial: Vec<usize> = (0..states).filter(|_| rng.gen_bool(0.4)).collect();
    if initial.is_empty() {
        initial.push(0);
    }
    let accepting: Vec<usize> = (0..states).filter(|_| rng.gen_bool(0.4)).collect();
    BuchiAutomaton::new(states, alphabet, transitions, initial, accepting).unwrap()
}

pub fn random_word<R: Rng>(rng: &mut R, letters: usize, len: usize) -> Vec<Letter> {
    (0..len).map(|_| rng.gen_range(0..letters)).collect()
}

/// A random `u v^w` with `|u| <= max_prefix` and `1 <= |v| <= max_period`.
pub fn random_upword<R: Rng>(rng: &mut R, letters: usize, max_prefix: usize, max_period: usize) -> UpWord {
    let u = rng.gen_range(0..=max_prefix);
    let v = rng.gen_range(1..=max_period);
    UpWord::new(random_word(rng, letters, u), random_word(rng, letters, v)).unwrap()
}

/// All words of length `len` over `letters` letters, in lexicographic order.
pub fn all_words(letters: usize, len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..letters).map(move |a| {
                    let mut w = w.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

/// Elements of the semigroup `N x 2^N x N  u  N`, `N = {0..n-1}`, under the
/// modified addition modulo `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AddElem {
    Num(u8),
    Triple(u8, u16, u8),
}

fn add(n: u8, x: &AddElem, y: &AddElem) -> AddElem {
    use AddElem::*;
    match (*x, *y) {
        (Num(i), Num(j)) => Num((i + j) % n),
        (Triple(i, set, j), Num(k)) => Triple(i, set, (j + k) % n),
        (Num(i), Triple(j, set, k)) => Triple((i + j) % n, set, k),
        (Triple(i, xs, j), Triple(k, ys, l)) => Triple(i, xs | ys | 1 << ((j + k) % n), l),
    }
}

/// The semigroup `T` with its set `D` of idempotents `(0, X, 0)`, `0 in X`.
#[derive(Clone, Debug)]
pub struct AdditiveFixture {
    pub n: usize,
    pub morphism: Morphism,
    pub elements: Vec<AddElem>,
    pub d: Vec<Element>,
}

/// The table of `S` has `(2|T|)^2` entries; `n = 6` already needs ~85 MB.
const MAX_ADVERSARIAL_N: usize = 6;

/// `T` generated by `a -> 1` and `b -> (0, {}, 0)`.
pub fn additive_semigroup(n: usize) -> Result<AdditiveFixture> {
    if !(4..=MAX_ADVERSARIAL_N).contains(&n) {
        return Err(Error::CapExceeded(format!(
            "n must lie in 4..={MAX_ADVERSARIAL_N}, got {n}"
        )));
    }
    let n8 = n as u8;
    let seeds = [AddElem::Num(1 % n8), AddElem::Triple(0, 0, 0)];
    let c = close_generators(&seeds, |x, y| add(n8, x, y), ClosureOptions::unaudited())?;
    let d = c
        .elements
        .iter()
        .enumerate()
        .filter(|(_, x)| matches!(x, AddElem::Triple(0, set, 0) if set & 1 == 1))
        .map(|(i, _)| Element::new(i))
        .collect();
    let morphism = Morphism::new(Alphabet::from_chars("ab")?, c.semigroup, c.seeds)?;
    Ok(AdditiveFixture {
        n,
        morphism,
        elements: c.elements,
        d,
    })
}

/// An element `(x̄, x)` of `(T̄¹ x 1) u (1̄ x T¹)`; `None` is the adjoined
/// identity of the respective copy.
pub type PairedElem = (Option<AddElem>, Option<AddElem>);

/// The four-letter morphism onto `S = (T̄¹ x 1) u (1̄ x T¹) \ {(1̄, 1)}` and
/// the family `(T̄ x 1) x (1̄ x D)` of pairwise non-conjugate linked pairs.
#[derive(Clone, Debug)]
pub struct AdversarialFixture {
    pub t: AdditiveFixture,
    pub morphism: Arc<Morphism>,
    pub elements: Vec<PairedElem>,
    pub family: PairSet,
}

/// Letters `a, b` act on the plain copy of `T`, `A, B` on the barred copy.
pub fn adversarial_fixture(n: usize) -> Result<AdversarialFixture> {
    let t = additive_semigroup(n)?;
    let n8 = n as u8;
    let mul = |x: &PairedElem, y: &PairedElem| -> PairedElem {
        match (x.0, y.0) {
            (None, None) => {
                let v = match (x.1, y.1) {
                    (Some(p), Some(q)) => Some(add(n8, &p, &q)),
                    (p, None) => p,
                    (None, q) => q,
                };
                (None, v)
            }
            (Some(p), Some(q)) => (Some(add(n8, &p, &q)), None),
            (p, None) => (p, None),
            (None, q) => (q, None),
        }
    };
    let one = AddElem::Num(1 % n8);
    let zero = AddElem::Triple(0, 0, 0);
    let seeds = [
        (None, Some(one)),
        (None, Some(zero)),
        (Some(one), None),
        (Some(zero), None),
    ];
    let c = close_generators(&seeds, mul, ClosureOptions::unaudited())?;
    let morphism = Arc::new(Morphism::new(Alphabet::from_chars("abAB")?, c.semigroup, c.seeds)?);
    let mut index = std::collections::HashMap::new();
    for (i, x) in c.elements.iter().enumerate() {
        index.insert(*x, Element::new(i));
    }
    let mut family = PairSet::new(c.elements.len());
    for x in &t.elements {
        for &e in &t.d {
            let s = index[&(Some(*x), None)];
            let f = index[&(None, Some(t.elements[e.index()]))];
            family.insert(s, f);
        }
    }
    Ok(AdversarialFixture {
        t,
        morphism,
        elements: c.elements,
        family,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{green_classes, GreenKind};

    #[test]
    fn additive_semigroup_sizes() {
        let t = additive_semigroup(4).unwrap();
        assert_eq!(t.morphism.target().size(), 4 * 4 * 16 + 4);
        assert_eq!(t.d.len(), 8);
        let s = t.morphism.target();
        assert!(t.d.iter().all(|&e| s.is_idempotent(e)));
        assert!(additive_semigroup(3).is_err());
    }

    #[test]
    fn additive_semigroup_is_associative() {
        let t = additive_semigroup(4).unwrap();
        t.morphism.target().check_associative().unwrap();
    }

    #[test]
    fn additive_green_classes_match_reachability() {
        let t = additive_semigroup(4).unwrap();
        let s = t.morphism.target();
        let n = s.size();
        for kind in [GreenKind::R, GreenKind::L] {
            let part = green_classes(s, kind);
            // Principal ideals sS^1 (resp. S^1 s) as bitsets.
            let ideal: Vec<Vec<bool>> = s
                .elements()
                .map(|x| {
                    let mut row = vec![false; n];
                    row[x.index()] = true;
                    for q in s.elements() {
                        let y = if kind == GreenKind::R { s.mul(x, q) } else { s.mul(q, x) };
                        row[y.index()] = true;
                    }
                    row
                })
                .collect();
            for x in s.elements() {
                for y in s.elements() {
                    let related = ideal[x.index()][y.index()] && ideal[y.index()][x.index()];
                    assert_eq!(part.related(x, y), related);
                }
            }
        }
    }

    #[test]
    fn adversarial_family_consists_of_linked_pairs() {
        let fx = adversarial_fixture(4).unwrap();
        let s = fx.morphism.target();
        assert_eq!(s.size(), 2 * 260);
        assert!(s.size() < 4 * 16 * 16);
        assert_eq!(fx.family.len(), 260 * 8);
        for (x, e) in fx.family.iter() {
            assert!(crate::recognizer::is_linked_pair(s, x, e));
        }
    }

    #[test]
    fn band_coordinates_round_trip() {
        let h = rectangular_band_morphism(true);
        for i in 1..=2 {
            for j in 1..=2 {
                assert_eq!(band_value(&h, band_element(&h, (i, j))), (i, j));
            }
        }
    }

    #[test]
    fn random_morphisms_respect_the_size_bound() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            assert!(random_morphism(&mut rng, 2, 12).target().size() <= 12);
        }
    }
}
