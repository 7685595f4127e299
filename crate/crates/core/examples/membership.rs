//! Builds a recognizer by hand and tests ultimately periodic words.
//!
//! The morphism tracks the parity of `a` and whether `b` occurred. The
//! accepting pairs have an even prefix and a loop containing `b`.

use std::sync::Arc;

use omega_morph::recognizer::linked_pairs;
use omega_morph::semigroup::{close_generators, ClosureOptions};
use omega_morph::{Alphabet, Mode, Morphism, PairSet, Recognizer, UpWord};

fn main() -> omega_morph::Result<()> {
    // (parity of a, whether b occurred)
    let seeds = [(1u8, false), (0u8, true)];
    let c = close_generators(&seeds, |x, y| ((x.0 + y.0) % 2, x.1 || y.1), ClosureOptions::default())?;
    let h = Arc::new(Morphism::new(Alphabet::from_chars("ab")?, c.semigroup, c.seeds)?);
    let mut p = PairSet::new(h.target().size());
    for (s, e) in linked_pairs(h.target()).iter() {
        if c.elements[s.index()].0 == 0 && c.elements[e.index()].1 {
            p.insert(s, e);
        }
    }
    let r = Recognizer::new(h, p, Mode::Weak)?;
    println!("{}", r.stats());
    for text in ["(b)^w", "a(b)^w", "aa(ab)^w", "b(a)^w", "(ab)^w"] {
        let w = UpWord::parse(text, r.alphabet())?;
        println!("{text:>10}  {}", r.member(&w)?);
    }
    Ok(())
}
