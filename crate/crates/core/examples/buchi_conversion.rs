//! Converts a Büchi automaton for (a+b+)^w into its syntactic recognizer
//! and back.

use omega_morph::buchi::{buchi_to_strong, morphism_to_buchi, BuchiAutomaton};
use omega_morph::syntactic::syntactic_morphism;
use omega_morph::{Alphabet, ClosureOptions, UpWord};

fn main() -> omega_morph::Result<()> {
    let alphabet = Alphabet::from_chars("ab")?;
    // State 3 is entered on each `a` that follows a `b`.
    let t = vec![
        (0, 0, 1),
        (1, 0, 1),
        (1, 1, 2),
        (2, 1, 2),
        (2, 0, 3),
        (3, 0, 1),
        (3, 1, 2),
    ];
    let b = BuchiAutomaton::new(4, alphabet.clone(), t, vec![0], vec![3])?;

    let r = buchi_to_strong(&b, ClosureOptions::default())?;
    let m = syntactic_morphism(&r)?.recognizer;
    println!("matrix semigroup {}, syntactic {}", r.stats(), m.stats());

    let back = morphism_to_buchi(&m);
    let trimmed = back.trim();
    println!(
        "automaton from the morphism: {} states, {} after trimming",
        back.states(),
        trimmed.states()
    );
    for text in ["(ab)^w", "b(a)^w", "(aab)^w", "ab(b)^w"] {
        let w = UpWord::parse(text, &alphabet)?;
        println!(
            "{text:>8}  {} {} {}",
            b.accepts_lasso(&w),
            m.member(&w)?,
            trimmed.accepts_lasso(&w)
        );
    }
    Ok(())
}
