//! Minimizes a random strong recognizer and reports the work done.

use omega_morph::syntactic::syntactic_morphism;
use omega_morph::{testgen, Mode};
use rand::SeedableRng;

fn main() -> omega_morph::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    for _ in 0..5 {
        let r = testgen::random_recognizer(&mut rng, 2, 60, 0.2, Mode::Strong);
        let q = syntactic_morphism(&r)?;
        println!(
            "{}  ->  {}   ({} initial classes, split work {})",
            r.stats(),
            q.recognizer.stats(),
            q.initial_classes,
            q.split_work
        );
    }
    Ok(())
}
