//! Inclusion between two accepting sets over the rectangular band. With the
//! letter `c` the inclusion fails and a separating word is printed.

use omega_morph::inclusion::{inclusion_test, is_strong};
use omega_morph::{testgen, PairSet};

fn main() -> omega_morph::Result<()> {
    for with_c in [false, true] {
        let h = testgen::rectangular_band_morphism(with_c);
        let b = |i, j| testgen::band_element(&h, (i, j));
        let p = PairSet::from_pairs(4, [(b(1, 1), b(1, 1))]);
        let q = PairSet::from_pairs(4, [(b(1, 2), b(2, 2))]);
        let res = inclusion_test(&h, &p, &q)?;
        print!("alphabet {:?}: [P] ⊆ [Q] is {}", h.alphabet().letters(), res.holds);
        match res.witness {
            Some(w) => println!(", witness {}", w.display(h.alphabet())),
            None => println!(),
        }
        println!("  P strong: {}, visited {} triples", is_strong(&h, &p)?, res.visited);
    }
    Ok(())
}
