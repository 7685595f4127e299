//! Conjugacy classes of linked pairs, on the rectangular band and on the
//! adversarial instance with n = 4.

use omega_morph::conjugacy::conjugacy_classes;
use omega_morph::testgen;

fn main() -> omega_morph::Result<()> {
    let band = testgen::rectangular_band_morphism(true);
    let part = conjugacy_classes(&band);
    println!(
        "band: {} linked pairs in {} classes",
        part.linked_pairs().len(),
        part.class_count()
    );
    for class in part.classes() {
        let members: Vec<String> = class
            .iter()
            .map(|&(s, e)| {
                format!(
                    "({:?}, {:?})",
                    testgen::band_value(&band, s),
                    testgen::band_value(&band, e)
                )
            })
            .collect();
        println!("  {}", members.join(" "));
    }

    let fx = testgen::adversarial_fixture(4)?;
    let part = conjugacy_classes(&fx.morphism);
    println!(
        "adversarial: |S| = {}, {} linked pairs, {} classes, {} unions, {} finds",
        fx.morphism.target().size(),
        part.linked_pairs().len(),
        part.class_count(),
        part.unions,
        part.finds
    );
    Ok(())
}
