//! Compiles the three formula families and prints `|S|`, `|F|`, `|P|` next
//! to the published values. Pass a maximal `k` as the first argument.

use omega_morph::mso::families::{published, table_row};

fn main() -> omega_morph::Result<()> {
    let max_k: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(4);
    for k in 2..=max_k {
        let row = table_row(k)?;
        let want = published(k);
        for (i, (name, got)) in [("phi", row.phi), ("psi", row.psi), ("chi", row.chi)]
            .into_iter()
            .enumerate()
        {
            let want = want.map(|w| format!("{:?}", w[i])).unwrap_or_default();
            println!(
                "k={k} {name}: ({}, {}, {}) published {want} in {:.2?}",
                got.size, got.linked_pairs, got.accepting, row.elapsed[i]
            );
        }
    }
    Ok(())
}
