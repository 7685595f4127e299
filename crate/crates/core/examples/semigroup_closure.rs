//! Closes two transformations of {0, 1, 2} into a semigroup and prints its
//! idempotents and Green's R- and L-classes.

use omega_morph::semigroup::{close_generators, green_classes, ClosureOptions, GreenKind};

fn main() -> omega_morph::Result<()> {
    let cycle = vec![1u8, 2, 0];
    let merge = vec![0u8, 0, 2];
    let compose = |f: &Vec<u8>, g: &Vec<u8>| f.iter().map(|&i| g[i as usize]).collect::<Vec<u8>>();
    let c = close_generators(&[cycle, merge], compose, ClosureOptions::default())?;
    let s = &c.semigroup;
    println!("{} elements", s.size());
    for x in s.elements() {
        let marker = if s.is_idempotent(x) { " idempotent" } else { "" };
        println!("  {x}: {:?}{marker}", c.elements[x.index()]);
    }
    let r = green_classes(s, GreenKind::R);
    let l = green_classes(s, GreenKind::L);
    println!("{} R-classes, {} L-classes", r.class_count(), l.class_count());
    Ok(())
}
