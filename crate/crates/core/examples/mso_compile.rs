//! Compiles a formula given on the command line and prints a few models.

use omega_morph::mso::{parse, sample_models, Compiler};

fn main() -> omega_morph::Result<()> {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "Ax. (x in X -> Ey. (y = x + 1 & ~ y in X))".to_string());
    let f = parse(&text)?;
    let vars: Vec<String> = f.free_vars().into_iter().collect();
    let c = Compiler::new().compile_declared(&f, &vars)?;
    println!("{f}");
    println!("variables {:?}, {}", c.vars.vars(), c.stats());
    for w in sample_models(&c.recognizer, 5) {
        println!("  {}", w.display(c.vars.alphabet()));
    }
    Ok(())
}
