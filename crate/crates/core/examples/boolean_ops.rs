//! Complement, union, intersection and projection of compiled formulas.

use omega_morph::langops::{complement, intersection, language_equivalent, project, union};
use omega_morph::mso::{parse, Compiler};

fn main() -> omega_morph::Result<()> {
    let compiler = Compiler::new();
    let vars = vec!["X".to_string(), "Y".to_string()];
    let inf_x = compiler.compile_declared(&parse("Ax. Ey. x < y & y in X")?, &vars)?;
    let inf_y = compiler.compile_declared(&parse("Ax. Ey. x < y & y in Y")?, &vars)?;
    let both = intersection(&inf_x.recognizer, &inf_y.recognizer)?;
    let either = union(&inf_x.recognizer, &inf_y.recognizer)?;
    let neither = complement(&either)?;
    println!("both {}", both.stats());
    println!("either {}", either.stats());
    println!("neither {}", neither.stats());

    // Forgetting Y maps "X and Y infinite" onto "X infinite".
    let only_x = Compiler::new().compile(&parse("Ax. Ey. x < y & y in X")?)?;
    let pi = inf_x.vars.restrict_to(&only_x.vars)?;
    let image = project(&both, &pi)?;
    println!(
        "projection equals X infinite: {}",
        language_equivalent(&image, &only_x.recognizer)?
    );
    Ok(())
}
