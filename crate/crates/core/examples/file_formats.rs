//! Writes a recognizer and an automaton in the text formats and reads them
//! back.

use omega_morph::buchi::morphism_to_buchi;
use omega_morph::format::{read_buchi, read_recognizer, write_buchi, write_recognizer};
use omega_morph::{testgen, ClosureOptions};

fn main() -> omega_morph::Result<()> {
    let r = testgen::rectangular_band_recognizer(false, true);
    let text = write_recognizer(&r);
    print!("{text}");
    assert_eq!(read_recognizer(&text, ClosureOptions::default())?, r);

    let b = morphism_to_buchi(&r).trim();
    let text = write_buchi(&b);
    print!("{text}");
    assert_eq!(read_buchi(&text)?, b);
    Ok(())
}
