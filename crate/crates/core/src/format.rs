//! Plain-text file formats.
//!
//! Every file starts with a header `omega-<kind> <version>`. Blank lines and
//! everything after `#` are ignored. Element ids are dense decimal numbers
//! starting at 0.
//!
//! Semigroup:
//! ```text
//! omega-semigroup 1
//! elements 2
//! generators 0 1
//! table
//! 0 1
//! 1 1
//! ```
//!
//! Recognizer, with the multiplication table given explicitly:
//! ```text
//! omega-recognizer 1
//! mode strong
//! alphabet a b
//! elements 2
//! a -> 0
//! b -> 1
//! table
//! 0 1
//! 1 1
//! accepting
//! 1 1
//! ```
//!
//! or with `generated`, where each letter maps to a transformation of
//! `0..d` (written as the list of images) and accepting pairs are words:
//! ```text
//! omega-recognizer 1
//! mode weak
//! alphabet a b
//! generated
//! a -> 0 0
//! b -> 1 1
//! accepting
//! a.b b
//! ```
//! Transformations compose left to right: `xy` applies `x` first.
//!
//! Büchi automaton:
//! ```text
//! omega-buchi 1
//! states 2
//! alphabet a b
//! initial: 0
//! final: 1
//! 0 a 1
//! 1 b 0
//! ```
//!
//! Letter map:
//! ```text
//! omega-lettermap 1
//! source a b c
//! target x y
//! a -> x
//! b -> y
//! c -> x
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use crate::buchi::BuchiAutomaton;
use crate::error::{Error, Result};
use crate::langops::LetterMap;
use crate::recognizer::{Alphabet, Mode, Morphism, PairSet, Recognizer};
use crate::semigroup::{close_generators, ClosureOptions, Element, Semigroup};

pub const FORMAT_VERSION: u32 = 1;

struct Line<'a> {
    number: usize,
    fields: Vec<(usize, &'a str)>,
}

impl<'a> Line<'a> {
    fn error<T>(&self, field: usize, message: impl Into<String>) -> Result<T> {
        let column = self.fields.get(field).map_or(1, |f| f.0);
        Err(Error::parse(self.number, column, message))
    }

    fn word(&self, i: usize) -> Option<&'a str> {
        self.fields.get(i).map(|f| f.1)
    }

    fn number(&self, i: usize) -> Result<usize> {
        match self.word(i) {
            Some(w) => w
                .parse()
                .or_else(|_| self.error(i, format!("expected a number, found {w:?}"))),
            None => self.error(i, "missing number"),
        }
    }

    fn numbers(&self, from: usize) -> Result<Vec<usize>> {
        (from..self.fields.len()).map(|i| self.number(i)).collect()
    }

    fn expect_len(&self, n: usize) -> Result<()> {
        if self.fields.len() == n {
            Ok(())
        } else {
            self.error(n.min(self.fields.len()), format!("expected {n} fields"))
        }
    }
}

struct Lines<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let mut lines = Vec::new();
        let mut last_line = 1;
        for (i, raw) in text.lines().enumerate() {
            last_line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let mut fields = Vec::new();
            let mut start = None;
            for (col, c) in content.char_indices().chain([(content.len(), ' ')]) {
                match (c.is_whitespace(), start) {
                    (false, None) => start = Some(col),
                    (true, Some(s)) => {
                        fields.push((content[..s].chars().count() + 1, &content[s..col]));
                        start = None;
                    }
                    _ => {}
                }
            }
            if !fields.is_empty() {
                lines.push(Line { number: i + 1, fields });
            }
        }
        Lines {
            lines,
            pos: 0,
            last_line,
        }
    }

    fn peek(&self) -> Option<&Line<'a>> {
        self.lines.get(self.pos)
    }

    fn next(&mut self, what: &str) -> Result<&Line<'a>> {
        match self.lines.get(self.pos) {
            Some(l) => {
                self.pos += 1;
                Ok(l)
            }
            None => Err(Error::parse(
                self.last_line + 1,
                1,
                format!("unexpected end of input, expected {what}"),
            )),
        }
    }

    fn header(&mut self, kind: &str) -> Result<()> {
        let want = format!("omega-{kind}");
        let line = self.next("a header")?;
        if line.word(0) != Some(want.as_str()) {
            return line.error(0, format!("expected header {want}"));
        }
        let version = line.number(1)?;
        if version != FORMAT_VERSION as usize {
            return Err(Error::VersionMismatch(format!(
                "{want} version {version}, supported {FORMAT_VERSION}"
            )));
        }
        line.expect_len(2)
    }

    fn keyword(&mut self, key: &str) -> Result<&Line<'a>> {
        let line = self.next(key)?;
        if line.word(0) != Some(key) {
            return line.error(0, format!("expected {key}"));
        }
        Ok(line)
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            Some(l) => l.error(0, "unexpected trailing input"),
            None => Ok(()),
        }
    }
}

fn alphabet_of(line: &Line) -> Result<Alphabet> {
    if line.fields.len() < 2 {
        return line.error(1, "empty alphabet");
    }
    Alphabet::new(line.fields[1..].iter().map(|f| f.1)).or_else(|e| line.error(1, e.to_string()))
}

fn element(line: &Line, i: usize, n: usize) -> Result<Element> {
    let x = line.number(i)?;
    if x >= n {
        return line.error(i, format!("element {x} out of range"));
    }
    Ok(Element::new(x))
}

fn read_table(lines: &mut Lines, n: usize) -> Result<Vec<u32>> {
    let mut table = Vec::with_capacity(n * n);
    for _ in 0..n {
        let line = lines.next("a table row")?;
        line.expect_len(n)?;
        for i in 0..n {
            table.push(element(line, i, n)?.index() as u32);
        }
    }
    Ok(table)
}

fn write_table(out: &mut String, s: &Semigroup) {
    let n = s.size();
    for row in s.table().chunks(n) {
        let cells: Vec<String> = row.iter().map(u32::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
}

pub fn write_semigroup(s: &Semigroup) -> String {
    let mut out = format!("omega-semigroup {FORMAT_VERSION}\nelements {}\ngenerators", s.size());
    for g in s.generators() {
        let _ = write!(out, " {}", g.index());
    }
    out.push_str("\ntable\n");
    write_table(&mut out, s);
    out
}

/// Reads a semigroup. Its table is audited for associativity if it has at
/// most `options.audit_bound` elements.
pub fn read_semigroup(text: &str, options: ClosureOptions) -> Result<Semigroup> {
    let mut lines = Lines::new(text);
    lines.header("semigroup")?;
    let line = lines.keyword("elements")?;
    line.expect_len(2)?;
    let n = line.number(1)?;
    let line = lines.keyword("generators")?;
    let gens = (1..line.fields.len())
        .map(|i| element(line, i, n))
        .collect::<Result<Vec<_>>>()?;
    lines.keyword("table")?.expect_len(1)?;
    let table = read_table(&mut lines, n)?;
    lines.finish()?;
    Semigroup::from_table(n, table, gens, options.audit_bound)
}

pub fn write_recognizer(r: &Recognizer) -> String {
    let h = r.morphism();
    let mode = match r.mode() {
        Mode::Strong => "strong",
        Mode::Weak => "weak",
    };
    let mut out = format!(
        "omega-recognizer {FORMAT_VERSION}\nmode {mode}\nalphabet {}\n",
        h.alphabet().letters().join(" ")
    );
    let _ = writeln!(out, "elements {}", h.target().size());
    for (a, name) in h.alphabet().letters().iter().enumerate() {
        let _ = writeln!(out, "{name} -> {}", h.image(a).index());
    }
    out.push_str("table\n");
    write_table(&mut out, h.target());
    out.push_str("accepting\n");
    for (x, e) in r.accepting().iter() {
        let _ = writeln!(out, "{} {}", x.index(), e.index());
    }
    out
}

fn compose(x: &[u32], y: &[u32]) -> Vec<u32> {
    x.iter().map(|&i| y[i as usize]).collect()
}

/// Reads a recognizer. A strong recognizer's accepting set must be closed
/// under conjugation.
pub fn read_recognizer(text: &str, options: ClosureOptions) -> Result<Recognizer> {
    let mut lines = Lines::new(text);
    lines.header("recognizer")?;
    let line = lines.keyword("mode")?;
    line.expect_len(2)?;
    let mode = match line.word(1) {
        Some("strong") => Mode::Strong,
        Some("weak") => Mode::Weak,
        _ => return line.error(1, "mode must be strong or weak"),
    };
    let alphabet = alphabet_of(lines.keyword("alphabet")?)?;
    let line = lines.next("elements or generated")?;
    let generated = match line.word(0) {
        Some("generated") => {
            line.expect_len(1)?;
            true
        }
        Some("elements") => false,
        _ => return line.error(0, "expected elements or generated"),
    };
    let declared = if generated {
        0
    } else {
        line.expect_len(2)?;
        line.number(1)?
    };
    let mut images: Vec<Option<Vec<usize>>> = vec![None; alphabet.len()];
    for _ in 0..alphabet.len() {
        let line = lines.next("a letter image")?;
        let a = match line.word(0).and_then(|w| alphabet.index_of(w)) {
            Some(a) => a,
            None => return line.error(0, "unknown letter"),
        };
        if line.word(1) != Some("->") {
            return line.error(1, "expected ->");
        }
        if images[a].is_some() {
            return line.error(0, "letter mapped twice");
        }
        let values = line.numbers(2)?;
        if !generated {
            line.expect_len(3)?;
            element(line, 2, declared)?;
        } else if values.is_empty() || values.iter().any(|&v| v >= values.len()) {
            return line.error(2, "expected a transformation of 0..d");
        }
        images[a] = Some(values);
    }
    let images: Vec<Vec<usize>> = images.into_iter().map(|x| x.expect("all letters mapped")).collect();
    let morphism = if generated {
        let degree = images[0].len();
        if images.iter().any(|t| t.len() != degree) {
            return Err(Error::InvalidSemigroup("transformations of different degrees".into()));
        }
        let seeds: Vec<Vec<u32>> = images.iter().map(|t| t.iter().map(|&v| v as u32).collect()).collect();
        let c = close_generators(&seeds, |x, y| compose(x, y), options)?;
        Morphism::new(alphabet, c.semigroup, c.seeds)?
    } else {
        lines.keyword("table")?.expect_len(1)?;
        let table = read_table(&mut lines, declared)?;
        let gens: Vec<Element> = images.iter().map(|v| Element::new(v[0])).collect();
        let s = Semigroup::from_table(declared, table, gens.clone(), options.audit_bound)?;
        Morphism::new(alphabet, s, gens)?
    };
    lines.keyword("accepting")?.expect_len(1)?;
    let n = morphism.target().size();
    let mut accepting = PairSet::new(n);
    while let Some(line) = lines.peek() {
        line.expect_len(2)?;
        let (x, e) = if generated {
            let eval = |i: usize| -> Result<Element> {
                let word = morphism
                    .alphabet()
                    .parse_word(line.word(i).unwrap_or(""))
                    .or_else(|e| line.error(i, e.to_string()))?;
                morphism.evaluate(&word)
            };
            (eval(0)?, eval(1)?)
        } else {
            (element(line, 0, n)?, element(line, 1, n)?)
        };
        accepting.insert(x, e);
        lines.pos += 1;
    }
    Recognizer::new(Arc::new(morphism), accepting, mode)
}

pub fn write_buchi(b: &BuchiAutomaton) -> String {
    let list = |xs: &[usize]| xs.iter().map(|x| format!(" {x}")).collect::<String>();
    let mut out = format!(
        "omega-buchi {FORMAT_VERSION}\nstates {}\nalphabet {}\ninitial:{}\nfinal:{}\n",
        b.states(),
        b.alphabet().letters().join(" "),
        list(b.initial()),
        list(b.accepting())
    );
    for &(p, a, q) in b.transitions() {
        let _ = writeln!(out, "{p} {} {q}", b.alphabet().name(a));
    }
    out
}

pub fn read_buchi(text: &str) -> Result<BuchiAutomaton> {
    let mut lines = Lines::new(text);
    lines.header("buchi")?;
    let line = lines.keyword("states")?;
    line.expect_len(2)?;
    let states = line.number(1)?;
    let alphabet = alphabet_of(lines.keyword("alphabet")?)?;
    let (mut initial, mut accepting, mut transitions) = (None, None, Vec::new());
    while let Some(line) = lines.peek() {
        match line.word(0) {
            Some("initial:") if initial.is_none() => initial = Some(line.numbers(1)?),
            Some("final:") if accepting.is_none() => accepting = Some(line.numbers(1)?),
            Some(w) if w.parse::<usize>().is_ok() => {
                line.expect_len(3)?;
                let a = match line.word(1).and_then(|w| alphabet.index_of(w)) {
                    Some(a) => a,
                    None => return line.error(1, "unknown letter"),
                };
                transitions.push((line.number(0)?, a, line.number(2)?));
            }
            _ => return line.error(0, "unknown directive"),
        }
        lines.pos += 1;
    }
    let missing = |what: &str| Error::parse(lines.last_line + 1, 1, format!("missing {what} line"));
    let initial = initial.ok_or_else(|| missing("initial:"))?;
    let accepting = accepting.ok_or_else(|| missing("final:"))?;
    BuchiAutomaton::new(states, alphabet, transitions, initial, accepting)
}

pub fn write_letter_map(pi: &LetterMap) -> String {
    let mut out = format!(
        "omega-lettermap {FORMAT_VERSION}\nsource {}\ntarget {}\n",
        pi.source().letters().join(" "),
        pi.target().letters().join(" ")
    );
    for a in 0..pi.source().len() {
        let _ = writeln!(out, "{} -> {}", pi.source().name(a), pi.target().name(pi.apply(a)));
    }
    out
}

pub fn read_letter_map(text: &str) -> Result<LetterMap> {
    let mut lines = Lines::new(text);
    lines.header("lettermap")?;
    let source = alphabet_of(lines.keyword("source")?)?;
    let target = alphabet_of(lines.keyword("target")?)?;
    let mut pairs = Vec::new();
    while let Some(line) = lines.peek() {
        line.expect_len(3)?;
        if line.word(1) != Some("->") {
            return line.error(1, "expected ->");
        }
        pairs.push((line.word(0).unwrap_or(""), line.word(2).unwrap_or("")));
        lines.pos += 1;
    }
    LetterMap::from_names(source, target, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recognizer::UpWord;
    use crate::testgen;
    use rand::SeedableRng;

    #[test]
    fn recognizer_round_trip_on_random_instances() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for i in 0..100 {
            let mode = if i % 2 == 0 { Mode::Weak } else { Mode::Strong };
            let r = testgen::random_recognizer(&mut rng, 2 + i % 2, 12, 0.3, mode);
            let text = write_recognizer(&r);
            assert_eq!(read_recognizer(&text, ClosureOptions::default()).unwrap(), r);
        }
    }

    #[test]
    fn semigroup_and_buchi_round_trip() {
        let r = testgen::rectangular_band_recognizer(true, true);
        let s = r.semigroup();
        assert_eq!(
            &read_semigroup(&write_semigroup(s), ClosureOptions::default()).unwrap(),
            s
        );
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let b = testgen::random_buchi(&mut rng, 4, 2, 0.3);
            assert_eq!(read_buchi(&write_buchi(&b)).unwrap(), b);
        }
    }

    #[test]
    fn letter_map_round_trip() {
        let src = Alphabet::from_chars("abc").unwrap();
        let dst = Alphabet::new(["x", "y"]).unwrap();
        let pi = LetterMap::from_names(src, dst, [("a", "x"), ("b", "y"), ("c", "x")]).unwrap();
        let text = write_letter_map(&pi);
        let back = read_letter_map(&text).unwrap();
        assert_eq!(back.map(), pi.map());
        assert_eq!(back.source(), pi.source());
    }

    #[test]
    fn generated_recognizer() {
        let text =
            "omega-recognizer 1\nmode weak # words\nalphabet a b\ngenerated\na -> 0 0\nb -> 1 1\naccepting\nab b\n";
        let r = read_recognizer(text, ClosureOptions::default()).unwrap();
        assert_eq!(r.semigroup().size(), 2);
        let a = r.alphabet();
        assert!(r.member(&UpWord::parse("a(b)^w", a).unwrap()).unwrap());
        assert!(!r.member(&UpWord::parse("(a)^w", a).unwrap()).unwrap());
    }

    #[test]
    fn errors_point_at_the_offending_field() {
        let bad = "omega-buchi 1\nstates 2\nalphabet a b\ninitial: 0\nfinal: 1\n0 c 1\n";
        match read_buchi(bad) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (6, 3)),
            other => panic!("{other:?}"),
        }
        let unknown = "omega-buchi 1\nstates 2\nalphabet a\ninitial: 0\nfinal: 1\naccept 1\n";
        assert!(matches!(read_buchi(unknown), Err(Error::Parse { line: 6, .. })));
        assert!(matches!(read_buchi("omega-buchi 2\n"), Err(Error::VersionMismatch(_))));
        let weak = testgen::rectangular_band_recognizer(false, false);
        assert_eq!(weak.mode(), Mode::Weak);
        let strong = write_recognizer(&weak).replace("mode weak", "mode strong");
        assert!(matches!(
            read_recognizer(&strong, ClosureOptions::default()),
            Err(Error::NotClosed)
        ));
    }
}
