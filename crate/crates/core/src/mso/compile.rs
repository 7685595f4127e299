//! Bottom-up compilation of formulas to minimized strong recognizers.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::ast::{is_first_order, var_order_key, Formula};
use crate::buchi::{buchi_to_strong, BuchiAutomaton};
use crate::error::{Error, Result};
use crate::langops::{complement, intersection, inverse_project, project, union, LetterMap};
use crate::recognizer::{Alphabet, Letter, Recognizer, RecognizerStats};
use crate::semigroup::ClosureOptions;
use crate::syntactic::syntactic_morphism;

/// An ordered list of variables and the alphabet `2^V` over it.
///
/// Letter `i` assigns to `V[j]` the bit `j` of the binary expansion of `i`,
/// counted from the most significant end, so letter names are bit strings
/// such as `"01"` with `V[0]` first. The empty list has the one letter `_`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarAlphabet {
    vars: Vec<String>,
    alphabet: Alphabet,
}

impl VarAlphabet {
    /// Sorts and deduplicates `vars` into canonical order.
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = S>) -> Self {
        let mut vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        vars.sort_by_key(|v| var_order_key(v));
        vars.dedup();
        let n = vars.len();
        let letters: Vec<String> = if n == 0 {
            vec!["_".to_string()]
        } else {
            (0..1usize << n).map(|i| format!("{i:0n$b}")).collect()
        };
        let alphabet = Alphabet::new(letters).expect("bit strings are valid letters");
        VarAlphabet { vars, alphabet }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn position(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == var)
    }

    /// Whether `var` is set in letter `a`.
    pub fn bit(&self, a: Letter, var: usize) -> bool {
        (a >> (self.vars.len() - 1 - var)) & 1 == 1
    }

    /// The letter with exactly the given variables set.
    pub fn letter(&self, set: impl Fn(usize) -> bool) -> Letter {
        (0..self.vars.len()).fold(0, |acc, j| (acc << 1) | set(j) as usize)
    }

    /// Maps letters of `self` to letters of `sub` by forgetting the
    /// variables not in `sub`.
    pub fn restrict_to(&self, sub: &VarAlphabet) -> Result<LetterMap> {
        let pos: Vec<usize> = sub
            .vars
            .iter()
            .map(|v| self.position(v).ok_or_else(|| Error::UnknownVariable(v.clone())))
            .collect::<Result<_>>()?;
        let map = (0..self.alphabet.len())
            .map(|a| sub.letter(|j| self.bit(a, pos[j])))
            .collect();
        LetterMap::new(self.alphabet.clone(), sub.alphabet.clone(), map)
    }
}

/// A compiled formula: its free variables and a minimized strong recognizer
/// over `2^V`. First-order variables in `V` are set at exactly one position
/// in every accepted word.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub vars: VarAlphabet,
    pub recognizer: Recognizer,
}

impl Compiled {
    pub fn stats(&self) -> RecognizerStats {
        self.recognizer.stats()
    }
}

fn minimize(r: &Recognizer) -> Result<Recognizer> {
    Ok(syntactic_morphism(r)?.recognizer)
}

fn from_automaton(
    v: &VarAlphabet,
    states: usize,
    step: impl Fn(usize, Letter) -> Option<usize>,
    accepting: Vec<usize>,
) -> Result<Recognizer> {
    let mut transitions = Vec::new();
    for p in 0..states {
        for a in 0..v.alphabet.len() {
            if let Some(q) = step(p, a) {
                transitions.push((p, a, q));
            }
        }
    }
    let b = BuchiAutomaton::new(states, v.alphabet.clone(), transitions, vec![0], accepting)?;
    minimize(&buchi_to_strong(&b, ClosureOptions::unaudited())?)
}

/// The recognizer of an atomic formula over the alphabet of its own
/// variables. Built from a Büchi automaton with at most three states.
pub fn atomic_recognizer(atom: &Formula) -> Result<Compiled> {
    let v = VarAlphabet::new(atom.free_vars());
    let pos = |name: &str| v.position(name).expect("free variable");
    let r = match atom {
        Formula::True => from_automaton(&v, 1, |_, _| Some(0), vec![0])?,
        Formula::False => from_automaton(&v, 1, |_, _| None, vec![])?,
        Formula::Less(x, y) | Formula::Succ(x, y) if x == y => {
            // x < x never holds; the word must still carry x once.
            let _ = pos(x);
            from_automaton(&v, 1, |_, _| None, vec![])?
        }
        Formula::Less(x, y) | Formula::Succ(x, y) => {
            let (i, j) = (pos(x), pos(y));
            let adjacent = matches!(atom, Formula::Succ(..));
            from_automaton(
                &v,
                3,
                |p, a| match (p, v.bit(a, i), v.bit(a, j)) {
                    (0, false, false) => Some(0),
                    (0, true, false) => Some(1),
                    (1, false, false) if !adjacent => Some(1),
                    (1, false, true) | (2, false, false) => Some(2),
                    _ => None,
                },
                vec![2],
            )?
        }
        Formula::Member(x, set) => {
            let (i, j) = (pos(x), pos(set));
            from_automaton(
                &v,
                2,
                |p, a| match (p, v.bit(a, i), v.bit(a, j)) {
                    (0, false, _) => Some(0),
                    (0, true, true) => Some(1),
                    (1, false, _) => Some(1),
                    _ => None,
                },
                vec![1],
            )?
        }
        _ => return Err(Error::Unsupported(format!("{atom} is not atomic"))),
    };
    Ok(Compiled { vars: v, recognizer: r })
}

/// Renames bound variables to `x'd` or `X'd` by binder depth, which no
/// parsed name can clash with.
fn canonicalize(f: &Formula, depth: usize) -> Formula {
    match f {
        Formula::Not(g) => Formula::not(canonicalize(g, depth)),
        Formula::And(g, h) => Formula::and(canonicalize(g, depth), canonicalize(h, depth)),
        Formula::Or(g, h) => Formula::or(canonicalize(g, depth), canonicalize(h, depth)),
        Formula::Exists(v, g) => {
            let fresh = if is_first_order(v) {
                format!("x'{depth}")
            } else {
                format!("X'{depth}")
            };
            Formula::exists(&fresh, canonicalize(&g.rename(v, &fresh), depth + 1))
        }
        atom => atom.clone(),
    }
}

/// Compiles formulas with a memo table shared across calls.
#[derive(Default)]
pub struct Compiler {
    memo: Mutex<HashMap<Formula, Arc<Compiled>>>,
    valid: Mutex<HashMap<(VarAlphabet, String), Arc<Recognizer>>>,
}

impl Compiler {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of distinct subformulas compiled so far.
    pub fn memo_len(&self) -> usize {
        self.memo.lock().expect("memo lock").len()
    }

    pub fn compile(&self, f: &Formula) -> Result<Arc<Compiled>> {
        self.compile_canonical(&canonicalize(f, 0))
    }

    fn compile_canonical(&self, f: &Formula) -> Result<Arc<Compiled>> {
        if let Some(c) = self.memo.lock().expect("memo lock").get(f) {
            return Ok(c.clone());
        }
        let c = Arc::new(match f {
            Formula::Not(g) => {
                let g = self.compile_canonical(g)?;
                let r = minimize(&complement(&g.recognizer)?)?;
                let r = self.restrict_to_valid(&g.vars, r, |_| true)?;
                Compiled {
                    vars: g.vars.clone(),
                    recognizer: r,
                }
            }
            Formula::And(g, h) | Formula::Or(g, h) => {
                let (g, h) = (self.compile_canonical(g)?, self.compile_canonical(h)?);
                let v = VarAlphabet::new(g.vars.vars().iter().chain(h.vars.vars()).cloned());
                let rg = self.cylindrify(&g, &v)?;
                let rh = self.cylindrify(&h, &v)?;
                let r = if matches!(f, Formula::And(..)) {
                    intersection(&rg, &rh)?
                } else {
                    union(&rg, &rh)?
                };
                Compiled { vars: v, recognizer: r }
            }
            Formula::Exists(x, g) => {
                let g = self.compile_canonical(g)?;
                if g.vars.position(x).is_none() {
                    (*g).clone()
                } else {
                    let v = VarAlphabet::new(g.vars.vars().iter().filter(|w| *w != x).cloned());
                    let pi = g.vars.restrict_to(&v)?;
                    Compiled {
                        recognizer: project(&g.recognizer, &pi)?,
                        vars: v,
                    }
                }
            }
            atom => atomic_recognizer(atom)?,
        });
        self.memo.lock().expect("memo lock").insert(f.clone(), c.clone());
        Ok(c)
    }

    /// `c` over the larger alphabet `v`, with the first-order variables new
    /// to it constrained to a single position.
    fn cylindrify(&self, c: &Compiled, v: &VarAlphabet) -> Result<Recognizer> {
        if c.vars == *v {
            return Ok(c.recognizer.clone());
        }
        let r = inverse_project(&c.recognizer, &v.restrict_to(&c.vars)?)?;
        self.restrict_to_valid(v, r, |x| c.vars.position(x).is_none())
    }

    fn restrict_to_valid(&self, v: &VarAlphabet, mut r: Recognizer, pick: impl Fn(&str) -> bool) -> Result<Recognizer> {
        for x in v.vars().iter().filter(|x| is_first_order(x) && pick(x)) {
            r = intersection(&r, &*self.singleton(v, x)?)?;
        }
        Ok(r)
    }

    /// Words over `2^V` whose `x` track is set exactly once.
    pub fn singleton(&self, v: &VarAlphabet, x: &str) -> Result<Arc<Recognizer>> {
        let key = (v.clone(), x.to_string());
        if let Some(r) = self.valid.lock().expect("memo lock").get(&key) {
            return Ok(r.clone());
        }
        let i = v.position(x).ok_or_else(|| Error::UnknownVariable(x.to_string()))?;
        let r = Arc::new(from_automaton(
            v,
            2,
            |p, a| match (p, v.bit(a, i)) {
                (0, b) => Some(b as usize),
                (1, false) => Some(1),
                _ => None,
            },
            vec![1],
        )?);
        self.valid.lock().expect("memo lock").insert(key, r.clone());
        Ok(r)
    }
}

/// Compiles `f` with a fresh memo table.
pub fn compile(f: &Formula) -> Result<Compiled> {
    Ok((*Compiler::new().compile(f)?).clone())
}

impl Compiler {
    /// Compiles `f` over the alphabet of `declared`, which must contain
    /// every free variable of `f`.
    pub fn compile_declared(&self, f: &Formula, declared: &[String]) -> Result<Compiled> {
        if let Some(x) = f.free_vars().into_iter().find(|x| !declared.contains(x)) {
            return Err(Error::UnboundVariable(x));
        }
        let c = self.compile(f)?;
        let v = VarAlphabet::new(declared.iter().cloned());
        let recognizer = self.cylindrify(&c, &v)?;
        Ok(Compiled { vars: v, recognizer })
    }
}
