//! Direct evaluation of first-order quantified formulas on ultimately
//! periodic words, used as an oracle for the compiler.
//!
//! Free variables are read off the letters: second-order variables are the
//! sets of positions whose track is set, and a first-order variable must be
//! set at exactly one position, or the word is not a model.
//!
//! Quantifiers range over a finite window. With `r` quantifier rounds left
//! and pebbles below `m`, two positions beyond `max(|u|, m)` in the same
//! residue class mod `|v|` and at distance at least `2^r |v|` from each other
//! and from the pebbles cannot be told apart in `r` rounds of the
//! Ehrenfeucht-Fraïssé game on `u v^w`. Hence every witness can be moved below
//! `max(|u|, m) + |v| (2^r + 2)`.

use std::collections::HashMap;

use super::ast::{is_first_order, Formula};
use super::compile::VarAlphabet;
use crate::error::{Error, Result};
use crate::recognizer::UpWord;

struct Model<'a> {
    v: &'a VarAlphabet,
    word: &'a UpWord,
}

impl Model<'_> {
    fn holds(&self, track: usize, pos: usize) -> bool {
        self.v.bit(self.word.letter_at(pos), track)
    }

    fn eval(&self, f: &Formula, env: &mut HashMap<String, usize>) -> Result<bool> {
        let pos = |x: &String, env: &HashMap<String, usize>| {
            env.get(x).copied().ok_or_else(|| Error::UnboundVariable(x.clone()))
        };
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Less(x, y) => pos(x, env)? < pos(y, env)?,
            Formula::Succ(x, y) => pos(x, env)? + 1 == pos(y, env)?,
            Formula::Member(x, set) => {
                let track = self
                    .v
                    .position(set)
                    .ok_or_else(|| Error::UnknownVariable(set.clone()))?;
                self.holds(track, pos(x, env)?)
            }
            Formula::Not(g) => !self.eval(g, env)?,
            Formula::And(g, h) => self.eval(g, env)? && self.eval(h, env)?,
            Formula::Or(g, h) => self.eval(g, env)? || self.eval(h, env)?,
            Formula::Exists(x, g) => {
                if !is_first_order(x) {
                    return Err(Error::Unsupported("second-order quantifiers in the evaluator".into()));
                }
                let rounds = f.quantifier_depth() as u32;
                let pebbles = env.values().map(|&p| p + 1).max().unwrap_or(0);
                let base = self.word.prefix().len().max(pebbles);
                let bound = base + self.word.period().len() * ((1usize << rounds) + 2);
                let saved = env.get(x).copied();
                let mut found = false;
                for p in 0..bound {
                    env.insert(x.clone(), p);
                    if self.eval(g, env)? {
                        found = true;
                        break;
                    }
                }
                match saved {
                    Some(p) => env.insert(x.clone(), p),
                    None => env.remove(x),
                };
                found
            }
        })
    }
}

/// Decides whether `word`, read over `2^V`, is a model of `f`.
pub fn evaluate(f: &Formula, v: &VarAlphabet, word: &UpWord) -> Result<bool> {
    let model = Model { v, word };
    let mut env = HashMap::new();
    let (u, p) = (word.prefix().len(), word.period().len());
    for x in f.free_vars() {
        let track = v.position(&x).ok_or_else(|| Error::UnknownVariable(x.clone()))?;
        if !is_first_order(&x) {
            continue;
        }
        if (u..u + p).any(|i| model.holds(track, i)) {
            return Ok(false);
        }
        let hits: Vec<usize> = (0..u).filter(|&i| model.holds(track, i)).collect();
        match hits.as_slice() {
            [i] => env.insert(x, *i),
            _ => return Ok(false),
        };
    }
    // First-order variables of V that do not occur free still need one position.
    for (track, x) in v.vars().iter().enumerate() {
        if is_first_order(x) && !env.contains_key(x) {
            let count = (0..u).filter(|&i| model.holds(track, i)).count();
            if count != 1 || (u..u + p).any(|i| model.holds(track, i)) {
                return Ok(false);
            }
        }
    }
    model.eval(f, &mut env)
}
