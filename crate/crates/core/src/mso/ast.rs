//! Formulas of monadic second-order logic over infinite words.

use std::collections::BTreeSet;
use std::fmt;

/// Lowercase names are first-order (positions), uppercase names are
/// second-order (sets of positions).
pub fn is_first_order(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_lowercase())
}

/// Orders variables by their alphabetic stem, then numeric suffix, so that
/// `X2 < X10`.
pub fn var_order_key(name: &str) -> (String, u64, String) {
    let stem_len = name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (stem, digits) = name.split_at(stem_len);
    (stem.to_string(), digits.parse().unwrap_or(0), name.to_string())
}

/// A formula after desugaring: `->` and universal quantifiers are already
/// rewritten by the constructors below.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    /// `x < y`
    Less(String, String),
    /// `y = x + 1`, stored as `Succ(x, y)`.
    Succ(String, String),
    /// `x in X`
    Member(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn less(x: &str, y: &str) -> Formula {
        Formula::Less(x.into(), y.into())
    }

    pub fn succ(x: &str, y: &str) -> Formula {
        Formula::Succ(x.into(), y.into())
    }

    pub fn member(x: &str, set: &str) -> Formula {
        Formula::Member(x.into(), set.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(f: Formula, g: Formula) -> Formula {
        Formula::And(Box::new(f), Box::new(g))
    }

    pub fn or(f: Formula, g: Formula) -> Formula {
        Formula::Or(Box::new(f), Box::new(g))
    }

    /// `f -> g` as `~f | g`.
    pub fn implies(f: Formula, g: Formula) -> Formula {
        Formula::or(Formula::not(f), g)
    }

    pub fn exists(var: &str, f: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(f))
    }

    /// `forall v. f` as `~ exists v. ~f`.
    pub fn forall(var: &str, f: Formula) -> Formula {
        Formula::not(Formula::exists(var, Formula::not(f)))
    }

    /// Conjunction of a non-empty list, associated to the right.
    pub fn and_all(fs: impl IntoIterator<Item = Formula>) -> Formula {
        let mut fs: Vec<Formula> = fs.into_iter().collect();
        let mut acc = fs.pop().unwrap_or(Formula::True);
        while let Some(f) = fs.pop() {
            acc = Formula::and(f, acc);
        }
        acc
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let add = |v: &String, out: &mut BTreeSet<String>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Less(x, y) | Formula::Succ(x, y) | Formula::Member(x, y) => {
                add(x, out);
                add(y, out);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(f, g) | Formula::Or(f, g) => {
                f.collect_free(bound, out);
                g.collect_free(bound, out);
            }
            Formula::Exists(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Number of nested quantifiers.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Not(f) => f.quantifier_depth(),
            Formula::And(f, g) | Formula::Or(f, g) => f.quantifier_depth().max(g.quantifier_depth()),
            Formula::Exists(_, f) => 1 + f.quantifier_depth(),
            _ => 0,
        }
    }

    /// Renames free occurrences of `from` to `to`.
    pub fn rename(&self, from: &str, to: &str) -> Formula {
        let r = |v: &String| if v == from { to.to_string() } else { v.clone() };
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Less(x, y) => Formula::Less(r(x), r(y)),
            Formula::Succ(x, y) => Formula::Succ(r(x), r(y)),
            Formula::Member(x, y) => Formula::Member(r(x), r(y)),
            Formula::Not(f) => Formula::not(f.rename(from, to)),
            Formula::And(f, g) => Formula::and(f.rename(from, to), g.rename(from, to)),
            Formula::Or(f, g) => Formula::or(f.rename(from, to), g.rename(from, to)),
            Formula::Exists(v, f) if v == from => self.clone(),
            Formula::Exists(v, f) => Formula::exists(v, f.rename(from, to)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Less(x, y) => write!(f, "{x} < {y}"),
            Formula::Succ(x, y) => write!(f, "{y} = {x} + 1"),
            Formula::Member(x, y) => write!(f, "{x} in {y}"),
            Formula::Not(g) => write!(f, "~({g})"),
            Formula::And(g, h) => write!(f, "({g} & {h})"),
            Formula::Or(g, h) => write!(f, "({g} | {h})"),
            Formula::Exists(v, g) => write!(f, "E{v}. {g}"),
        }
    }
}
