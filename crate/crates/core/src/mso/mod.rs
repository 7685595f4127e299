//! Monadic second-order logic over infinite words, compiled to strongly
//! recognizing morphisms.

pub mod ast;
pub mod compile;
pub mod eval;
pub mod families;
pub mod parser;

pub use ast::Formula;
pub use compile::{atomic_recognizer, compile, Compiled, Compiler, VarAlphabet};
pub use eval::evaluate;
pub use parser::parse;

#[cfg(test)]
use crate::error::Error;
use crate::inclusion::inclusion_test;
use crate::recognizer::{PairSet, Recognizer, UpWord};

/// Up to `n` distinct words of `[P]`, one per accepting pair, in the order
/// of the pairs.
pub fn sample_models(r: &Recognizer, n: usize) -> Vec<UpWord> {
    let size = r.semigroup().size();
    let empty = PairSet::new(size);
    let mut out: Vec<UpWord> = Vec::new();
    for (x, e) in r.accepting().iter() {
        if out.len() >= n {
            break;
        }
        let single = PairSet::from_pairs(size, [(x, e)]);
        let res = inclusion_test(r.morphism(), &single, &empty).expect("accepting pairs are linked");
        if let Some(w) = res.witness {
            if !out.contains(&w) {
                out.push(w);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::families::{chi, phi, psi, set_vars, Neighbours};
    use super::*;
    use crate::recognizer::{universal_recognizer, Mode};
    use crate::testgen;
    use rand::SeedableRng;

    fn agree_on_random_words(f: &Formula, declared: &[String], samples: usize, seed: u64) {
        let c = Compiler::new().compile_declared(f, declared).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let letters = c.vars.alphabet().len();
        for _ in 0..samples {
            let w = testgen::random_upword(&mut rng, letters, 5, 5);
            let want = evaluate(f, &c.vars, &w).unwrap();
            assert_eq!(
                c.recognizer.member(&w).unwrap(),
                want,
                "{f} on {}",
                w.display(c.vars.alphabet())
            );
        }
    }

    #[test]
    fn var_alphabet_orders_bits_by_variable() {
        let v = VarAlphabet::new(["x", "X10", "X2"]);
        assert_eq!(v.vars(), ["X2", "X10", "x"]);
        assert_eq!(v.alphabet().len(), 8);
        let a = v.alphabet().index_of("011").unwrap();
        assert_eq!(a, 3);
        assert!(!v.bit(a, 0) && v.bit(a, 1) && v.bit(a, 2));
        assert_eq!(VarAlphabet::new(Vec::<String>::new()).alphabet().letters(), ["_"]);
    }

    #[test]
    fn membership_atom() {
        let c = atomic_recognizer(&parse("x in X").unwrap()).unwrap();
        let a = c.vars.alphabet();
        let accepts = |s: &str| c.recognizer.member(&UpWord::parse(s, a).unwrap()).unwrap();
        assert!(accepts("00.11(00)^w"));
        assert!(!accepts("(10)^w"));
        assert!(!accepts("01(00)^w"));
        assert!(!accepts("11.11(00)^w"));
        assert!(!accepts("(00)^w"));
    }

    #[test]
    fn successor_atom_matches_enumeration() {
        let c = atomic_recognizer(&Formula::succ("x", "y")).unwrap();
        let v = &c.vars;
        for len in 1..=6 {
            for word in testgen::all_words(4, len) {
                let up = UpWord::new(word.clone(), vec![0]).unwrap();
                let xs: Vec<usize> = (0..len).filter(|&i| v.bit(word[i], 0)).collect();
                let ys: Vec<usize> = (0..len).filter(|&i| v.bit(word[i], 1)).collect();
                let want = xs.len() == 1 && ys.len() == 1 && xs[0] + 1 == ys[0];
                assert_eq!(c.recognizer.member(&up).unwrap(), want);
            }
        }
    }

    #[test]
    fn reflexive_atoms_are_empty() {
        for f in [Formula::less("x", "x"), Formula::succ("x", "x"), Formula::False] {
            assert!(atomic_recognizer(&f).unwrap().recognizer.is_empty());
        }
    }

    #[test]
    fn families_agree_with_the_evaluator() {
        for k in 1..=3 {
            let vars = set_vars(k);
            for f in [phi(k), psi(k), chi(k, Neighbours::Cyclic), chi(k, Neighbours::Clamped)] {
                agree_on_random_words(&f, &vars, 60, k as u64);
            }
        }
    }

    #[test]
    fn free_first_order_variables() {
        let f = parse("Ey. (x < y & y in X) & ~ x in X").unwrap();
        let vars: Vec<String> = vec!["X".into(), "x".into()];
        agree_on_random_words(&f, &vars, 200, 9);
    }

    #[test]
    fn double_negation_is_neutral() {
        let f = parse("Ax. (x in X1 -> Ey. y = x + 1 & y in X2)").unwrap();
        let c1 = compile(&f).unwrap();
        let c2 = compile(&Formula::not(Formula::not(f))).unwrap();
        assert!(crate::langops::language_equivalent(&c1.recognizer, &c2.recognizer).unwrap());
        assert_eq!(c1.stats(), c2.stats());
    }

    #[test]
    fn stats_ignore_variable_names() {
        let f = parse("Ax. Ey. (x < y & y in X1) & (y in X2 -> ~y in X1)").unwrap();
        let g = f.rename("X1", "Z9").rename("X2", "B");
        assert_eq!(compile(&f).unwrap().stats(), compile(&g).unwrap().stats());
    }

    #[test]
    fn memo_shares_alpha_equivalent_subformulas() {
        let compiler = Compiler::new();
        compiler.compile(&parse("Ex. x in X").unwrap()).unwrap();
        let before = compiler.memo_len();
        compiler.compile(&parse("Ez. z in X").unwrap()).unwrap();
        assert_eq!(compiler.memo_len(), before);
    }

    #[test]
    fn undeclared_variables_are_rejected() {
        let f = phi(2);
        let err = Compiler::new().compile_declared(&f, &set_vars(1)).unwrap_err();
        assert!(matches!(err, Error::UnboundVariable(x) if x == "X2"));
    }

    #[test]
    fn second_order_quantifiers_compile_but_do_not_evaluate() {
        let f = parse("EX. Ax. x in X").unwrap();
        let c = compile(&f).unwrap();
        assert!(crate::inclusion::universal(&c.recognizer).unwrap().holds);
        let w = UpWord::new(vec![], vec![0]).unwrap();
        assert!(matches!(evaluate(&f, &c.vars, &w), Err(Error::Unsupported(_))));
    }

    #[test]
    fn sampled_models() {
        let c = compile(&phi(1)).unwrap();
        let models = sample_models(&c.recognizer, 5);
        assert!(!models.is_empty());
        for w in &models {
            assert!(c.recognizer.member(w).unwrap());
            let period = w.period();
            assert!(period.iter().any(|&a| c.vars.bit(a, 0)));
        }
        let empty = c
            .recognizer
            .with_accepting(PairSet::new(c.recognizer.semigroup().size()), Mode::Strong)
            .unwrap();
        assert!(sample_models(&empty, 3).is_empty());
        let all = universal_recognizer(c.recognizer.shared_morphism().clone());
        assert!(!sample_models(&all, 3).is_empty());
    }
}
