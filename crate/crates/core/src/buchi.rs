//! Büchi automata and the two conversions between automata and morphisms.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::recognizer::{linked_pairs, Alphabet, Letter, Mode, Morphism, PairSet, Recognizer, UpWord};
use crate::semigroup::{close_generators, tarjan_scc, ClosureOptions, Element};
use crate::syntactic::syntactic_morphism;

/// A nondeterministic Büchi automaton `(Q, A, delta, I, F)` with states
/// `0..states`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuchiAutomaton {
    states: usize,
    alphabet: Alphabet,
    transitions: Vec<(usize, Letter, usize)>,
    initial: Vec<usize>,
    accepting: Vec<usize>,
    /// Successor lists indexed by `state * |A| + letter`.
    succ: Vec<Vec<usize>>,
}

impl BuchiAutomaton {
    pub fn new(
        states: usize,
        alphabet: Alphabet,
        mut transitions: Vec<(usize, Letter, usize)>,
        mut initial: Vec<usize>,
        mut accepting: Vec<usize>,
    ) -> Result<Self> {
        let k = alphabet.len();
        for &(p, a, q) in &transitions {
            if p >= states || q >= states || a >= k {
                return Err(Error::InvalidAutomaton(format!(
                    "transition ({p}, {a}, {q}) out of range"
                )));
            }
        }
        if let Some(&q) = initial.iter().chain(&accepting).find(|&&q| q >= states) {
            return Err(Error::InvalidAutomaton(format!("state {q} out of range")));
        }
        transitions.sort_unstable();
        transitions.dedup();
        initial.sort_unstable();
        initial.dedup();
        accepting.sort_unstable();
        accepting.dedup();
        let mut succ = vec![Vec::new(); states * k];
        for &(p, a, q) in &transitions {
            succ[p * k + a].push(q);
        }
        Ok(BuchiAutomaton {
            states,
            alphabet,
            transitions,
            initial,
            accepting,
            succ,
        })
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn transitions(&self) -> &[(usize, Letter, usize)] {
        &self.transitions
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn accepting(&self) -> &[usize] {
        &self.accepting
    }

    pub fn successors(&self, p: usize, a: Letter) -> &[usize] {
        &self.succ[p * self.alphabet.len() + a]
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting.binary_search(&q).is_ok()
    }

    /// Restricts to states reachable from an initial state and able to
    /// reach an accepting state, renumbering them in increasing order.
    pub fn trim(&self) -> BuchiAutomaton {
        let k = self.alphabet.len();
        let mut forward = vec![false; self.states];
        let mut stack: Vec<usize> = self.initial.clone();
        for &q in &stack {
            forward[q] = true;
        }
        while let Some(p) = stack.pop() {
            for a in 0..k {
                for &q in self.successors(p, a) {
                    if !forward[q] {
                        forward[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
        let mut pred = vec![Vec::new(); self.states];
        for &(p, _, q) in &self.transitions {
            pred[q].push(p);
        }
        let mut backward = vec![false; self.states];
        stack = self.accepting.clone();
        for &q in &stack {
            backward[q] = true;
        }
        while let Some(q) = stack.pop() {
            for &p in &pred[q] {
                if !backward[p] {
                    backward[p] = true;
                    stack.push(p);
                }
            }
        }
        let mut renumber = vec![usize::MAX; self.states];
        let mut kept = 0;
        for q in 0..self.states {
            if forward[q] && backward[q] {
                renumber[q] = kept;
                kept += 1;
            }
        }
        let map = |qs: &[usize]| -> Vec<usize> {
            qs.iter()
                .filter(|&&q| renumber[q] != usize::MAX)
                .map(|&q| renumber[q])
                .collect()
        };
        let transitions = self
            .transitions
            .iter()
            .filter(|&&(p, _, q)| renumber[p] != usize::MAX && renumber[q] != usize::MAX)
            .map(|&(p, a, q)| (renumber[p], a, renumber[q]))
            .collect();
        BuchiAutomaton::new(
            kept,
            self.alphabet.clone(),
            transitions,
            map(&self.initial),
            map(&self.accepting),
        )
        .expect("trimmed automaton is well formed")
    }

    /// Decides acceptance of `u v^w` on the product of the automaton with
    /// the lasso: some reachable cycle must pass through an accepting state.
    pub fn accepts_lasso(&self, word: &UpWord) -> bool {
        let u = word.prefix().len();
        let len = u + word.period().len();
        let next = |i: usize| if i + 1 < len { i + 1 } else { u };
        let letter = |i: usize| word.letter_at(i);
        let nodes = self.states * len;
        let node = |q: usize, i: usize| q * len + i;

        let mut reachable = vec![false; nodes];
        let mut stack: Vec<usize> = Vec::new();
        for &q in &self.initial {
            let v = node(q, 0);
            if !reachable[v] {
                reachable[v] = true;
                stack.push(v);
            }
        }
        while let Some(v) = stack.pop() {
            let (q, i) = (v / len, v % len);
            for &r in self.successors(q, letter(i)) {
                let w = node(r, next(i));
                if !reachable[w] {
                    reachable[w] = true;
                    stack.push(w);
                }
            }
        }
        let succ = |v: usize, k: usize| -> Option<usize> {
            if !reachable[v] {
                return None;
            }
            let (q, i) = (v / len, v % len);
            self.successors(q, letter(i)).get(k).map(|&r| node(r, next(i)))
        };
        let comp = tarjan_scc(nodes, succ);
        let mut size = vec![0usize; nodes];
        for v in 0..nodes {
            if reachable[v] {
                size[comp[v] as usize] += 1;
            }
        }
        (0..nodes).any(|v| {
            let (q, i) = (v / len, v % len);
            reachable[v]
                && self.is_accepting(q)
                && (size[comp[v] as usize] > 1 || self.successors(q, letter(i)).contains(&q) && next(i) == i)
        })
    }
}

/// A `Q x Q` matrix over `{0, 1, 2}`, stored as two bit matrices: `reach`
/// for entries `>= 1` and `fin` for entries `= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TransitionMatrix {
    n: usize,
    reach: Vec<u64>,
    fin: Vec<u64>,
}

impl TransitionMatrix {
    fn words(n: usize) -> usize {
        n.div_ceil(64).max(1)
    }

    pub fn zero(n: usize) -> Self {
        let w = Self::words(n);
        TransitionMatrix {
            n,
            reach: vec![0; n * w],
            fin: vec![0; n * w],
        }
    }

    /// The matrix of a single letter of `b`.
    pub fn letter(b: &BuchiAutomaton, a: Letter) -> Self {
        let mut m = TransitionMatrix::zero(b.states());
        for p in 0..b.states() {
            for &q in b.successors(p, a) {
                let value = if b.is_accepting(p) || b.is_accepting(q) { 2 } else { 1 };
                m.set(p, q, value);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, p: usize, q: usize) -> u8 {
        let w = Self::words(self.n);
        let (i, bit) = (p * w + q / 64, 1u64 << (q % 64));
        if self.fin[i] & bit != 0 {
            2
        } else if self.reach[i] & bit != 0 {
            1
        } else {
            0
        }
    }

    pub fn set(&mut self, p: usize, q: usize, value: u8) {
        let w = Self::words(self.n);
        let (i, bit) = (p * w + q / 64, 1u64 << (q % 64));
        self.reach[i] &= !bit;
        self.fin[i] &= !bit;
        if value >= 1 {
            self.reach[i] |= bit;
        }
        if value >= 2 {
            self.fin[i] |= bit;
        }
    }

    /// `(MN)_pq` is 0 if no `r` has `M_pr, N_rq >= 1`; otherwise 2 if one
    /// such `r` has `max(M_pr, N_rq) = 2`, else 1.
    pub fn product(&self, other: &TransitionMatrix) -> TransitionMatrix {
        let n = self.n;
        let w = Self::words(n);
        let mut out = TransitionMatrix::zero(n);
        for p in 0..n {
            let (row_reach, row_fin) = (&self.reach[p * w..(p + 1) * w], &self.fin[p * w..(p + 1) * w]);
            let dst = p * w;
            for (k, (&rw, &fw)) in row_reach.iter().zip(row_fin).enumerate() {
                let mut bits = rw;
                while bits != 0 {
                    let r = k * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let through_fin = fw & (1u64 << (r % 64)) != 0;
                    for j in 0..w {
                        let reach = other.reach[r * w + j];
                        out.reach[dst + j] |= reach;
                        out.fin[dst + j] |= if through_fin { reach } else { other.fin[r * w + j] };
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for TransitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in 0..self.n {
            let row: String = (0..self.n).map(|q| char::from(b'0' + self.get(p, q))).collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

/// Converts `b` into a strongly recognizing morphism onto its matrix
/// semigroup. A linked pair `(R, E)` accepts iff `R_pq >= 1` and
/// `E_qq = 2` for some initial `p` and some `q`.
pub fn buchi_to_strong(b: &BuchiAutomaton, options: ClosureOptions) -> Result<Recognizer> {
    let letters: Vec<TransitionMatrix> = (0..b.alphabet().len())
        .map(|a| TransitionMatrix::letter(b, a))
        .collect();
    let c = close_generators(&letters, |x, y| x.product(y), options)?;
    let morphism = Arc::new(Morphism::new(b.alphabet().clone(), c.semigroup, c.seeds)?);
    let s = morphism.target();
    let mut p = PairSet::new(s.size());
    for (x, e) in linked_pairs(s).iter() {
        let (rm, em) = (&c.elements[x.index()], &c.elements[e.index()]);
        let loops: Vec<usize> = (0..b.states()).filter(|&q| em.get(q, q) == 2).collect();
        if b.initial().iter().any(|&i| loops.iter().any(|&q| rm.get(i, q) >= 1)) {
            p.insert(x, e);
        }
    }
    Recognizer::new(morphism, p, Mode::Strong)
}

/// The automaton on `S¹ x E(S)` with initial states `P`, accepting states
/// `{1} x E(S)` and transitions `((s,e), a, (t,e))` whenever `h(a) t = s`
/// or `h(a) t = s e`. State `(s, e)` is numbered `s * |E(S)| + k` where `e`
/// is the `k`-th idempotent and `s = |S|` stands for `1`.
pub fn morphism_to_buchi(r: &Recognizer) -> BuchiAutomaton {
    let h = r.morphism();
    let s = h.target();
    let m = s.adjoin_identity();
    let idempotents: Vec<Element> = s.idempotents().collect();
    let ne = idempotents.len();
    let state = |x: Element, k: usize| x.index() * ne + k;

    let mut transitions = Vec::new();
    for a in 0..h.alphabet().len() {
        let ha = h.image(a);
        for t in m.elements() {
            let ht = m.mul(ha, t);
            for (k, &e) in idempotents.iter().enumerate() {
                for x in m.elements() {
                    if ht == x || ht == m.mul(x, e) {
                        transitions.push((state(x, k), a, state(t, k)));
                    }
                }
            }
        }
    }
    let slot = |e: Element| idempotents.iter().position(|&f| f == e).expect("idempotent");
    let initial = r.accepting().iter().map(|(x, e)| state(x, slot(e))).collect();
    let accepting = (0..ne).map(|k| state(m.identity(), k)).collect();
    BuchiAutomaton::new(m.size() * ne, h.alphabet().clone(), transitions, initial, accepting)
        .expect("construction is well formed")
}

/// Converts a weak recognizer into the syntactic strong recognizer of the
/// same language via the automaton.
pub fn weak_to_strong(r: &Recognizer) -> Result<Recognizer> {
    let b = morphism_to_buchi(r).trim();
    let strong = buchi_to_strong(&b, ClosureOptions::unaudited())?;
    Ok(syntactic_morphism(&strong)?.recognizer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testgen;
    use rand::SeedableRng;

    fn automaton(
        states: usize,
        letters: &str,
        t: &[(usize, usize, usize)],
        i: &[usize],
        f: &[usize],
    ) -> BuchiAutomaton {
        BuchiAutomaton::new(
            states,
            Alphabet::from_chars(letters).unwrap(),
            t.to_vec(),
            i.to_vec(),
            f.to_vec(),
        )
        .unwrap()
    }

    /// `(a+b+)^w`: state 3 is entered on each `a` that follows a `b`.
    fn ab_automaton() -> BuchiAutomaton {
        let t = [
            (0, 0, 1),
            (1, 0, 1),
            (1, 1, 2),
            (2, 1, 2),
            (2, 0, 3),
            (3, 0, 1),
            (3, 1, 2),
        ];
        automaton(4, "ab", &t, &[0], &[3])
    }

    #[test]
    fn matrix_product_is_associative_on_small_matrices() {
        let all: Vec<TransitionMatrix> = (0..81)
            .map(|mut code| {
                let mut m = TransitionMatrix::zero(2);
                for p in 0..2 {
                    for q in 0..2 {
                        m.set(p, q, (code % 3) as u8);
                        code /= 3;
                    }
                }
                m
            })
            .collect();
        for x in &all {
            for y in &all {
                let xy = x.product(y);
                for z in all.iter().step_by(7) {
                    assert_eq!(xy.product(z), x.product(&y.product(z)));
                }
            }
        }
    }

    #[test]
    fn matrix_product_is_monotone() {
        let mut low = TransitionMatrix::zero(2);
        low.set(0, 1, 1);
        let mut high = low.clone();
        high.set(0, 1, 2);
        let mut n = TransitionMatrix::zero(2);
        n.set(1, 0, 1);
        assert_eq!(low.product(&n).get(0, 0), 1);
        assert_eq!(high.product(&n).get(0, 0), 2);
    }

    #[test]
    fn single_state_universal_automaton() {
        let b = automaton(1, "ab", &[(0, 0, 0), (0, 1, 0)], &[0], &[0]);
        let r = buchi_to_strong(&b, ClosureOptions::default()).unwrap();
        assert_eq!(r.semigroup().size(), 1);
        assert!(crate::inclusion::universal(&r).unwrap().holds);
    }

    #[test]
    fn no_accepting_states_gives_the_empty_language() {
        let b = automaton(2, "ab", &[(0, 0, 1), (1, 1, 0)], &[0], &[]);
        assert!(buchi_to_strong(&b, ClosureOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn ab_automaton_matches_band_recognizer() {
        let r = buchi_to_strong(&ab_automaton(), ClosureOptions::default()).unwrap();
        let band = testgen::rectangular_band_recognizer(false, false);
        let a = r.alphabet();
        for text in ["(ab)^w", "(a)^w", "b(a)^w", "aab(bba)^w", "ab(b)^w"] {
            let w = UpWord::parse(text, a).unwrap();
            assert_eq!(r.member(&w).unwrap(), band.member(&w).unwrap(), "{text}");
            assert_eq!(r.member(&w).unwrap(), ab_automaton().accepts_lasso(&w), "{text}");
        }
        let m1 = syntactic_morphism(&r).unwrap().recognizer;
        let m2 = weak_to_strong(&band).unwrap();
        assert_eq!(m1.stats(), m2.stats());
    }

    #[test]
    fn lasso_acceptance_needs_a_cycle_through_a_final_state() {
        let b = ab_automaton();
        let a = b.alphabet().clone();
        assert!(b.accepts_lasso(&UpWord::parse("(ab)^w", &a).unwrap()));
        assert!(!b.accepts_lasso(&UpWord::parse("ab(a)^w", &a).unwrap()));
        assert!(!b.accepts_lasso(&UpWord::parse("(b)^w", &a).unwrap()));
    }

    #[test]
    fn morphism_automaton_has_states_on_s1_times_idempotents() {
        let r = testgen::rectangular_band_recognizer(false, false);
        let b = morphism_to_buchi(&r);
        let idempotents = r.semigroup().idempotents().count();
        assert_eq!(b.states(), 5 * idempotents);
        assert_eq!(b.initial().len(), r.accepting().len());
        assert_eq!(b.accepting().len(), idempotents);
        let a = r.alphabet().clone();
        for text in ["(ab)^w", "(a)^w", "(b)^w", "ba(ab)^w", "bbb(aab)^w", "(abb)^w"] {
            let w = UpWord::parse(text, &a).unwrap();
            assert_eq!(b.accepts_lasso(&w), r.member(&w).unwrap(), "{text}");
            assert_eq!(b.trim().accepts_lasso(&w), r.member(&w).unwrap(), "{text}");
        }
    }

    #[test]
    fn empty_recognizer_gives_automaton_without_initial_states() {
        let h = Arc::new(testgen::rectangular_band_morphism(false));
        let r = Recognizer::new(h, PairSet::new(4), Mode::Strong).unwrap();
        let b = morphism_to_buchi(&r);
        assert!(b.initial().is_empty());
        assert_eq!(b.trim().states(), 0);
        assert!(weak_to_strong(&r).unwrap().is_empty());
    }

    #[test]
    fn weak_to_strong_matches_weak_membership() {
        let weak = testgen::rectangular_band_recognizer(true, false);
        let strong = weak_to_strong(&weak).unwrap();
        assert_eq!(strong.mode(), Mode::Strong);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let w = testgen::random_upword(&mut rng, 3, 4, 4);
            assert_eq!(strong.member(&w).unwrap(), weak.member(&w).unwrap());
        }
    }

    #[test]
    fn random_automata_convert_faithfully() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let b = testgen::random_buchi(&mut rng, 3, 2, 0.35);
            let r = buchi_to_strong(&b, ClosureOptions::default()).unwrap();
            for _ in 0..30 {
                let w = testgen::random_upword(&mut rng, 2, 4, 4);
                assert_eq!(r.member(&w).unwrap(), b.accepts_lasso(&w));
            }
        }
    }
}
