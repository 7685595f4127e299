//! The syntactic morphism of `[P]`: the maximal pair set `Q`, the
//! equivalence `≅` it induces, and Hopcroft-style refinement of `≅` to the
//! coarsest congruence below it.

use std::sync::Arc;

use crate::conjugacy::close_under_conjugation;
use crate::error::{Error, Result};
use crate::inclusion::inclusion_test;
use crate::recognizer::{Mode, Morphism, PairSet, Recognizer};
use crate::semigroup::{close_generators, ClosureOptions, Element, Semigroup};

/// `Q = {(s, t) : (s f, f) in P}` where `f` is the idempotent power of `t`;
/// `(h(u), h(v)) in Q` iff `u v^w in [P]`.
pub fn maximal_pair_set(h: &Morphism, p: &PairSet) -> Result<PairSet> {
    if close_under_conjugation(h, p)? != *p {
        return Err(Error::NotClosed);
    }
    Ok(maximal_pair_set_unchecked(h.target(), p))
}

pub(crate) fn maximal_pair_set_unchecked(s: &Semigroup, p: &PairSet) -> PairSet {
    let n = s.size();
    let mut q = PairSet::new(n);
    if p.is_empty() {
        return q;
    }
    let powers: Vec<Element> = s.elements().map(|t| s.idempotent_power(t)).collect();
    for x in s.elements() {
        for t in s.elements() {
            let f = powers[t.index()];
            if p.contains(s.mul(x, f), f) {
                q.insert(x, t);
            }
        }
    }
    q
}

/// A partition of `0..n` supporting `split(X)` in `O(|X|)`, together with
/// the worklist `T` of classes still to be processed.
#[derive(Clone, Debug)]
pub struct RefinablePartition {
    elements: Vec<u32>,
    position: Vec<u32>,
    class_of: Vec<u32>,
    start: Vec<u32>,
    end: Vec<u32>,
    marked: Vec<u32>,
    in_worklist: Vec<bool>,
    worklist: Vec<u32>,
    touched: Vec<u32>,
    track: bool,
}

impl RefinablePartition {
    /// The partition with the single class `0..n` and an empty worklist.
    pub fn new(n: usize) -> Self {
        let (start, end) = if n == 0 {
            (vec![], vec![])
        } else {
            (vec![0], vec![n as u32])
        };
        RefinablePartition {
            elements: (0..n as u32).collect(),
            position: (0..n as u32).collect(),
            class_of: vec![0; n],
            marked: vec![0; start.len()],
            in_worklist: vec![false; start.len()],
            start,
            end,
            worklist: Vec::new(),
            touched: Vec::new(),
            track: false,
        }
    }

    pub fn class_count(&self) -> usize {
        self.start.len()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x] as usize
    }

    pub fn class(&self, c: usize) -> &[u32] {
        &self.elements[self.start[c] as usize..self.end[c] as usize]
    }

    pub fn class_size(&self, c: usize) -> usize {
        (self.end[c] - self.start[c]) as usize
    }

    /// Splits every class `C` into `C ∩ X` and `C \ X`. While worklist
    /// tracking is on, a split class in `T` is replaced by both halves and
    /// otherwise the smaller half is added. `xs` must be duplicate-free.
    pub fn split(&mut self, xs: impl IntoIterator<Item = u32>) {
        for x in xs {
            let c = self.class_of[x as usize] as usize;
            if self.marked[c] == 0 {
                self.touched.push(c as u32);
            }
            // Swap x to the front of the unmarked region.
            let target = self.start[c] + self.marked[c];
            let pos = self.position[x as usize];
            let other = self.elements[target as usize];
            self.elements.swap(target as usize, pos as usize);
            self.position[other as usize] = pos;
            self.position[x as usize] = target;
            self.marked[c] += 1;
        }
        let touched = std::mem::take(&mut self.touched);
        for &c in &touched {
            let c = c as usize;
            let m = self.marked[c];
            self.marked[c] = 0;
            let size = self.end[c] - self.start[c];
            if m == size {
                continue;
            }
            let new = self.start.len() as u32;
            let (s, mid) = (self.start[c], self.start[c] + m);
            self.start.push(s);
            self.end.push(mid);
            self.start[c] = mid;
            self.marked.push(0);
            self.in_worklist.push(false);
            for i in s..mid {
                self.class_of[self.elements[i as usize] as usize] = new;
            }
            if !self.track {
                continue;
            }
            if self.in_worklist[c] {
                self.in_worklist[new as usize] = true;
                self.worklist.push(new);
            } else {
                let smaller = if m <= size - m { new } else { c as u32 };
                self.in_worklist[smaller as usize] = true;
                self.worklist.push(smaller);
            }
        }
        self.touched = touched;
        self.touched.clear();
    }

    /// Starts worklist tracking with every class except one of maximal size.
    fn seed_worklist(&mut self) {
        self.track = true;
        let largest = (0..self.class_count()).max_by_key(|&c| (self.class_size(c), std::cmp::Reverse(c)));
        for c in 0..self.class_count() {
            if Some(c) != largest {
                self.in_worklist[c] = true;
                self.worklist.push(c as u32);
            }
        }
    }

    fn pop(&mut self) -> Option<usize> {
        let c = self.worklist.pop()? as usize;
        self.in_worklist[c] = false;
        Some(c)
    }
}

/// The partition of `S` into classes of `≅`.
pub fn initial_partition(q: &PairSet) -> RefinablePartition {
    let n = q.universe();
    let mut part = RefinablePartition::new(n);
    let mut row = Vec::with_capacity(n);
    for s in 0..n {
        let se = Element::new(s);
        row.clear();
        row.extend((0..n).filter(|&t| q.contains(se, Element::new(t))).map(|t| t as u32));
        part.split(row.iter().copied());
        row.clear();
        row.extend((0..n).filter(|&t| q.contains(Element::new(t), se)).map(|t| t as u32));
        part.split(row.iter().copied());
    }
    part
}

/// Predecessor lists `{s : s g = t}` and `{s : g s = t}` per generator.
struct Preimages {
    right: Vec<Vec<u32>>,
    left: Vec<Vec<u32>>,
    right_start: Vec<Vec<u32>>,
    left_start: Vec<Vec<u32>>,
}

impl Preimages {
    fn new(s: &Semigroup) -> Self {
        let n = s.size();
        let gens = s.generators().len();
        let build = |image: &dyn Fn(Element) -> Element| -> (Vec<u32>, Vec<u32>) {
            let mut start = vec![0u32; n + 1];
            for x in s.elements() {
                start[image(x).index() + 1] += 1;
            }
            for i in 0..n {
                start[i + 1] += start[i];
            }
            let mut fill = start.clone();
            let mut items = vec![0u32; n];
            for x in s.elements() {
                let t = image(x).index();
                items[fill[t] as usize] = x.index() as u32;
                fill[t] += 1;
            }
            (items, start)
        };
        let mut pre = Preimages {
            right: Vec::with_capacity(gens),
            left: Vec::with_capacity(gens),
            right_start: Vec::with_capacity(gens),
            left_start: Vec::with_capacity(gens),
        };
        for g in 0..gens {
            let (items, start) = build(&|x| s.right(x, g));
            pre.right.push(items);
            pre.right_start.push(start);
            let (items, start) = build(&|x| s.left(x, g));
            pre.left.push(items);
            pre.left_start.push(start);
        }
        pre
    }

    fn right_of(&self, g: usize, t: u32) -> &[u32] {
        let st = &self.right_start[g];
        &self.right[g][st[t as usize] as usize..st[t as usize + 1] as usize]
    }

    fn left_of(&self, g: usize, t: u32) -> &[u32] {
        let st = &self.left_start[g];
        &self.left[g][st[t as usize] as usize..st[t as usize + 1] as usize]
    }
}

/// Refines `part` to the coarsest congruence below it and returns the
/// number of elements touched by the splits of the main loop.
fn refine(s: &Semigroup, part: &mut RefinablePartition) -> usize {
    let pre = Preimages::new(s);
    let mut work = 0;
    let mut pivot: Vec<u32> = Vec::new();
    part.seed_worklist();
    while let Some(c) = part.pop() {
        let members: Vec<u32> = part.class(c).to_vec();
        for g in 0..s.generators().len() {
            pivot.clear();
            for &t in &members {
                pivot.extend_from_slice(pre.right_of(g, t));
            }
            work += pivot.len();
            part.split(pivot.iter().copied());
            pivot.clear();
            for &t in &members {
                pivot.extend_from_slice(pre.left_of(g, t));
            }
            work += pivot.len();
            part.split(pivot.iter().copied());
        }
    }
    work
}

/// The result of minimization.
#[derive(Clone, Debug)]
pub struct QuotientResult {
    /// The syntactic morphism with its (conjugation-closed) accepting set.
    pub recognizer: Recognizer,
    /// `π: S -> S/≡`, indexed by elements of the input semigroup.
    pub projection: Vec<Element>,
    /// Number of classes of `≅`.
    pub initial_classes: usize,
    /// Elements touched by splits in the refinement loop.
    pub split_work: usize,
}

/// Computes the syntactic morphism of `[P]` for the recognizer `r`.
///
/// A weak recognizer is accepted only if closing its accepting set under
/// conjugation does not change the language.
pub fn syntactic_morphism(r: &Recognizer) -> Result<QuotientResult> {
    let h = r.morphism();
    let s = h.target();
    let p = if r.mode() == Mode::Strong {
        r.accepting().clone()
    } else {
        let closed = close_under_conjugation(h, r.accepting())?;
        if closed != *r.accepting() && !inclusion_test(h, &closed, r.accepting())?.holds {
            return Err(Error::NotStrong);
        }
        closed
    };
    let q = maximal_pair_set_unchecked(s, &p);
    let mut part = initial_partition(&q);
    let initial_classes = part.class_count();
    let split_work = refine(s, &mut part);

    let rep: Vec<Element> = (0..part.class_count())
        .map(|c| Element::new(part.class(c)[0] as usize))
        .collect();
    let seeds: Vec<u32> = h.images().iter().map(|x| part.class_of(x.index()) as u32).collect();
    let mul = |a: &u32, b: &u32| part.class_of(s.mul(rep[*a as usize], rep[*b as usize]).index()) as u32;
    let closure = close_generators(&seeds, mul, ClosureOptions::unaudited())?;
    let mut renumber = vec![Element::new(0); part.class_count()];
    for (i, &c) in closure.elements.iter().enumerate() {
        renumber[c as usize] = Element::new(i);
    }
    let projection: Vec<Element> = (0..s.size()).map(|x| renumber[part.class_of(x)]).collect();
    let quotient = closure.semigroup;
    let mut accepting = PairSet::new(quotient.size());
    for (x, e) in p.iter() {
        accepting.insert(projection[x.index()], projection[e.index()]);
    }
    let morphism = Arc::new(Morphism::assemble(h.alphabet().clone(), quotient, closure.seeds));
    Ok(QuotientResult {
        recognizer: Recognizer::new_unchecked(morphism, accepting, Mode::Strong),
        projection,
        initial_classes,
        split_work,
    })
}
