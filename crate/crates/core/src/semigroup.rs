//! Finite semigroups with a materialized multiplication table.
//!
//! Elements are dense indices. Every semigroup carries a list of generators
//! together with its right and left Cayley graphs with respect to them.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};

/// Default upper bound on the number of elements produced by a closure.
pub const DEFAULT_CLOSURE_CAP: usize = 10_000_000;
/// Default size up to which a closure is audited for associativity.
pub const DEFAULT_AUDIT_BOUND: usize = 200;
/// Environment variable overriding [`DEFAULT_CLOSURE_CAP`].
pub const CLOSURE_CAP_ENV: &str = "OMEGA_CLOSURE_CAP";

/// An element of a finite semigroup, identified by its index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(u32);

impl Element {
    pub fn new(index: usize) -> Self {
        Element(u32::try_from(index).expect("element index overflows u32"))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Limits applied while closing a set of generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureOptions {
    pub cap: usize,
    /// Closures with at most this many elements are checked exhaustively
    /// for associativity. Zero disables the check.
    pub audit_bound: usize,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions {
            cap: DEFAULT_CLOSURE_CAP,
            audit_bound: DEFAULT_AUDIT_BOUND,
        }
    }
}

impl ClosureOptions {
    /// Options used by the internal constructions, whose products are
    /// associative by construction. Honors [`CLOSURE_CAP_ENV`].
    pub fn unaudited() -> Self {
        ClosureOptions {
            cap: cap_from_env(),
            audit_bound: 0,
        }
    }

    pub fn from_env() -> Self {
        ClosureOptions {
            cap: cap_from_env(),
            ..Default::default()
        }
    }
}

fn cap_from_env() -> usize {
    std::env::var(CLOSURE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CLOSURE_CAP)
}

/// A finite semigroup given by its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semigroup {
    size: usize,
    table: Vec<u32>,
    generators: Vec<Element>,
    right_cayley: Vec<u32>,
    left_cayley: Vec<u32>,
    idempotent: Vec<bool>,
}

/// The result of [`close_generators`]: the semigroup, the concrete values
/// of its elements, and the element each seed was mapped to.
#[derive(Clone, Debug)]
pub struct Closure<T> {
    pub semigroup: Semigroup,
    pub elements: Vec<T>,
    pub seeds: Vec<Element>,
}

/// Closes `seeds` under `multiply`.
///
/// Elements are numbered in breadth-first order over right multiplication
/// by the (distinct) seeds, so that the numbering is the shortlex order of
/// the least generator word of each element.
pub fn close_generators<T, F>(seeds: &[T], multiply: F, options: ClosureOptions) -> Result<Closure<T>>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    if seeds.is_empty() {
        return Err(Error::InvalidSemigroup("no generators".into()));
    }
    let mut elements: Vec<T> = Vec::new();
    let mut index: HashMap<T, u32> = HashMap::new();
    let mut seed_elements = Vec::with_capacity(seeds.len());
    let mut generators: Vec<u32> = Vec::new();
    for seed in seeds {
        let id = match index.get(seed) {
            Some(&id) => id,
            None => {
                let id = elements.len() as u32;
                index.insert(seed.clone(), id);
                elements.push(seed.clone());
                generators.push(id);
                id
            }
        };
        seed_elements.push(Element(id));
    }
    if elements.len() > options.cap {
        return Err(Error::ClosureCapExceeded { cap: options.cap });
    }

    let ng = generators.len();
    let mut right: Vec<u32> = Vec::new();
    // For non-generators: (parent, generator slot) with element = parent * gen.
    let mut parent: Vec<(u32, u32)> = vec![(u32::MAX, u32::MAX); elements.len()];
    let mut i = 0;
    while i < elements.len() {
        for (gi, &g) in generators.iter().enumerate() {
            let product = multiply(&elements[i], &elements[g as usize]);
            let id = match index.get(&product) {
                Some(&id) => id,
                None => {
                    if elements.len() >= options.cap {
                        return Err(Error::ClosureCapExceeded { cap: options.cap });
                    }
                    let id = elements.len() as u32;
                    index.insert(product.clone(), id);
                    elements.push(product);
                    parent.push((i as u32, gi as u32));
                    id
                }
            };
            right.push(id);
        }
        i += 1;
    }
    drop(index);

    let n = elements.len();
    let generators: Vec<Element> = generators.into_iter().map(Element).collect();
    let table = table_from_right_cayley(n, &generators, &right, &parent);
    let semigroup = Semigroup::assemble(n, table, generators, right);
    debug_assert_eq!(semigroup.right_cayley.len(), n * ng);

    if n <= options.audit_bound {
        for a in 0..n {
            for b in 0..n {
                let direct = multiply(&elements[a], &elements[b]);
                if direct != elements[semigroup.table[a * n + b] as usize] {
                    return Err(Error::NonAssociative { a, b, c: b });
                }
            }
        }
        semigroup.check_associative()?;
    }

    Ok(Closure {
        semigroup,
        elements,
        seeds: seed_elements,
    })
}

fn table_from_right_cayley(n: usize, generators: &[Element], right: &[u32], parent: &[(u32, u32)]) -> Vec<u32> {
    let ng = generators.len();
    let mut slot_of = vec![u32::MAX; n];
    for (gi, g) in generators.iter().enumerate() {
        slot_of[g.index()] = gi as u32;
    }
    let mut table = vec![0u32; n * n];
    for s in 0..n {
        let row = s * n;
        for t in 0..n {
            let value = if slot_of[t] != u32::MAX {
                right[s * ng + slot_of[t] as usize]
            } else {
                let (p, gi) = parent[t];
                let sp = table[row + p as usize] as usize;
                right[sp * ng + gi as usize]
            };
            table[row + t] = value;
        }
    }
    table
}

impl Semigroup {
    fn assemble(size: usize, table: Vec<u32>, generators: Vec<Element>, right_cayley: Vec<u32>) -> Self {
        let ng = generators.len();
        let mut left_cayley = vec![0u32; size * ng];
        for s in 0..size {
            for (gi, g) in generators.iter().enumerate() {
                left_cayley[s * ng + gi] = table[g.index() * size + s];
            }
        }
        let idempotent = (0..size).map(|e| table[e * size + e] as usize == e).collect();
        Semigroup {
            size,
            table,
            generators,
            right_cayley,
            left_cayley,
            idempotent,
        }
    }

    /// Builds a semigroup from a row-major table and a generating set.
    ///
    /// Fails if the table has the wrong shape, refers to missing elements,
    /// or if the generators do not generate every element. Associativity is
    /// checked when `size <= audit_bound`.
    pub fn from_table(size: usize, table: Vec<u32>, generators: Vec<Element>, audit_bound: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidSemigroup("empty semigroup".into()));
        }
        if table.len() != size * size {
            return Err(Error::InvalidSemigroup(format!(
                "table has {} entries, expected {}",
                table.len(),
                size * size
            )));
        }
        if let Some(bad) = table.iter().find(|&&v| v as usize >= size) {
            return Err(Error::InvalidSemigroup(format!("table entry {bad} out of range")));
        }
        if generators.is_empty() {
            return Err(Error::InvalidSemigroup("no generators".into()));
        }
        if let Some(g) = generators.iter().find(|g| g.index() >= size) {
            return Err(Error::InvalidSemigroup(format!("generator {g} out of range")));
        }
        let mut gens = Vec::new();
        for g in generators {
            if !gens.contains(&g) {
                gens.push(g);
            }
        }
        let ng = gens.len();
        let mut right = vec![0u32; size * ng];
        for s in 0..size {
            for (gi, g) in gens.iter().enumerate() {
                right[s * ng + gi] = table[s * size + g.index()];
            }
        }
        let semigroup = Semigroup::assemble(size, table, gens, right);
        let reached = semigroup.generated_count();
        if reached != size {
            return Err(Error::InvalidSemigroup(format!(
                "generators reach {reached} of {size} elements"
            )));
        }
        if size <= audit_bound {
            semigroup.check_associative()?;
        }
        Ok(semigroup)
    }

    /// Same table, different generating set.
    pub fn with_generators(&self, generators: Vec<Element>) -> Result<Self> {
        Semigroup::from_table(self.size, self.table.clone(), generators, 0)
    }

    fn generated_count(&self) -> usize {
        let mut seen = vec![false; self.size];
        let mut stack: Vec<usize> = Vec::new();
        for g in &self.generators {
            if !seen[g.index()] {
                seen[g.index()] = true;
                stack.push(g.index());
            }
        }
        let mut count = stack.len();
        while let Some(s) = stack.pop() {
            for gi in 0..self.generators.len() {
                let t = self.right_cayley[s * self.generators.len() + gi] as usize;
                if !seen[t] {
                    seen[t] = true;
                    count += 1;
                    stack.push(t);
                }
            }
        }
        count
    }

    /// Exhaustive associativity check, `O(|S|^3)`.
    pub fn check_associative(&self) -> Result<()> {
        let n = self.size;
        for a in 0..n {
            for b in 0..n {
                let ab = self.table[a * n + b] as usize;
                for c in 0..n {
                    let bc = self.table[b * n + c] as usize;
                    if self.table[ab * n + c] != self.table[a * n + bc] {
                        return Err(Error::NonAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.size).map(Element::new)
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        Element(self.table[a.index() * self.size + b.index()])
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    /// `s * generators[gen]`.
    #[inline]
    pub fn right(&self, s: Element, gen: usize) -> Element {
        Element(self.right_cayley[s.index() * self.generators.len() + gen])
    }

    /// `generators[gen] * s`.
    #[inline]
    pub fn left(&self, s: Element, gen: usize) -> Element {
        Element(self.left_cayley[s.index() * self.generators.len() + gen])
    }

    #[inline]
    pub fn is_idempotent(&self, e: Element) -> bool {
        self.idempotent[e.index()]
    }

    pub fn idempotents(&self) -> impl Iterator<Item = Element> + '_ {
        self.elements().filter(|&e| self.is_idempotent(e))
    }

    /// Returns the unique idempotent among the powers of `s`.
    pub fn idempotent_power(&self, s: Element) -> Element {
        self.idempotent_power_with_exponent(s).0
    }

    /// Returns `(s^k, k)` for the least `k >= 1` such that `s^k` is idempotent.
    pub fn idempotent_power_with_exponent(&self, s: Element) -> (Element, usize) {
        let mut x = s;
        let mut k = 1;
        while !self.is_idempotent(x) {
            x = self.mul(x, s);
            k += 1;
        }
        (x, k)
    }

    pub fn adjoin_identity(&self) -> MonoidView<'_> {
        MonoidView { base: self }
    }
}

/// `S^1`: the semigroup with a fresh neutral element adjoined, always, even
/// when `S` already has an identity.
#[derive(Clone, Copy, Debug)]
pub struct MonoidView<'a> {
    base: &'a Semigroup,
}

impl<'a> MonoidView<'a> {
    pub fn base(&self) -> &'a Semigroup {
        self.base
    }

    pub fn size(&self) -> usize {
        self.base.size + 1
    }

    /// The adjoined identity, numbered `|S|`.
    pub fn identity(&self) -> Element {
        Element::new(self.base.size)
    }

    pub fn is_identity(&self, x: Element) -> bool {
        x.index() == self.base.size
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        let one = self.base.size;
        if a.index() == one {
            b
        } else if b.index() == one {
            a
        } else {
            self.base.mul(a, b)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (0..self.size()).map(Element::new)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GreenKind {
    R,
    L,
}

/// The R- or L-classes of a semigroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreenPartition {
    pub kind: GreenKind,
    class_of: Vec<u32>,
    classes: usize,
}

impl GreenPartition {
    #[inline]
    pub fn class_of(&self, s: Element) -> usize {
        self.class_of[s.index()] as usize
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }

    pub fn related(&self, s: Element, t: Element) -> bool {
        self.class_of[s.index()] == self.class_of[t.index()]
    }
}

/// Computes R-classes (strongly connected components of the right Cayley
/// graph) or L-classes (of the left one) with Tarjan's algorithm.
///
/// Class ids are numbered by the least element of each class.
pub fn green_classes(s: &Semigroup, kind: GreenKind) -> GreenPartition {
    let n = s.size();
    let ng = s.generators.len();
    let succ = match kind {
        GreenKind::R => &s.right_cayley,
        GreenKind::L => &s.left_cayley,
    };
    let comp = tarjan_scc(n, |v, k| if k < ng { Some(succ[v * ng + k] as usize) } else { None });

    let mut renumber = vec![u32::MAX; n];
    let mut class_of = vec![0u32; n];
    let mut classes = 0u32;
    for v in 0..n {
        let c = comp[v] as usize;
        if renumber[c] == u32::MAX {
            renumber[c] = classes;
            classes += 1;
        }
        class_of[v] = renumber[c];
    }
    GreenPartition {
        kind,
        class_of,
        classes: classes as usize,
    }
}

/// Iterative Tarjan SCC. `succ(v, k)` yields the `k`-th successor of `v`, or
/// `None` once exhausted. Returns a component id per vertex.
pub(crate) fn tarjan_scc<F>(n: usize, succ: F) -> Vec<u32>
where
    F: Fn(usize, usize) -> Option<usize>,
{
    const UNVISITED: u32 = u32::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNVISITED; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut counter = 0u32;
    let mut components = 0u32;

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut k)) = call.last_mut() {
            if let Some(w) = succ(v, *k) {
                *k += 1;
                if index[w] == UNVISITED {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp[w] = components;
                        if w == v {
                            break;
                        }
                    }
                    components += 1;
                }
            }
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect_band() -> Closure<(u8, u8)> {
        close_generators(&[(1, 2), (2, 1)], |a, b| (a.0, b.1), ClosureOptions::default()).unwrap()
    }

    #[test]
    fn idempotent_singleton() {
        let c = close_generators(&[7u8], |_, _| 7, ClosureOptions::default()).unwrap();
        assert_eq!(c.semigroup.size(), 1);
        assert!(c.semigroup.is_idempotent(Element::new(0)));
        assert_eq!(green_classes(&c.semigroup, GreenKind::R).class_count(), 1);
    }

    #[test]
    fn rectangular_band_has_four_elements() {
        let c = rect_band();
        let s = &c.semigroup;
        assert_eq!(s.size(), 4);
        let mut values = c.elements.clone();
        values.sort();
        assert_eq!(values, vec![(1, 1), (1, 2), (2, 1), (2, 2)]);
        // every element is idempotent
        for e in s.elements() {
            assert!(s.is_idempotent(e));
            assert_eq!(s.idempotent_power(e), e);
        }
    }

    #[test]
    fn rectangular_band_green_classes_are_rows_and_columns() {
        let c = rect_band();
        let s = &c.semigroup;
        let r = green_classes(s, GreenKind::R);
        let l = green_classes(s, GreenKind::L);
        for a in s.elements() {
            for b in s.elements() {
                let (va, vb) = (c.elements[a.index()], c.elements[b.index()]);
                assert_eq!(r.related(a, b), va.0 == vb.0);
                assert_eq!(l.related(a, b), va.1 == vb.1);
            }
        }
    }

    #[test]
    fn cyclic_group_idempotent_power() {
        let c = close_generators(&[1u8], |a, b| (a + b) % 3, ClosureOptions::default()).unwrap();
        let s = &c.semigroup;
        assert_eq!(s.size(), 3);
        let g = c.seeds[0];
        let (e, k) = s.idempotent_power_with_exponent(g);
        assert_eq!(k, 3);
        assert_eq!(c.elements[e.index()], 0);
    }

    #[test]
    fn adjoined_identity_is_always_fresh() {
        let c = rect_band();
        let m = c.semigroup.adjoin_identity();
        assert_eq!(m.size(), 5);
        let one = m.identity();
        for s in c.semigroup.elements() {
            assert_eq!(m.mul(one, s), s);
            assert_eq!(m.mul(s, one), s);
        }
        // the cyclic group already has an identity, a new one is still added
        let g = close_generators(&[1u8], |a, b| (a + b) % 3, ClosureOptions::default()).unwrap();
        assert_eq!(g.semigroup.adjoin_identity().size(), 4);
    }

    #[test]
    fn closure_cap_is_enforced() {
        let opts = ClosureOptions { cap: 5, audit_bound: 0 };
        let err = close_generators(&[1u32], |a, b| (a + b) % 100, opts).unwrap_err();
        assert!(matches!(err, Error::ClosureCapExceeded { cap: 5 }));
    }

    #[test]
    fn non_associative_operation_is_rejected() {
        // a*b = a-b mod 5 is not associative
        let err = close_generators(&[1i32], |a, b| (a - b).rem_euclid(5), ClosureOptions::default()).unwrap_err();
        assert!(matches!(err, Error::NonAssociative { .. }));
    }

    #[test]
    fn from_table_rejects_non_generating_set() {
        let c = rect_band();
        let s = &c.semigroup;
        let err = s.with_generators(vec![Element::new(0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidSemigroup(_)));
    }

    #[test]
    fn closing_a_closed_set_keeps_the_numbering() {
        let c = rect_band();
        let s = &c.semigroup;
        let again = close_generators(
            s.generators(),
            |a: &Element, b: &Element| s.mul(*a, *b),
            ClosureOptions::default(),
        )
        .unwrap();
        assert_eq!(again.semigroup, *s);
        for (i, e) in again.elements.iter().enumerate() {
            assert_eq!(e.index(), i);
        }
    }
}
