//! Conjugacy classes of linked pairs.
//!
//! Two linked pairs `(s, e)` and `(t, f)` are conjugate when `s x = t`,
//! `x y = e` and `y x = f` for some `x, y`. Conjugacy is the finest
//! left-stable equivalence coarser than `(s, e) ~ (t, f)` whenever
//! `e L s R t L f`; the classes are computed by starting from that relation
//! and propagating merges through left multiplication by generators,
//! Hopcroft–Karp style, on a disjoint-set forest.

use crate::error::{Error, Result};
use crate::recognizer::{linked_pairs, Morphism, PairSet};
use crate::semigroup::{green_classes, Element, GreenKind, Semigroup};

/// Disjoint-set forest with union by rank and path compression. Counts the
/// `find` and `union` calls issued by its users.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
    finds: usize,
    unions: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
            finds: 0,
            unions: 0,
        }
    }

    fn root(&mut self, mut x: usize) -> usize {
        let mut r = x;
        while self.parent[r] as usize != r {
            r = self.parent[r] as usize;
        }
        while self.parent[x] as usize != r {
            let next = self.parent[x] as usize;
            self.parent[x] = r as u32;
            x = next;
        }
        r
    }

    pub fn find(&mut self, x: usize) -> usize {
        self.finds += 1;
        self.root(x)
    }

    /// Merges the classes of `a` and `b`; returns false if already merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        self.unions += 1;
        let (ra, rb) = (self.root(a), self.root(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb as u32,
            std::cmp::Ordering::Greater => self.parent[rb] = ra as u32,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra as u32;
                self.rank[ra] += 1;
            }
        }
        true
    }

    /// Merges all classes of `members`, using `members.len() - 1` unions.
    pub fn union_all(&mut self, members: &[usize]) {
        for w in members.windows(2) {
            self.union(w[0], w[1]);
        }
    }

    pub fn finds(&self) -> usize {
        self.finds
    }

    pub fn unions(&self) -> usize {
        self.unions
    }
}

/// Dense numbering of the linked pairs of a semigroup.
#[derive(Clone, Debug)]
pub struct LinkedPairIndex {
    pairs: Vec<(Element, Element)>,
    idempotent_slot: Vec<u32>,
    idempotents: usize,
    index: Vec<u32>,
}

impl LinkedPairIndex {
    pub fn new(s: &Semigroup) -> Self {
        LinkedPairIndex::from_set(s, &linked_pairs(s))
    }

    fn from_set(s: &Semigroup, f: &PairSet) -> Self {
        let n = s.size();
        let mut idempotent_slot = vec![u32::MAX; n];
        let mut k = 0u32;
        for e in s.idempotents() {
            idempotent_slot[e.index()] = k;
            k += 1;
        }
        let idempotents = k as usize;
        let mut index = vec![u32::MAX; n * idempotents];
        let mut pairs = Vec::with_capacity(f.len());
        for (x, e) in f.iter() {
            index[x.index() * idempotents + idempotent_slot[e.index()] as usize] = pairs.len() as u32;
            pairs.push((x, e));
        }
        LinkedPairIndex {
            pairs,
            idempotent_slot,
            idempotents,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pair(&self, i: usize) -> (Element, Element) {
        self.pairs[i]
    }

    pub fn pairs(&self) -> &[(Element, Element)] {
        &self.pairs
    }

    pub fn get(&self, s: Element, e: Element) -> Option<usize> {
        let slot = *self.idempotent_slot.get(e.index())?;
        if slot == u32::MAX {
            return None;
        }
        match self.index[s.index() * self.idempotents + slot as usize] {
            u32::MAX => None,
            i => Some(i as usize),
        }
    }
}

/// Partition of the linked pairs of `h`'s target into conjugacy classes.
#[derive(Clone, Debug)]
pub struct ConjugacyPartition {
    index: LinkedPairIndex,
    class_of: Vec<u32>,
    classes: usize,
    pub unions: usize,
    pub finds: usize,
}

impl ConjugacyPartition {
    pub fn linked_pairs(&self) -> &LinkedPairIndex {
        &self.index
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }

    pub fn class_of(&self, s: Element, e: Element) -> Option<usize> {
        self.index.get(s, e).map(|i| self.class_of[i] as usize)
    }

    pub fn class_of_index(&self, i: usize) -> usize {
        self.class_of[i] as usize
    }

    /// Classes as lists of pairs, ordered by their first member.
    pub fn classes(&self) -> Vec<Vec<(Element, Element)>> {
        let mut out = vec![Vec::new(); self.classes];
        for (i, &c) in self.class_of.iter().enumerate() {
            out[c as usize].push(self.index.pair(i));
        }
        out
    }
}

/// The classes of the relation `(s,e) ~ (t,f)` iff `e L s R t L f` (or the
/// pairs are equal), as lists of indices into `index`.
pub fn approx_classes(s: &Semigroup, index: &LinkedPairIndex) -> Vec<Vec<usize>> {
    let r = green_classes(s, GreenKind::R);
    let l = green_classes(s, GreenKind::L);
    let mut by_r: Vec<Vec<usize>> = vec![Vec::new(); r.class_count()];
    let mut out = Vec::new();
    for (i, &(x, e)) in index.pairs().iter().enumerate() {
        if l.related(x, e) {
            by_r[r.class_of(x)].push(i);
        } else {
            out.push(vec![i]);
        }
    }
    out.extend(by_r.into_iter().filter(|c| !c.is_empty()));
    out
}

/// Computes the conjugacy classes of the linked pairs of `h`'s target.
pub fn conjugacy_classes(h: &Morphism) -> ConjugacyPartition {
    let s = h.target();
    let index = LinkedPairIndex::new(s);
    let mut uf = UnionFind::new(index.len());

    let mut worklist: Vec<Vec<usize>> = approx_classes(s, &index).into_iter().filter(|c| c.len() > 1).collect();
    for class in &worklist {
        uf.union_all(class);
    }
    let generators = s.generators().len();
    let mut reps: Vec<usize> = Vec::new();
    while let Some(set) = worklist.pop() {
        for gen in 0..generators {
            reps.clear();
            for &i in &set {
                let (x, e) = index.pair(i);
                let y = s.left(x, gen);
                let j = index.get(y, e).expect("left multiple of a linked pair is linked");
                reps.push(uf.find(j));
            }
            reps.sort_unstable();
            reps.dedup();
            if reps.len() > 1 {
                uf.union_all(&reps);
                worklist.push(reps.clone());
            }
        }
    }

    let (unions, finds) = (uf.unions(), uf.finds());
    let mut renumber = vec![u32::MAX; index.len()];
    let mut class_of = vec![0u32; index.len()];
    let mut classes = 0u32;
    for (i, slot) in class_of.iter_mut().enumerate() {
        let root = uf.root(i);
        if renumber[root] == u32::MAX {
            renumber[root] = classes;
            classes += 1;
        }
        *slot = renumber[root];
    }
    ConjugacyPartition {
        index,
        class_of,
        classes: classes as usize,
        unions,
        finds,
    }
}

/// The union of all conjugacy classes meeting `p`.
pub fn close_under_conjugation(h: &Morphism, p: &PairSet) -> Result<PairSet> {
    let s = h.target();
    for (x, e) in p.iter() {
        if !crate::recognizer::is_linked_pair(s, x, e) {
            return Err(Error::NotLinkedPair {
                s: x.index(),
                e: e.index(),
            });
        }
    }
    if p.is_empty() {
        return Ok(p.clone());
    }
    let partition = conjugacy_classes(h);
    Ok(close_with(&partition, p))
}

pub(crate) fn close_with(partition: &ConjugacyPartition, p: &PairSet) -> PairSet {
    let mut hit = vec![false; partition.class_count()];
    for (x, e) in p.iter() {
        hit[partition.class_of(x, e).expect("linked pair")] = true;
    }
    let mut out = PairSet::new(p.universe());
    for (i, &(x, e)) in partition.linked_pairs().pairs().iter().enumerate() {
        if hit[partition.class_of_index(i)] {
            out.insert(x, e);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testgen;

    #[test]
    fn union_find_counts_operations() {
        let mut uf = UnionFind::new(5);
        uf.union_all(&[0, 1, 2]);
        assert_eq!(uf.unions(), 2);
        assert_eq!(uf.find(2), uf.find(0));
        assert_eq!(uf.finds(), 2);
        assert_ne!(uf.find(3), uf.find(0));
    }

    #[test]
    fn singleton_semigroup_has_one_class() {
        let c = crate::semigroup::close_generators(&[0u8], |_, _| 0, Default::default()).unwrap();
        let h = Morphism::new(
            crate::recognizer::Alphabet::from_chars("a").unwrap(),
            c.semigroup,
            vec![Element::new(0)],
        )
        .unwrap();
        let p = conjugacy_classes(&h);
        assert_eq!(p.class_count(), 1);
        assert_eq!(p.classes(), vec![vec![(Element::new(0), Element::new(0))]]);
    }

    #[test]
    fn band_pairs_sharing_a_column_are_conjugate() {
        let h = testgen::rectangular_band_morphism(false);
        let b = |i, j| testgen::band_element(&h, (i, j));
        let part = conjugacy_classes(&h);
        assert_eq!(part.class_of(b(1, 1), b(1, 1)), part.class_of(b(1, 2), b(2, 2)));
        let p = PairSet::from_pairs(4, [(b(1, 1), b(1, 1))]);
        let closed = close_under_conjugation(&h, &p).unwrap();
        assert!(closed.contains(b(1, 2), b(2, 2)));
        assert!(p.is_subset(&closed));
        assert_eq!(close_under_conjugation(&h, &closed).unwrap(), closed);
    }

    #[test]
    fn trivially_related_idempotents_stay_apart() {
        // A chain semilattice: no two distinct elements are R-related.
        let c = crate::semigroup::close_generators(&[2u8, 1, 0], |a, b| *a.min(b), Default::default()).unwrap();
        let h = Morphism::new(
            crate::recognizer::Alphabet::from_chars("abc").unwrap(),
            c.semigroup,
            c.seeds.clone(),
        )
        .unwrap();
        let index = LinkedPairIndex::new(h.target());
        let approx = approx_classes(h.target(), &index);
        assert!(approx.iter().all(|c| c.len() == 1));
        assert_eq!(conjugacy_classes(&h).class_count(), index.len());
    }

    #[test]
    fn closing_the_empty_set_is_empty() {
        let h = testgen::rectangular_band_morphism(false);
        assert!(close_under_conjugation(&h, &PairSet::new(4)).unwrap().is_empty());
    }

    #[test]
    fn closing_a_non_linked_pair_fails() {
        let h = testgen::rectangular_band_morphism(false);
        let b = |i, j| testgen::band_element(&h, (i, j));
        let p = PairSet::from_pairs(4, [(b(1, 1), b(2, 2))]);
        assert!(matches!(
            close_under_conjugation(&h, &p),
            Err(Error::NotLinkedPair { .. })
        ));
    }
}
