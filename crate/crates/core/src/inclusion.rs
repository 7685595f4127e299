//! Inclusion `[P] ⊆ [Q]` between sets of linked pairs over one morphism,
//! and the tests derived from it.

use std::collections::HashMap;

use crate::conjugacy::close_under_conjugation;
use crate::error::{Error, Result};
use crate::recognizer::{is_linked_pair, linked_pairs, Letter, Morphism, PairSet, Recognizer, UpWord};
use crate::semigroup::Element;

/// For each generator `g` and `x` in `S¹`, the set `x g⁻¹ = {p in S¹ : p g = x}`.
#[derive(Clone, Debug)]
pub struct RightDivisorIndex {
    n: usize,
    /// `start[g * (n + 2) + x] .. start[g * (n + 2) + x + 1]` indexes `items`.
    start: Vec<u32>,
    items: Vec<u32>,
}

impl RightDivisorIndex {
    pub fn new(h: &Morphism) -> Self {
        let s = h.target();
        let n = s.size();
        let gens = s.generators().len();
        let stride = n + 2;
        let mut start = vec![0u32; gens * stride];
        let mut items = vec![0u32; gens * (n + 1)];
        for (gi, &g) in s.generators().iter().enumerate() {
            let base = gi * stride;
            let mut count = vec![0u32; n + 1];
            // p = 1 contributes to the bucket of g itself.
            count[g.index()] += 1;
            for p in s.elements() {
                count[s.right(p, gi).index()] += 1;
            }
            let mut acc = (gi * (n + 1)) as u32;
            for x in 0..=n {
                start[base + x] = acc;
                acc += count[x];
            }
            start[base + n + 1] = acc;
            let mut fill: Vec<u32> = start[base..base + n + 1].to_vec();
            for p in s.elements() {
                let x = s.right(p, gi).index();
                items[fill[x] as usize] = p.index() as u32;
                fill[x] += 1;
            }
            items[fill[g.index()] as usize] = n as u32;
        }
        RightDivisorIndex { n, start, items }
    }

    /// Elements `p` of `S¹` (the identity is `|S|`) with `p g = x`.
    pub fn divisors(&self, gen: usize, x: usize) -> &[u32] {
        let i = gen * (self.n + 2) + x;
        &self.items[self.start[i] as usize..self.start[i + 1] as usize]
    }
}

/// Verdict of an inclusion test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InclusionResult {
    pub holds: bool,
    /// A word in `[P] \ [Q]` when the inclusion fails.
    pub witness: Option<UpWord>,
    /// Number of distinct triples `(s, x, y)` visited.
    pub visited: usize,
}

/// Decides `[P] ⊆ [Q]` with respect to the generators `h(A)`.
pub fn inclusion_test(h: &Morphism, p: &PairSet, q: &PairSet) -> Result<InclusionResult> {
    inclusion_test_with(&RightDivisorIndex::new(h), h, p, q)
}

fn pack(s: usize, x: usize, y: usize, m: usize) -> u64 {
    ((s * m + x) * m + y) as u64
}

pub fn inclusion_test_with(
    index: &RightDivisorIndex,
    h: &Morphism,
    p: &PairSet,
    q: &PairSet,
) -> Result<InclusionResult> {
    let s = h.target();
    let n = s.size();
    for set in [p, q] {
        if set.universe() != n {
            return Err(Error::InvalidSemigroup("pair set over a different semigroup".into()));
        }
        if let Some((x, e)) = set.iter().find(|&(x, e)| !is_linked_pair(s, x, e)) {
            return Err(Error::NotLinkedPair {
                s: x.index(),
                e: e.index(),
            });
        }
    }
    let one = n;
    let m = n + 1;
    let mul1 = |a: usize, b: usize| -> usize {
        if a == one {
            b
        } else if b == one {
            a
        } else {
            s.mul(Element::new(a), Element::new(b)).index()
        }
    };

    // Triple -> (predecessor y, generator), or (u32::MAX, _) for initial ones.
    let mut parent: HashMap<u64, (u32, u32)> = HashMap::new();
    let mut stack: Vec<(u32, u32, u32)> = Vec::new();
    for (x, e) in p.iter() {
        parent.insert(pack(x.index(), e.index(), one, m), (u32::MAX, 0));
        stack.push((x.index() as u32, e.index() as u32, one as u32));
    }
    while let Some((st, xt, yt)) = stack.pop() {
        let (st, xt, yt) = (st as usize, xt as usize, yt as usize);
        if xt == one {
            let witness = witness(h, &parent, st, yt, m);
            return Ok(InclusionResult {
                holds: false,
                witness: Some(witness),
                visited: parent.len(),
            });
        }
        let sx = mul1(st, xt);
        let yx = mul1(yt, xt);
        let yxyx = mul1(yx, yx);
        if yxyx != one && q.contains(Element::new(sx), Element::new(yxyx)) {
            continue;
        }
        for (gi, &g) in s.generators().iter().enumerate() {
            let ay = mul1(g.index(), yt);
            for &pd in index.divisors(gi, xt) {
                let key = pack(st, pd as usize, ay, m);
                if let std::collections::hash_map::Entry::Vacant(v) = parent.entry(key) {
                    v.insert((yt as u32, gi as u32));
                    stack.push((st as u32, pd, ay as u32));
                }
            }
        }
    }
    Ok(InclusionResult {
        holds: true,
        witness: None,
        visited: parent.len(),
    })
}

/// `u v^w` with `u` a representative of `s` and `v = w[s, 1, y]`, unfolded
/// along the parent pointers `w[s, p, g y] = a w[s, p g, y]`.
fn witness(h: &Morphism, parent: &HashMap<u64, (u32, u32)>, s: usize, y: usize, m: usize) -> UpWord {
    let target = h.target();
    let n = target.size();
    let (mut x, mut y) = (n, y);
    let mut period: Vec<Letter> = Vec::new();
    loop {
        let &(prev_y, gi) = parent.get(&pack(s, x, y, m)).expect("visited triple");
        if prev_y == u32::MAX {
            break;
        }
        let g = target.generators()[gi as usize];
        period.push(h.letter_of_generator(gi as usize));
        x = if x == n {
            g.index()
        } else {
            target.mul(Element::new(x), g).index()
        };
        y = prev_y as usize;
    }
    UpWord::new(h.representative(Element::new(s)), period).expect("witness period is non-empty")
}

/// Whether `h` strongly recognizes `[P]`: the closure of `P` under
/// conjugation must describe the same language.
pub fn is_strong(h: &Morphism, p: &PairSet) -> Result<bool> {
    let closed = close_under_conjugation(h, p)?;
    if closed == *p {
        return Ok(true);
    }
    Ok(inclusion_test(h, &closed, p)?.holds)
}

/// Language equality of two recognizers over the same morphism.
pub fn equivalent(r1: &Recognizer, r2: &Recognizer) -> Result<bool> {
    if r1.morphism() != r2.morphism() {
        return Err(Error::MorphismMismatch);
    }
    let index = RightDivisorIndex::new(r1.morphism());
    Ok(
        inclusion_test_with(&index, r1.morphism(), r1.accepting(), r2.accepting())?.holds
            && inclusion_test_with(&index, r1.morphism(), r2.accepting(), r1.accepting())?.holds,
    )
}

/// Whether `[P] = A^w`, as the inclusion of all linked pairs in `P`.
pub fn universal(r: &Recognizer) -> Result<InclusionResult> {
    let all = linked_pairs(r.semigroup());
    inclusion_test(r.morphism(), &all, r.accepting())
}
