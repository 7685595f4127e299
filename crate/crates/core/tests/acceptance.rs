//! Runs every acceptance criterion and prints one PASS or FAIL line for each.
//! The process fails if any criterion fails.

use std::collections::{BTreeSet, HashSet};
use std::panic::{self, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use omega_morph::buchi::{buchi_to_strong, morphism_to_buchi};
use omega_morph::conjugacy::{conjugacy_classes, UnionFind};
use omega_morph::inclusion::{inclusion_test, is_strong};
use omega_morph::langops::{language_inclusion, lift_to_product};
use omega_morph::mso::families::{chi, phi, psi, published, table_row, Neighbours};
use omega_morph::mso::{evaluate, Compiler, Formula};
use omega_morph::recognizer::{is_linked_pair, linked_pairs};
use omega_morph::syntactic::syntactic_morphism;
use omega_morph::{testgen, ClosureOptions, Element, Mode, Morphism, PairSet, Recognizer, Semigroup, UpWord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn check(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn c1_table() -> Outcome {
    let mut diffs = Vec::new();
    for k in 2..=6 {
        let row = table_row(k).map_err(|e| e.to_string())?;
        let want = published(k).expect("published row");
        for (name, got, want) in [
            ("phi", row.phi, want[0]),
            ("psi", row.psi, want[1]),
            ("chi", row.chi, want[2]),
        ] {
            let got = (got.size, got.linked_pairs, got.accepting);
            if got != want {
                diffs.push(format!("{name}{k} {got:?} != {want:?}"));
            }
        }
    }
    if diffs.is_empty() {
        Ok("all 15 triples match".into())
    } else {
        Err(format!("{} of 15 triples differ: {}", diffs.len(), diffs.join(", ")))
    }
}

fn c2_band() -> Outcome {
    for with_c in [false, true] {
        let h = testgen::rectangular_band_morphism(with_c);
        let b = |i, j| testgen::band_element(&h, (i, j));
        let p = PairSet::from_pairs(4, [(b(1, 1), b(1, 1))]);
        let q = PairSet::from_pairs(4, [(b(1, 2), b(2, 2))]);
        let pq = inclusion_test(&h, &p, &q).map_err(|e| e.to_string())?;
        let qp = inclusion_test(&h, &q, &p).map_err(|e| e.to_string())?;
        check(qp.holds, || format!("[Q] ⊆ [P] fails (with c: {with_c})"))?;
        if !with_c {
            check(pq.holds, || "[P] ⊆ [Q] fails without c".into())?;
            continue;
        }
        check(!pq.holds, || "[P] ⊆ [Q] holds with c".into())?;
        let w = pq.witness.expect("witness");
        let c = h.alphabet().index_of("c").unwrap();
        check(w.prefix().iter().chain(w.period()).all(|&a| a == c), || {
            "witness is not c^w".into()
        })?;
    }
    Ok("two-letter inclusions hold both ways; with c the witness is c^w".into())
}

/// Conjugacy by search over `x, y` and transitive closure.
fn brute_conjugacy(s: &Semigroup) -> Vec<BTreeSet<(Element, Element)>> {
    let pairs: Vec<(Element, Element)> = linked_pairs(s).iter().collect();
    let index = |p: (Element, Element)| pairs.iter().position(|&q| q == p);
    let mut uf = UnionFind::new(pairs.len());
    for (i, &(x, e)) in pairs.iter().enumerate() {
        for a in s.elements() {
            for b in s.elements() {
                if s.mul(a, b) == e {
                    if let Some(j) = index((s.mul(x, a), s.mul(b, a))) {
                        uf.union(i, j);
                    }
                }
            }
        }
    }
    let mut classes: std::collections::BTreeMap<usize, BTreeSet<(Element, Element)>> = Default::default();
    for (i, &p) in pairs.iter().enumerate() {
        classes.entry(uf.find(i)).or_default().insert(p);
    }
    classes.into_values().collect()
}

fn same_partition(h: &Morphism) -> bool {
    let mut ours: Vec<BTreeSet<(Element, Element)>> = conjugacy_classes(h)
        .classes()
        .into_iter()
        .map(|c| c.into_iter().collect())
        .collect();
    let mut theirs = brute_conjugacy(h.target());
    ours.sort();
    theirs.sort();
    ours == theirs
}

fn c3_conjugacy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..100 {
        let h = testgen::random_morphism(&mut rng, 2 + i % 2, 32);
        check(same_partition(&h), || {
            format!("random semigroup {i} of size {}", h.target().size())
        })?;
    }
    check(same_partition(&testgen::rectangular_band_morphism(true)), || {
        "band semigroup".into()
    })?;
    Ok("100 random semigroups and the band agree with brute force".into())
}

fn minimal_size(r: &Recognizer) -> Result<usize, String> {
    Ok(syntactic_morphism(r)
        .map_err(|e| e.to_string())?
        .recognizer
        .semigroup()
        .size())
}

fn c4_minimization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..50 {
        let r = testgen::random_recognizer(&mut rng, 2, 20, 0.3, Mode::Strong);
        let m = syntactic_morphism(&r).map_err(|e| e.to_string())?.recognizer;
        let both = language_inclusion(&r, &m).map_err(|e| e.to_string())?.holds
            && language_inclusion(&m, &r).map_err(|e| e.to_string())?.holds;
        check(both, || format!("instance {i}: language changed"))?;
        let again = syntactic_morphism(&m).map_err(|e| e.to_string())?.recognizer;
        check(
            again.semigroup().size() == m.semigroup().size() && again.stats() == m.stats(),
            || format!("instance {i}: not idempotent"),
        )?;
        check(m.semigroup().size() <= r.semigroup().size(), || {
            format!("instance {i}: grew")
        })?;
        let round = buchi_to_strong(&morphism_to_buchi(&r), ClosureOptions::unaudited()).map_err(|e| e.to_string())?;
        check(minimal_size(&round)? == m.semigroup().size(), || {
            format!("instance {i}: round trip size differs")
        })?;
    }
    Ok("50 random recognizers".into())
}

/// Images `(h1(w), h2(w))` of all words of length `1..=max_len`.
fn word_images(h: &Morphism, max_len: usize) -> Vec<(Element, Vec<usize>)> {
    let s = h.target();
    let mut seen: HashSet<Element> = HashSet::new();
    let mut out = Vec::new();
    let mut layer: Vec<(Element, Vec<usize>)> = Vec::new();
    for a in 0..h.alphabet().len() {
        let x = h.image(a);
        if seen.insert(x) {
            layer.push((x, vec![a]));
        }
    }
    for _ in 1..max_len {
        let mut next = Vec::new();
        for (x, w) in &layer {
            for a in 0..h.alphabet().len() {
                let y = s.mul(*x, h.image(a));
                if seen.insert(y) {
                    let mut w = w.clone();
                    w.push(a);
                    next.push((y, w));
                }
            }
        }
        out.append(&mut layer);
        layer = next;
    }
    out.append(&mut layer);
    out
}

/// Some ultimately periodic word in `L(r1) \ L(r2)`, by enumerating prefix
/// and period images over the product morphism.
fn membership_oracle(r1: &Recognizer, r2: &Recognizer) -> Option<UpWord> {
    let (h, _, _) = lift_to_product(r1, r2).expect("strong recognizers");
    let n = r1.semigroup().size().max(r2.semigroup().size());
    let prefixes = word_images(&h, n + 1);
    let periods = word_images(&h, 2 * n);
    let mut prefix_words: Vec<Vec<usize>> = vec![vec![]];
    prefix_words.extend(prefixes.into_iter().map(|p| p.1));
    for u in &prefix_words {
        for (_, v) in &periods {
            let w = UpWord::new(u.clone(), v.clone()).unwrap();
            if r1.member(&w).unwrap() && !r2.member(&w).unwrap() {
                return Some(w);
            }
        }
    }
    None
}

fn c5_inclusion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pool: Vec<Recognizer> = (0..20)
        .map(|_| testgen::random_recognizer(&mut rng, 2, 8, 0.35, Mode::Strong))
        .collect();
    let mut disagreements = 0;
    let mut failing = 0;
    for r1 in &pool {
        for r2 in &pool {
            let res = language_inclusion(r1, r2).map_err(|e| e.to_string())?;
            let oracle = membership_oracle(r1, r2);
            if res.holds != oracle.is_none() {
                disagreements += 1;
            }
            if let Some(w) = res.witness {
                failing += 1;
                check(r1.member(&w).unwrap() && !r2.member(&w).unwrap(), || {
                    "witness does not separate".into()
                })?;
            }
        }
    }
    check(disagreements == 0, || format!("{disagreements} of 400 pairs disagree"))?;
    Ok(format!("400 pairs agree ({failing} non-inclusions)"))
}

fn c6_buchi() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..50 {
        let states = rng.gen_range(1..=4);
        let b = testgen::random_buchi(&mut rng, states, 2, 0.35);
        let r = buchi_to_strong(&b, ClosureOptions::default()).map_err(|e| e.to_string())?;
        check(is_strong(r.morphism(), r.accepting()).unwrap(), || {
            format!("automaton {i}: not strong")
        })?;
        for _ in 0..100 {
            let w = testgen::random_upword(&mut rng, 2, 6, 6);
            check(b.accepts_lasso(&w) == r.member(&w).unwrap(), || {
                format!("automaton {i}: membership differs")
            })?;
        }
    }
    Ok("50 automata, 100 words each".into())
}

fn log2(n: usize) -> f64 {
    (n.max(1) as f64).log2()
}

fn accounting_holds(r: &Recognizer) -> Result<(), String> {
    let h = r.morphism();
    let (n, gens) = (h.target().size(), h.target().generators().len());
    let part = conjugacy_classes(h);
    let f = part.linked_pairs().len();
    check(part.unions < f.max(1), || {
        format!("{} unions for {f} linked pairs", part.unions)
    })?;
    check(part.finds <= 2 * gens * f.saturating_sub(1), || {
        format!("{} finds for {f} linked pairs", part.finds)
    })?;
    let all = linked_pairs(h.target());
    let res = inclusion_test(h, &all, r.accepting()).map_err(|e| e.to_string())?;
    check(res.visited <= (n + 1).pow(3), || {
        format!("{} triples for |S| = {n}", res.visited)
    })?;
    if r.mode() == Mode::Strong {
        let q = syntactic_morphism(r).map_err(|e| e.to_string())?;
        let bound = 2.0 * gens as f64 * n as f64 * log2(n);
        check(q.split_work as f64 <= bound + 1e-9, || {
            format!("split work {} above {bound}", q.split_work)
        })?;
    }
    Ok(())
}

fn c7_accounting() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let mode = if rng.gen_bool(0.5) { Mode::Strong } else { Mode::Weak };
        accounting_holds(&testgen::random_recognizer(&mut rng, 2, 24, 0.3, mode))?;
    }
    let fx = testgen::adversarial_fixture(4).map_err(|e| e.to_string())?;
    check(fx.t.elements.len() == 260 && fx.t.d.len() == 8, || {
        format!("|T| = {}, |D| = {}", fx.t.elements.len(), fx.t.d.len())
    })?;
    check(
        fx.family
            .iter()
            .all(|(s, e)| is_linked_pair(fx.morphism.target(), s, e)),
        || "family not linked".into(),
    )?;
    let part = conjugacy_classes(&fx.morphism);
    let classes: HashSet<usize> = fx.family.iter().map(|(s, e)| part.class_of(s, e).unwrap()).collect();
    check(classes.len() == fx.family.len(), || {
        "family members are conjugate".into()
    })?;
    let r = Recognizer::new(Arc::clone(&fx.morphism), fx.family.clone(), Mode::Weak).map_err(|e| e.to_string())?;
    accounting_holds(&r)?;
    Ok(format!(
        "40 random instances and the n = 4 fixture (|T| = 260, |D| = 8, |S| = {})",
        fx.morphism.target().size()
    ))
}

fn random_formula(rng: &mut ChaCha8Rng, depth: usize, bound: &mut Vec<&'static str>) -> Formula {
    const FIRST: [&str; 3] = ["x", "y", "z"];
    const SETS: [&str; 2] = ["X1", "X2"];
    let pos = |rng: &mut ChaCha8Rng, bound: &Vec<&'static str>| {
        if bound.is_empty() || rng.gen_bool(0.15) {
            FIRST[rng.gen_range(0..3)]
        } else {
            bound[rng.gen_range(0..bound.len())]
        }
    };
    let choice = if depth == 0 {
        rng.gen_range(0..3)
    } else {
        rng.gen_range(0..7)
    };
    match choice {
        0 => Formula::less(pos(rng, bound), pos(rng, bound)),
        1 => Formula::succ(pos(rng, bound), pos(rng, bound)),
        2 => Formula::member(pos(rng, bound), SETS[rng.gen_range(0..2)]),
        3 => Formula::not(random_formula(rng, depth - 1, bound)),
        4 => Formula::and(
            random_formula(rng, depth - 1, bound),
            random_formula(rng, depth - 1, bound),
        ),
        5 => Formula::or(
            random_formula(rng, depth - 1, bound),
            random_formula(rng, depth - 1, bound),
        ),
        _ => {
            let v = FIRST[rng.gen_range(0..3)];
            bound.push(v);
            let body = random_formula(rng, depth - 1, bound);
            bound.pop();
            if rng.gen_bool(0.5) {
                Formula::exists(v, body)
            } else {
                Formula::forall(v, body)
            }
        }
    }
}

fn c8_mso() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut formulas = vec![phi(1), psi(1), chi(1, Neighbours::Cyclic)];
    while formulas.len() < 13 {
        let f = random_formula(&mut rng, 4, &mut Vec::new());
        if f.quantifier_depth() >= 1 && f.quantifier_depth() <= 3 {
            formulas.push(f);
        }
    }
    let compiler = Compiler::new();
    for f in &formulas {
        let vars: Vec<String> = f.free_vars().into_iter().collect();
        let c = compiler.compile_declared(f, &vars).map_err(|e| e.to_string())?;
        let letters = c.vars.alphabet().len();
        for _ in 0..200 {
            let w = testgen::random_upword(&mut rng, letters, 5, 5);
            let want = evaluate(f, &c.vars, &w).map_err(|e| e.to_string())?;
            check(c.recognizer.member(&w).unwrap() == want, || {
                format!("{f} on {}", w.display(c.vars.alphabet()))
            })?;
        }
    }
    Ok("13 formulas, 200 words each".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        (
            "1 table of the three formula families",
            c1_table,
            Duration::from_secs(60),
        ),
        ("2 band inclusion counterexample", c2_band, Duration::from_secs(1)),
        ("3 conjugacy against brute force", c3_conjugacy, Duration::from_secs(30)),
        ("4 minimization properties", c4_minimization, Duration::from_secs(60)),
        ("5 inclusion against membership", c5_inclusion, Duration::from_secs(120)),
        ("6 automaton conversion", c6_buchi, Duration::from_secs(60)),
        ("7 complexity accounting", c7_accounting, Duration::MAX),
        ("8 formula semantics", c8_mso, Duration::from_secs(120)),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > limit => Err(format!("took {elapsed:.1?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({elapsed:.2?}): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name} ({elapsed:.2?}): {detail}");
            }
        }
    }
    println!("{failed} of 8 criteria failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
