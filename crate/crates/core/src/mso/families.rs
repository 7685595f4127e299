//! The three benchmark families over the set variables `X1, ..., Xk`.

use std::time::{Duration, Instant};

use super::ast::Formula;
use super::compile::Compiler;
use crate::error::Result;
use crate::recognizer::RecognizerStats;

fn set(i: usize) -> String {
    format!("X{i}")
}

/// Free variables `X1, ..., Xk` in canonical order.
pub fn set_vars(k: usize) -> Vec<String> {
    (1..=k).map(set).collect()
}

/// `∀x ⋀ᵢ ∃y (x < y ∧ y ∈ Xᵢ)`: every `Xᵢ` is infinite.
pub fn phi(k: usize) -> Formula {
    Formula::forall(
        "x",
        Formula::and_all((1..=k).map(|i| {
            Formula::exists(
                "y",
                Formula::and(Formula::less("x", "y"), Formula::member("y", &set(i))),
            )
        })),
    )
}

/// `∀x ∀y (y = x + 1 → ⋀ᵢ (x ∈ Xᵢ → y ∈ Xᵢ₊₁))` with `X(k+1) = X1`.
pub fn psi(k: usize) -> Formula {
    let next = |i: usize| set(i % k + 1);
    Formula::forall(
        "x",
        Formula::forall(
            "y",
            Formula::implies(
                Formula::succ("x", "y"),
                Formula::and_all(
                    (1..=k).map(|i| Formula::implies(Formula::member("x", &set(i)), Formula::member("y", &next(i)))),
                ),
            ),
        ),
    )
}

/// How `χ` reads the neighbours `X(i-1)` and `X(i+1)` at the ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Neighbours {
    /// `X0 = Xk` and `X(k+1) = X1`.
    Cyclic,
    /// `X0` and `X(k+1)` are dropped from the disjunction.
    Clamped,
}

/// `∀x ⋀ᵢ (x ∈ Xᵢ → ∃y (x < y ∧ (y ∈ Xᵢ₋₁ ∨ y ∈ Xᵢ₊₁)))`.
pub fn chi(k: usize, reading: Neighbours) -> Formula {
    let neighbours = |i: usize| -> Vec<usize> {
        let (prev, next) = match reading {
            Neighbours::Cyclic => (Some((i + k - 2) % k + 1), Some(i % k + 1)),
            Neighbours::Clamped => ((i > 1).then(|| i - 1), (i < k).then_some(i + 1)),
        };
        prev.into_iter().chain(next).collect()
    };
    Formula::forall(
        "x",
        Formula::and_all((1..=k).map(|i| {
            let later = neighbours(i)
                .into_iter()
                .map(|j| Formula::member("y", &set(j)))
                .reduce(Formula::or)
                .unwrap_or(Formula::False);
            Formula::implies(
                Formula::member("x", &set(i)),
                Formula::exists("y", Formula::and(Formula::less("x", "y"), later)),
            )
        })),
    )
}

/// One row of the benchmark table.
#[derive(Clone, Debug)]
pub struct FamilyRow {
    pub k: usize,
    pub phi: RecognizerStats,
    pub psi: RecognizerStats,
    pub chi: RecognizerStats,
    pub elapsed: [Duration; 3],
}

/// Published values of the table for `k = 2..=6`, as `(|S|, |F|, |P|)`
/// triples for `φ`, `ψ` and `χ`.
pub const PUBLISHED: [[(usize, usize, usize); 3]; 5] = [
    [(4, 5, 1), (12, 15, 10), (7, 14, 11)],
    [(8, 22, 1), (43, 50, 41), (11, 26, 15)],
    [(16, 74, 1), (148, 163, 146), (17, 61, 30)],
    [(32, 232, 1), (539, 570, 537), (41, 227, 85)],
    [(64, 710, 1), (1863, 1926, 1861), (105, 716, 184)],
];

pub fn published(k: usize) -> Option<[(usize, usize, usize); 3]> {
    PUBLISHED.get(k.checked_sub(2)?).copied()
}

/// Compiles the three families for parameter `k`.
pub fn table_row(k: usize) -> Result<FamilyRow> {
    let vars = set_vars(k);
    let mut stats = Vec::new();
    let mut elapsed = [Duration::ZERO; 3];
    for (slot, f) in [phi(k), psi(k), chi(k, Neighbours::Cyclic)].iter().enumerate() {
        let start = Instant::now();
        let c = Compiler::new().compile_declared(f, &vars)?;
        elapsed[slot] = start.elapsed();
        stats.push(c.stats());
    }
    Ok(FamilyRow {
        k,
        phi: stats[0],
        psi: stats[1],
        chi: stats[2],
        elapsed,
    })
}
