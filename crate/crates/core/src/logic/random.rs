//! Random formulas and lasso words for property tests and sweeps.

use rand::seq::SliceRandom;
use rand::Rng;

use super::word::{LassoWord, Letter};
use super::Formula;

/// A random formula of nesting depth at most `depth` over `atoms`.
pub fn formula<R: Rng + ?Sized>(rng: &mut R, atoms: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::atom(atoms.choose(rng).expect("at least one atom")),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..9) {
        0 => Formula::not(formula(rng, atoms, d)),
        1 => Formula::next(formula(rng, atoms, d)),
        2 => Formula::finally(formula(rng, atoms, d)),
        3 => Formula::globally(formula(rng, atoms, d)),
        4 => Formula::and(formula(rng, atoms, d), formula(rng, atoms, d)),
        5 => Formula::or(formula(rng, atoms, d), formula(rng, atoms, d)),
        6 => Formula::implies(formula(rng, atoms, d), formula(rng, atoms, d)),
        _ => Formula::until(formula(rng, atoms, d), formula(rng, atoms, d)),
    }
}

/// Syntax-tree depth (a leaf has depth 0).
pub fn depth(f: &Formula) -> usize {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => 0,
        Formula::Not(g) | Formula::Next(g) | Formula::Finally(g) | Formula::Globally(g) => 1 + depth(g),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Until(a, b) => {
            1 + depth(a).max(depth(b))
        }
    }
}

pub fn lasso<R: Rng + ?Sized>(rng: &mut R, alphabet: &[Letter], max_prefix: usize, max_cycle: usize) -> LassoWord {
    let p = rng.gen_range(0..=max_prefix);
    let c = rng.gen_range(1..=max_cycle.max(1));
    let mut pick = |n| {
        (0..n)
            .map(|_| alphabet.choose(rng).expect("non-empty alphabet").clone())
            .collect()
    };
    let prefix = pick(p);
    let cycle = pick(c);
    LassoWord::new(prefix, cycle)
}

/// Every lasso with `|prefix| <= max_prefix` and `1 <= |cycle| <= max_cycle`.
pub fn all_lassos(alphabet: &[Letter], max_prefix: usize, max_cycle: usize) -> Vec<LassoWord> {
    let words_up_to = |max: usize, min: usize| -> Vec<Vec<Letter>> {
        let mut all = Vec::new();
        let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
        for len in 0..=max {
            if len >= min {
                all.extend(layer.iter().cloned());
            }
            layer = layer
                .iter()
                .flat_map(|w| {
                    alphabet.iter().map(move |l| {
                        let mut v = w.clone();
                        v.push(l.clone());
                        v
                    })
                })
                .collect();
        }
        all
    };
    let prefixes = words_up_to(max_prefix, 0);
    let cycles = words_up_to(max_cycle, 1);
    let mut out = Vec::with_capacity(prefixes.len() * cycles.len());
    for p in &prefixes {
        for c in &cycles {
            out.push(LassoWord::new(p.clone(), c.clone()));
        }
    }
    out
}
