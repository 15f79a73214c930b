//! Oracles and generators shared by the unit-test modules. Everything here
//! is deliberately written against the definitions rather than reusing the
//! production algorithms, so the two can disagree loudly.

use rand::Rng;

use crate::automata::{Lasso, Nba};
use crate::traces::TraceAlphabet;

/// Acceptance decided without SCC machinery: walk the reachable part of the
/// automaton × position product by plain DFS, then probe each reachable
/// accepting pair over loop positions for a nontrivial path back to itself.
pub(crate) fn naive_accepts(nba: &Nba, w: &Lasso) -> bool {
    let s = w.stem().len();
    let l = w.cycle().len();
    let step = |q: usize, pos: usize| -> Vec<(usize, usize)> {
        let next = if pos + 1 < s + l { pos + 1 } else { s };
        nba.successors(q, w.letter_at(pos))
            .map(|t| (t, next))
            .collect()
    };
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![(nba.initial(), 0usize)];
    while let Some(pair) = stack.pop() {
        if seen.insert(pair) {
            stack.extend(step(pair.0, pair.1));
        }
    }
    for &(q, pos) in &seen {
        if pos < s || !nba.is_accepting(q) {
            continue;
        }
        let mut visited = std::collections::HashSet::new();
        let mut stack = step(q, pos);
        while let Some(pair) = stack.pop() {
            if pair == (q, pos) {
                return true;
            }
            if visited.insert(pair) {
                stack.extend(step(pair.0, pair.1));
            }
        }
    }
    false
}

/// Every (stem, loop) pair over `alphabet` within the given bounds, with no
/// canonicity filtering.
pub(crate) fn enumerate_raw(alphabet: &[char], max_stem: usize, max_loop: usize) -> Vec<Lasso> {
    let words = |len: usize| -> Vec<Vec<char>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    alphabet.iter().map(move |&c| {
                        let mut w2 = w.clone();
                        w2.push(c);
                        w2
                    })
                })
                .collect();
        }
        out
    };
    let mut all = Vec::new();
    for s in 0..=max_stem {
        for l in 1..=max_loop {
            for stem in words(s) {
                for cycle in words(l) {
                    all.push(Lasso::new(stem.clone(), cycle).unwrap());
                }
            }
        }
    }
    all
}

/// Rewrites a lasso without leaving its trace class: rotates loop letters
/// into the stem (word-preserving) and swaps adjacent independent letters
/// in stem and loop.
pub(crate) fn equivalent_variant(
    rng: &mut impl Rng,
    sigma: &TraceAlphabet,
    w: &Lasso,
) -> Lasso {
    let mut stem = w.stem().to_vec();
    let mut cycle = w.cycle().to_vec();
    let shift = rng.gen_range(0..=cycle.len());
    stem.extend_from_slice(&cycle[..shift]);
    let rot = shift % cycle.len();
    cycle.rotate_left(rot);
    for _ in 0..4 {
        if stem.len() >= 2 {
            let p = rng.gen_range(0..stem.len() - 1);
            if !sigma.dependent(stem[p], stem[p + 1]) {
                stem.swap(p, p + 1);
            }
        }
        if cycle.len() >= 2 {
            let p = rng.gen_range(0..cycle.len() - 1);
            if !sigma.dependent(cycle[p], cycle[p + 1]) {
                cycle.swap(p, p + 1);
            }
        }
    }
    Lasso::new(stem, cycle).unwrap()
}
