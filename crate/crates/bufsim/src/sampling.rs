//! Seeded random generators for automata, trace alphabets, capacity
//! vectors, lassos, and parity games. Shared by the test suite and the
//! `random-check` CLI command so reported seeds reproduce exactly.

use rand::Rng;

use crate::automata::{Lasso, Nba};
use crate::gamegraph::{Capacity, CapacityVector, Owner};
use crate::solver::ExplicitGame;
use crate::traces::TraceAlphabet;

/// Size knobs for random instances.
#[derive(Debug, Clone)]
pub struct SampleConfig {
    pub max_states: usize,
    /// Letter pool; each automaton draws a nonempty prefix of it.
    pub alphabet: Vec<char>,
    pub max_components: usize,
    pub max_capacity: u32,
    pub accepting_prob: f64,
}

impl SampleConfig {
    /// Small enough for oracle cross-checks to stay fast.
    pub fn small() -> Self {
        SampleConfig {
            max_states: 5,
            alphabet: vec!['a', 'b', 'c'],
            max_components: 2,
            max_capacity: 1,
            accepting_prob: 0.4,
        }
    }

    /// Even smaller; used where whole arenas are enumerated or many
    /// instances are solved in one test.
    pub fn tiny() -> Self {
        SampleConfig {
            max_states: 4,
            alphabet: vec!['a', 'b', 'c'],
            max_components: 2,
            max_capacity: 1,
            accepting_prob: 0.4,
        }
    }
}

/// A random automaton over a nonempty prefix of the configured letter pool.
pub fn random_nba(rng: &mut impl Rng, cfg: &SampleConfig) -> Nba {
    let letters = &cfg.alphabet[..rng.gen_range(1..=cfg.alphabet.len())];
    let n = rng.gen_range(1..=cfg.max_states);
    let states: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let mut transitions = Vec::new();
    for q in 0..n {
        for &a in letters {
            let fanout = match rng.gen_range(0..10) {
                0..=2 => 0,
                3..=7 => 1,
                _ => 2,
            };
            for _ in 0..fanout {
                transitions.push((q, a, rng.gen_range(0..n)));
            }
        }
    }
    let accepting: Vec<usize> = (0..n)
        .filter(|_| rng.gen_bool(cfg.accepting_prob))
        .collect();
    let state_refs: Vec<&str> = states.iter().map(|s| s.as_str()).collect();
    let transition_refs: Vec<(&str, char, &str)> = transitions
        .iter()
        .map(|&(s, a, t)| (state_refs[s], a, state_refs[t]))
        .collect();
    let accepting_refs: Vec<&str> = accepting.iter().map(|&q| state_refs[q]).collect();
    Nba::new(
        "rnd",
        state_refs.clone(),
        letters.to_vec(),
        state_refs[0],
        &transition_refs,
        &accepting_refs,
    )
    .unwrap()
}

pub fn random_word(rng: &mut impl Rng, alphabet: &[char], max_len: usize) -> Vec<char> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
        .collect()
}

pub fn random_lasso(
    rng: &mut impl Rng,
    alphabet: &[char],
    max_stem: usize,
    max_loop: usize,
) -> Lasso {
    let stem = random_word(rng, alphabet, max_stem);
    let cycle_len = rng.gen_range(1..=max_loop);
    let cycle = (0..cycle_len)
        .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
        .collect();
    Lasso::new(stem, cycle).unwrap()
}

/// A random distributed alphabet over exactly the given letters: every
/// letter lands in at least one of the `1..=max_k` components.
pub fn random_sigma(rng: &mut impl Rng, alphabet: &[char], max_k: usize) -> TraceAlphabet {
    let k = rng.gen_range(1..=max_k);
    let mut components = vec![Vec::new(); k];
    for &a in alphabet {
        let mut hit = false;
        for comp in components.iter_mut() {
            if rng.gen_bool(0.5) {
                comp.push(a);
                hit = true;
            }
        }
        if !hit {
            components[rng.gen_range(0..k)].push(a);
        }
    }
    TraceAlphabet::new(components).unwrap()
}

pub fn random_capacity(rng: &mut impl Rng, k: usize, max_entry: u32) -> CapacityVector {
    CapacityVector::new(
        (0..k)
            .map(|_| Capacity::Finite(rng.gen_range(0..=max_entry)))
            .collect(),
    )
}

/// A full simulation instance: two automata over a common trace alphabet
/// plus a finite capacity vector.
pub fn random_instance(
    rng: &mut impl Rng,
    cfg: &SampleConfig,
) -> (Nba, Nba, TraceAlphabet, CapacityVector) {
    let letters = cfg.alphabet[..rng.gen_range(1..=cfg.alphabet.len())].to_vec();
    let sigma = random_sigma(rng, &letters, cfg.max_components);
    let shared = SampleConfig {
        alphabet: letters,
        ..cfg.clone()
    };
    let a = random_nba(rng, &shared);
    let b = random_nba(rng, &shared);
    let kappa = random_capacity(rng, sigma.k(), cfg.max_capacity);
    (a, b, sigma, kappa)
}

/// A random parity game with priorities 0..=2 and a sprinkling of dead ends.
pub fn random_game(rng: &mut impl Rng, max_vertices: usize) -> ExplicitGame {
    let n = rng.gen_range(1..=max_vertices);
    let owners: Vec<Owner> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.5) {
                Owner::Spoiler
            } else {
                Owner::Duplicator
            }
        })
        .collect();
    let priorities: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
    let successors: Vec<Vec<usize>> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.08) {
                Vec::new()
            } else {
                let deg = rng.gen_range(1..=3);
                (0..deg).map(|_| rng.gen_range(0..n)).collect()
            }
        })
        .collect();
    ExplicitGame::new(owners, priorities, successors)
}
