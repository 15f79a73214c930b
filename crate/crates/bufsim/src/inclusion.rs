//! The top of the stack: deciding one bounded simulation game, searching
//! for lasso-shaped counterexamples, and the incremental driver that
//! interleaves both over a growing capacity schedule.
//!
//! Duplicator winning the bounded game certifies the inclusion
//! `L(A) ⊆ cl(L(B))` for the trace closure `cl`; a lasso accepted by `A`
//! but outside the closure of `L(B)` refutes it. Neither test is complete
//! on its own — some valid inclusions need unbounded buffers, and
//! counterexamples can be arbitrarily long — so [`incremental_include`]
//! runs both with increasing resources and reports [`Verdict::Unknown`]
//! when the schedule and the search budget are exhausted.

use std::fmt;
use std::rc::Rc;

use log::{debug, info};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::automata::{Lasso, Nba, NbaError};
use crate::gamegraph::{build_arena, Arena, ArenaError, Capacity, CapacityVector, Owner};
use crate::sampling::{random_instance, SampleConfig};
use crate::solver::{solve_zielonka, verify_strategy, Solution, StrategyError};
use crate::traces::{closure_member, TraceAlphabet, TraceError};

/// Errors from the inclusion layer and everything below it.
#[derive(Debug, Error)]
pub enum InclusionError {
    #[error(transparent)]
    Arena(#[from] ArenaError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Automaton(#[from] NbaError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    /// The solver's claimed winning strategy failed independent
    /// verification; this indicates a bug, never a property of the input.
    #[error("computed strategy for {winner} failed verification")]
    StrategyCheck { winner: Owner },
    #[error("schedule must contain at least one capacity vector")]
    EmptySchedule,
    #[error("schedule step {step} has {got} entries, expected {expected}")]
    ScheduleArity {
        step: usize,
        expected: usize,
        got: usize,
    },
    #[error("schedule step {step} is not pointwise at least its predecessor")]
    ScheduleNotMonotone { step: usize },
    #[error("schedule step {step} has an unbounded entry; steps must be finite")]
    ScheduleUnbounded { step: usize },
}

/// The result of solving one bounded simulation game: who wins from the
/// initial vertex, plus the arena and full solution for inspection.
#[derive(Debug, Clone)]
pub struct SimulationOutcome {
    pub winner: Owner,
    pub arena: Arena,
    pub solution: Solution,
}

/// Builds the arena for `(A, B, σ, κ)`, solves it, and verifies the
/// winner's strategy before reporting.
///
/// The verification step is cheap relative to solving and turns any solver
/// bug into a hard error instead of a wrong verdict.
pub fn decide_simulation(
    a: &Nba,
    b: &Nba,
    sigma: &TraceAlphabet,
    kappa: &CapacityVector,
) -> Result<SimulationOutcome, InclusionError> {
    let arena = build_arena(a, b, sigma, kappa)?;
    let solution = solve_zielonka(&arena);
    let winner = solution.winner(arena.initial());
    debug!(
        "simulation kappa={kappa}: {} vertices, {} edges, winner {winner}",
        arena.vertex_count(),
        arena.edge_count()
    );
    if !verify_strategy(&arena, &solution, winner)? {
        return Err(InclusionError::StrategyCheck { winner });
    }
    Ok(SimulationOutcome {
        winner,
        arena,
        solution,
    })
}

/// Size limits for the lasso counterexample search.
///
/// `max_loop` of zero disables the search (no lasso has an empty loop).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LassoBudget {
    pub max_stem: usize,
    pub max_loop: usize,
}

impl LassoBudget {
    pub fn new(max_stem: usize, max_loop: usize) -> Self {
        LassoBudget { max_stem, max_loop }
    }

    /// True when every lasso within `self` is also within `other`.
    fn within(self, other: LassoBudget) -> bool {
        self.max_stem <= other.max_stem && self.max_loop <= other.max_loop
    }
}

impl fmt::Display for LassoBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stem:{},loop:{}", self.max_stem, self.max_loop)
    }
}

/// All words of the given length over `alphabet`, in the order induced by
/// the slice (the automaton's declaration order).
fn words_of(alphabet: Rc<Vec<char>>, len: usize) -> impl Iterator<Item = Vec<char>> {
    let base = alphabet.len() as u128;
    let count: u128 = if len == 0 { 1 } else { base.pow(len as u32) };
    (0..count).map(move |mut code| {
        let mut word = vec![' '; len];
        for slot in word.iter_mut().rev() {
            *slot = alphabet[(code % base) as usize];
            code /= base;
        }
        word
    })
}

/// Lazily enumerates every canonical lasso within `budget` that `a`
/// accepts, ordered by total length, then stem length, then stem, then
/// loop (both in declared-alphabet order).
///
/// Restricting to canonical forms — primitive loop, shortest stem — keeps
/// the stream free of duplicates without losing any ultimately periodic
/// word whose canonical form fits the budget.
pub fn enumerate_accepted_lassos(
    a: &Nba,
    budget: LassoBudget,
) -> impl Iterator<Item = Lasso> + '_ {
    let alphabet = Rc::new(a.alphabet().to_vec());
    let LassoBudget { max_stem, max_loop } = budget;
    (1..=max_stem + max_loop)
        .flat_map(move |total| {
            let alphabet = Rc::clone(&alphabet);
            let lo = total.saturating_sub(max_loop);
            let hi = (total - 1).min(max_stem);
            (lo..=hi).flat_map(move |stem_len| {
                let loop_len = total - stem_len;
                let loop_alphabet = Rc::clone(&alphabet);
                words_of(Rc::clone(&alphabet), stem_len).flat_map(move |stem| {
                    let loop_alphabet = Rc::clone(&loop_alphabet);
                    words_of(loop_alphabet, loop_len).map(move |cycle| {
                        Lasso::new(stem.clone(), cycle).expect("loop length is at least one")
                    })
                })
            })
        })
        .filter(move |w| {
            w.canonical() == *w
                && a.accepts_lasso(w)
                    .expect("enumerated letters come from the automaton's alphabet")
        })
}

/// Scans `budget` for a lasso accepted by `a` outside the closure of
/// `L(b)`, skipping anything already covered by `searched`.
fn search_counterexample(
    a: &Nba,
    b: &Nba,
    sigma: &TraceAlphabet,
    budget: LassoBudget,
    searched: Option<LassoBudget>,
) -> Result<Option<Lasso>, InclusionError> {
    for w in enumerate_accepted_lassos(a, budget) {
        let this = LassoBudget::new(w.stem().len(), w.cycle().len());
        if searched.is_some_and(|done| this.within(done)) {
            continue;
        }
        if !closure_member(sigma, &w, b)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// A finite, pointwise non-decreasing sequence of finite capacity vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    steps: Vec<CapacityVector>,
}

impl Schedule {
    /// Validates that the steps share one arity, are all finite, and grow
    /// pointwise. Monotonicity is what makes a later Duplicator win imply
    /// wins at every following step, so the driver may stop at the first.
    pub fn new(steps: Vec<CapacityVector>) -> Result<Self, InclusionError> {
        if steps.is_empty() {
            return Err(InclusionError::EmptySchedule);
        }
        let expected = steps[0].len();
        for (i, kappa) in steps.iter().enumerate() {
            if kappa.len() != expected {
                return Err(InclusionError::ScheduleArity {
                    step: i,
                    expected,
                    got: kappa.len(),
                });
            }
            if kappa.entries().contains(&Capacity::Omega) {
                return Err(InclusionError::ScheduleUnbounded { step: i });
            }
            if i > 0 && !steps[i - 1].pointwise_le(kappa) {
                return Err(InclusionError::ScheduleNotMonotone { step: i });
            }
        }
        Ok(Schedule { steps })
    }

    /// The uniform schedule `(0,…,0), (1,…,1), …, (t,…,t)` over `k`
    /// buffers.
    pub fn uniform(k: usize, max_total: u32) -> Schedule {
        Schedule {
            steps: (0..=max_total)
                .map(|j| CapacityVector::uniform(k, j))
                .collect(),
        }
    }

    pub fn steps(&self) -> &[CapacityVector] {
        &self.steps
    }
}

/// The outcome of the incremental procedure.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// Duplicator wins the bounded game at `kappa`; the inclusion holds.
    /// `strategy` is the winning strategy in the solver's text form.
    Included {
        kappa: CapacityVector,
        strategy: String,
    },
    /// `lasso` is accepted by `A` but lies outside the closure of `L(B)`;
    /// the inclusion fails.
    NotIncluded { lasso: Lasso },
    /// Both the schedule and the search budget ran out without a verdict.
    Unknown {
        budget: LassoBudget,
        kappa_tried: CapacityVector,
    },
}

impl Verdict {
    /// A one-line machine-readable summary.
    pub fn record(&self) -> String {
        match self {
            Verdict::Included { kappa, .. } => format!("INCLUDED kappa={kappa}"),
            Verdict::NotIncluded { lasso } => format!("NOT_INCLUDED lasso={lasso}"),
            Verdict::Unknown {
                budget,
                kappa_tried,
            } => format!("UNKNOWN budget={budget} kappa={kappa_tried}"),
        }
    }
}

/// The geometric ladder of search budgets ending exactly at `budget`.
fn budget_ladder(budget: LassoBudget) -> Vec<LassoBudget> {
    let mut ladder = Vec::new();
    let mut step = LassoBudget::new(budget.max_stem.min(1), budget.max_loop.min(1));
    loop {
        ladder.push(step);
        if step == budget {
            return ladder;
        }
        step = LassoBudget::new(
            (step.max_stem.max(1) * 2).min(budget.max_stem),
            (step.max_loop.max(1) * 2).min(budget.max_loop),
        );
    }
}

/// Runs the incremental semi-procedure: before every capacity step of
/// `schedule`, one rung of a doubling counterexample search; then the
/// bounded simulation game at that step. Any leftover search rungs run
/// after the schedule is exhausted.
///
/// Sound in both directions — `Included` comes with a verified strategy,
/// `NotIncluded` with a lasso re-checked against both automata — but not
/// complete: `Unknown` means the given resources did not settle the
/// question, not that no answer exists.
pub fn incremental_include(
    a: &Nba,
    b: &Nba,
    sigma: &TraceAlphabet,
    schedule: &Schedule,
    budget: LassoBudget,
) -> Result<Verdict, InclusionError> {
    let mut ladder = budget_ladder(budget).into_iter();
    let mut searched: Option<LassoBudget> = None;
    let search = |searched: &mut Option<LassoBudget>,
                      rung: LassoBudget|
     -> Result<Option<Lasso>, InclusionError> {
        info!("searching counterexamples within {rung}");
        let hit = search_counterexample(a, b, sigma, rung, *searched)?;
        *searched = Some(rung);
        Ok(hit)
    };
    for kappa in schedule.steps() {
        if let Some(rung) = ladder.next() {
            if let Some(lasso) = search(&mut searched, rung)? {
                info!("counterexample {lasso}");
                return Ok(Verdict::NotIncluded { lasso });
            }
        }
        let outcome = decide_simulation(a, b, sigma, kappa)?;
        info!("capacity {kappa}: {} wins", outcome.winner);
        if outcome.winner == Owner::Duplicator {
            return Ok(Verdict::Included {
                kappa: kappa.clone(),
                strategy: outcome.solution.to_text(),
            });
        }
    }
    for rung in ladder {
        if let Some(lasso) = search(&mut searched, rung)? {
            info!("counterexample {lasso}");
            return Ok(Verdict::NotIncluded { lasso });
        }
    }
    let kappa_tried = schedule
        .steps()
        .last()
        .expect("a schedule is never empty")
        .clone();
    Ok(Verdict::Unknown {
        budget,
        kappa_tried,
    })
}

/// Aggregate result of [`check_soundness_sample`].
#[derive(Debug, Clone, Default)]
pub struct SoundnessReport {
    pub instances: usize,
    pub included: usize,
    pub not_included: usize,
    pub unknown: usize,
    /// Human-readable descriptions of every soundness violation found.
    /// Empty on a correct implementation.
    pub violations: Vec<String>,
}

impl SoundnessReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for SoundnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} instances: {} included, {} not included, {} unknown, {} violations",
            self.instances,
            self.included,
            self.not_included,
            self.unknown,
            self.violations.len()
        )
    }
}

/// Cross-checks the two halves of the procedure against each other on
/// seeded random instances: an `Included` verdict must leave no
/// counterexample within `budget`, and a `NotIncluded` witness must
/// survive independent re-validation.
pub fn check_soundness_sample(
    seed: u64,
    count: usize,
    cfg: &SampleConfig,
    budget: LassoBudget,
    max_total: u32,
) -> Result<SoundnessReport, InclusionError> {
    let mut report = SoundnessReport::default();
    for i in 0..count {
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9)));
        let (a, b, sigma, _) = random_instance(&mut rng, cfg);
        let schedule = Schedule::uniform(sigma.k(), max_total);
        let verdict = incremental_include(&a, &b, &sigma, &schedule, budget)?;
        report.instances += 1;
        match &verdict {
            Verdict::Included { kappa, .. } => {
                report.included += 1;
                if let Some(w) = search_counterexample(&a, &b, &sigma, budget, None)? {
                    report.violations.push(format!(
                        "instance {i} (seed {seed}): included at kappa={kappa}, \
                         yet {w} is accepted by A and outside the closure of L(B)"
                    ));
                }
            }
            Verdict::NotIncluded { lasso } => {
                report.not_included += 1;
                if !a.accepts_lasso(lasso)? || closure_member(&sigma, lasso, &b)? {
                    report.violations.push(format!(
                        "instance {i} (seed {seed}): witness {lasso} does not refute the inclusion"
                    ));
                }
            }
            Verdict::Unknown { .. } => report.unknown += 1,
        }
        debug!("soundness sample {i}: {}", verdict.record());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::testutil::{enumerate_raw, naive_accepts};

    fn budget(max_stem: usize, max_loop: usize) -> LassoBudget {
        LassoBudget::new(max_stem, max_loop)
    }

    #[test]
    fn budget_display_and_ladder() {
        assert_eq!(budget(4, 3).to_string(), "stem:4,loop:3");
        assert_eq!(
            budget_ladder(budget(4, 3)),
            vec![budget(1, 1), budget(2, 2), budget(4, 3)]
        );
        assert_eq!(budget_ladder(budget(0, 1)), vec![budget(0, 1)]);
        assert_eq!(
            budget_ladder(budget(8, 8)),
            vec![budget(1, 1), budget(2, 2), budget(4, 4), budget(8, 8)]
        );
    }

    #[test]
    fn enumeration_matches_naive_oracle() {
        let a = fixtures::ex31_a();
        let got: Vec<Lasso> = enumerate_accepted_lassos(&a, budget(2, 2)).collect();
        let mut expected: Vec<Lasso> = enumerate_raw(a.alphabet(), 2, 2)
            .into_iter()
            .filter(|w| w.canonical() == *w && naive_accepts(&a, w))
            .collect();
        expected.sort_by_key(|w| {
            (
                w.stem().len() + w.cycle().len(),
                w.stem().len(),
                w.stem().to_vec(),
                w.cycle().to_vec(),
            )
        });
        assert_eq!(got, expected);
        assert!(!got.is_empty(), "fixture accepts some short lasso");
    }

    #[test]
    fn enumeration_is_canonical_and_deduplicated() {
        let a = fixtures::ex31_a();
        let all: Vec<Lasso> = enumerate_accepted_lassos(&a, budget(3, 3)).collect();
        for w in &all {
            assert_eq!(w.canonical(), *w, "non-canonical {w} enumerated");
        }
        for (i, w) in all.iter().enumerate() {
            for v in &all[i + 1..] {
                assert_ne!(w, v, "duplicate {w}");
            }
        }
    }

    #[test]
    fn identity_instances_are_duplicator_wins_at_zero() {
        use rand::SeedableRng;
        let cfg = SampleConfig::tiny();
        let mut rng = ChaCha8Rng::seed_from_u64(0xD0701);
        for _ in 0..25 {
            let (a, _, sigma, _) = random_instance(&mut rng, &cfg);
            let kappa = CapacityVector::uniform(sigma.k(), 0);
            let outcome = decide_simulation(&a, &a, &sigma, &kappa).unwrap();
            assert_eq!(
                outcome.winner,
                Owner::Duplicator,
                "copycat strategy must win {} against itself",
                a.name()
            );
        }
    }

    #[test]
    fn buffer_family_flips_at_the_known_capacity() {
        let (a, b, sigma) = (
            fixtures::thm33_a(1),
            fixtures::thm33_b(1),
            fixtures::thm33_sigma(),
        );
        for j in 0..2 {
            let kappa = CapacityVector::uniform(2, j);
            let outcome = decide_simulation(&a, &b, &sigma, &kappa).unwrap();
            assert_eq!(outcome.winner, Owner::Spoiler, "capacity {j} too small");
        }
        let kappa = CapacityVector::uniform(2, 2);
        let outcome = decide_simulation(&a, &b, &sigma, &kappa).unwrap();
        assert_eq!(outcome.winner, Owner::Duplicator);

        let schedule = Schedule::uniform(2, 3);
        let verdict = incremental_include(&a, &b, &sigma, &schedule, budget(2, 2)).unwrap();
        match &verdict {
            Verdict::Included { kappa, .. } => {
                assert_eq!(*kappa, CapacityVector::uniform(2, 2));
            }
            other => panic!("expected inclusion, got {}", other.record()),
        }
        assert_eq!(verdict.record(), "INCLUDED kappa=2,2");
    }

    #[test]
    fn small_capacity_win_implies_bounded_inclusion() {
        use rand::SeedableRng;
        let cfg = SampleConfig::tiny();
        let mut rng = ChaCha8Rng::seed_from_u64(0xD0702);
        let mut wins = 0;
        for _ in 0..40 {
            let (a, b, _, _) = random_instance(&mut rng, &cfg);
            let sigma = TraceAlphabet::single(a.alphabet());
            if !b.alphabet().iter().all(|&c| sigma.contains(c)) {
                continue;
            }
            let kappa = CapacityVector::uniform(1, 0);
            let outcome = decide_simulation(&a, &b, &sigma, &kappa).unwrap();
            if outcome.winner != Owner::Duplicator {
                continue;
            }
            wins += 1;
            for w in enumerate_accepted_lassos(&a, budget(3, 3)) {
                assert!(
                    closure_member(&sigma, &w, &b).unwrap(),
                    "{} beats {} at zero capacity but rejects {w}",
                    b.name(),
                    a.name()
                );
            }
        }
        assert!(wins > 3, "too few Duplicator wins to be meaningful: {wins}");
    }

    #[test]
    fn spoiler_wins_do_not_refute_inclusion() {
        for (a, b, sigma) in [
            (
                fixtures::sec5ex_a(),
                fixtures::sec5ex_b(),
                fixtures::sec5ex_sigma(),
            ),
            (fixtures::ex54_a(), fixtures::ex54_b(), fixtures::ex54_sigma()),
        ] {
            let k = sigma.k();
            for total in 0..=3u32 {
                let kappa = CapacityVector::uniform(k, total);
                let outcome = decide_simulation(&a, &b, &sigma, &kappa).unwrap();
                assert_eq!(
                    outcome.winner,
                    Owner::Spoiler,
                    "{} vs {} at uniform {total}",
                    a.name(),
                    b.name()
                );
            }
            assert_eq!(
                search_counterexample(&a, &b, &sigma, budget(4, 3), None).unwrap(),
                None,
                "the inclusion holds, no lasso within the budget may refute it"
            );
            let schedule = Schedule::uniform(k, 2);
            let verdict = incremental_include(&a, &b, &sigma, &schedule, budget(4, 3)).unwrap();
            match verdict {
                Verdict::Unknown {
                    budget: b,
                    kappa_tried,
                } => {
                    assert_eq!(b, budget(4, 3));
                    assert_eq!(kappa_tried, CapacityVector::uniform(k, 2));
                }
                other => panic!("expected unknown, got {}", other.record()),
            }
        }
    }

    #[test]
    fn missing_letter_yields_counterexample() {
        let a = Nba::new(
            "A",
            vec!["p"],
            vec!['d'],
            "p",
            &[("p", 'd', "p")],
            &["p"],
        )
        .unwrap();
        let b = Nba::new("B", vec!["q"], vec!['d'], "q", &[], &[]).unwrap();
        let sigma = TraceAlphabet::single(&['d']);
        let schedule = Schedule::uniform(1, 2);
        let verdict = incremental_include(&a, &b, &sigma, &schedule, budget(2, 2)).unwrap();
        match &verdict {
            Verdict::NotIncluded { lasso } => assert_eq!(lasso.to_string(), "/d"),
            other => panic!("expected a counterexample, got {}", other.record()),
        }
        assert_eq!(verdict.record(), "NOT_INCLUDED lasso=/d");
    }

    #[test]
    fn schedule_validation() {
        let fin = |v: &[u32]| {
            CapacityVector::new(v.iter().map(|&c| Capacity::Finite(c)).collect())
        };
        assert!(Schedule::new(vec![fin(&[0, 0]), fin(&[1, 2])]).is_ok());
        assert!(matches!(
            Schedule::new(Vec::new()),
            Err(InclusionError::EmptySchedule)
        ));
        assert!(matches!(
            Schedule::new(vec![fin(&[0]), fin(&[0, 0])]),
            Err(InclusionError::ScheduleArity { step: 1, .. })
        ));
        assert!(matches!(
            Schedule::new(vec![fin(&[1, 1]), fin(&[2, 0])]),
            Err(InclusionError::ScheduleNotMonotone { step: 1 })
        ));
        assert!(matches!(
            Schedule::new(vec![CapacityVector::new(vec![
                Capacity::Finite(1),
                Capacity::Omega
            ])]),
            Err(InclusionError::ScheduleUnbounded { step: 0 })
        ));
        let uniform = Schedule::uniform(2, 2);
        assert_eq!(
            uniform.steps(),
            &[
                CapacityVector::uniform(2, 0),
                CapacityVector::uniform(2, 1),
                CapacityVector::uniform(2, 2),
            ]
        );
    }

    #[test]
    fn soundness_sample_small_run_is_clean() {
        let report =
            check_soundness_sample(0xD0703, 20, &SampleConfig::tiny(), budget(3, 2), 1).unwrap();
        assert_eq!(report.instances, 20);
        assert!(report.is_clean(), "violations: {:?}", report.violations);
    }
}
