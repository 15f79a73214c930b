//! Bounded multi-buffer simulation games between Büchi automata over a
//! distributed (trace) alphabet, and a sound incremental semi-decision
//! procedure for trace-closure language inclusion built on top of them.
//!
//! The pieces, bottom up:
//!
//! * [`automata`] — nondeterministic Büchi automata, a text format, lasso
//!   words and their acceptance.
//! * [`traces`] — distributed alphabets, projections, trace equivalence,
//!   and membership in the trace closure of a language.
//! * [`gamegraph`] — the explicit arena of the bounded simulation game with
//!   a three-priority max-parity winning condition.
//! * [`solver`] — two independent parity solvers with positional strategy
//!   extraction and a strategy verifier.
//! * [`inclusion`] — the simulation decision, bounded counterexample
//!   search, and the capacity-schedule driver combining them.
//! * [`fixtures`] — the named example instances used throughout the tests
//!   and the CLI.
//! * [`sampling`] — seeded random instance generators.

pub mod automata;
pub mod fixtures;
pub mod gamegraph;
pub mod inclusion;
pub mod sampling;
pub mod solver;
pub mod traces;

#[cfg(test)]
pub(crate) mod testutil;

pub use automata::{Lasso, Nba};
pub use gamegraph::{arena_size_bound, build_arena, export_dot, Arena, Capacity, CapacityVector, Owner};
pub use inclusion::{
    check_soundness_sample, decide_simulation, enumerate_accepted_lassos, incremental_include,
    LassoBudget, Schedule, SimulationOutcome, Verdict,
};
pub use solver::{solve_spm, solve_zielonka, verify_strategy, GameGraph, Solution};
pub use traces::{closure_member, lasso_trace_equiv, TraceAlphabet};
