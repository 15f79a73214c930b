//! Explicit game arenas for the bounded multi-buffer simulation game.
//!
//! Spoiler steps automaton `A` and pushes each letter onto the FIFO buffers
//! of all components containing it; Duplicator pops letters to step `B`, or
//! ends the round once every buffer is back within capacity. A stuck player
//! loses. The ω-condition — Duplicator wins an infinite play iff Spoiler's
//! run is non-accepting, or `B`'s run is accepting and every pushed letter is
//! eventually popped — is folded into three max-parity priorities with a
//! round-robin counter over `k + 1` recurring events:
//!
//! * event 0: the incoming move popped into an accepting `B` state,
//! * event `i`: the incoming move popped buffer `i-1`, or buffer `i-1` is
//!   empty afterwards.
//!
//! A counter wrap yields priority 2; Spoiler vertices whose `A` state is
//! accepting yield priority 1; everything else 0. Whether an arrival wraps
//! depends on the move, not just the target configuration, so the wrap flag
//! is part of the vertex identity.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::automata::Nba;
use crate::solver::GameGraph;
use crate::traces::TraceAlphabet;

/// Which player owns a vertex (and, for solutions, wins it).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Owner {
    Spoiler,
    Duplicator,
}

impl Owner {
    pub fn opponent(self) -> Owner {
        match self {
            Owner::Spoiler => Owner::Duplicator,
            Owner::Duplicator => Owner::Spoiler,
        }
    }
}

impl fmt::Display for Owner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Owner::Spoiler => write!(f, "Spoiler"),
            Owner::Duplicator => write!(f, "Duplicator"),
        }
    }
}

/// A single buffer bound: a natural number or unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Capacity {
    Finite(u32),
    Omega,
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Finite(c) => write!(f, "{c}"),
            Capacity::Omega => write!(f, "omega"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CapacityParseError {
    #[error("empty capacity vector")]
    Empty,
    #[error("bad capacity entry `{0}`")]
    BadEntry(String),
}

/// A per-buffer capacity vector, written `2,0` or `omega,1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapacityVector {
    entries: Vec<Capacity>,
}

impl CapacityVector {
    pub fn new(entries: Vec<Capacity>) -> Self {
        CapacityVector { entries }
    }

    pub fn uniform(k: usize, value: u32) -> Self {
        CapacityVector {
            entries: vec![Capacity::Finite(value); k],
        }
    }

    pub fn parse(text: &str) -> Result<Self, CapacityParseError> {
        let mut entries = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            if part == "omega" {
                entries.push(Capacity::Omega);
            } else {
                let v: u32 = part
                    .parse()
                    .map_err(|_| CapacityParseError::BadEntry(part.to_string()))?;
                entries.push(Capacity::Finite(v));
            }
        }
        if entries.is_empty() {
            return Err(CapacityParseError::Empty);
        }
        Ok(CapacityVector { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Capacity] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Capacity {
        self.entries[i]
    }

    pub fn is_all_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|c| matches!(c, Capacity::Finite(_)))
    }

    /// The finite entries, or `None` if any entry is `omega`.
    pub fn finite_entries(&self) -> Option<Vec<u32>> {
        self.entries
            .iter()
            .map(|c| match c {
                Capacity::Finite(v) => Some(*v),
                Capacity::Omega => None,
            })
            .collect()
    }

    /// Pointwise order with `omega` as the top element.
    pub fn pointwise_le(&self, other: &CapacityVector) -> bool {
        self.len() == other.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| match (a, b) {
                    (_, Capacity::Omega) => true,
                    (Capacity::Omega, Capacity::Finite(_)) => false,
                    (Capacity::Finite(x), Capacity::Finite(y)) => x <= y,
                })
    }
}

impl fmt::Display for CapacityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArenaError {
    #[error("the game construction needs finite capacities; use the incremental schedule for unbounded buffers")]
    UnsupportedCapacity,
    #[error("capacity vector has {got} entries but the trace alphabet has {expected} components")]
    CapacityMismatch { expected: usize, got: usize },
    #[error("letter `{letter}` of automaton `{automaton}` is not in the trace alphabet")]
    ForeignLetter { automaton: String, letter: char },
    #[error("arena size bound overflows u64")]
    Overflow,
}

/// A move of the simulation game, labelling an arena edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveLabel {
    /// Spoiler takes an `A` transition and pushes the letter onto the
    /// buffers of all components containing it.
    SpoilerStep { letter: char, a_target: usize },
    /// Duplicator pops `letter` from the front of every buffer of its
    /// components and takes a matching `B` transition.
    DupStep { letter: char, b_target: usize },
    /// Duplicator hands the turn back; only allowed with all buffers within
    /// capacity.
    EndRound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub label: MoveLabel,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct VertexKey {
    owner: Owner,
    a_state: u32,
    b_state: u32,
    /// Interned buffer word ids, one per component.
    buffers: Vec<u32>,
    counter: u8,
    moved: bool,
    wrapped: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct VertexData {
    key: VertexKey,
    priority: u8,
}

/// The explicit bipartite arena of one bounded simulation game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arena {
    vertices: Vec<VertexData>,
    out: Vec<Vec<Edge>>,
    /// Interned buffer contents; id 0 is the empty word.
    words: Vec<Vec<char>>,
    initial: usize,
    kappa: Vec<u32>,
    a_names: Vec<String>,
    b_names: Vec<String>,
}

impl Arena {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// Number of buffers (components of the trace alphabet).
    pub fn buffer_count(&self) -> usize {
        self.kappa.len()
    }

    pub fn capacity(&self, i: usize) -> u32 {
        self.kappa[i]
    }

    pub fn owner(&self, v: usize) -> Owner {
        self.vertices[v].key.owner
    }

    pub fn priority(&self, v: usize) -> u8 {
        self.vertices[v].priority
    }

    pub fn counter(&self, v: usize) -> u8 {
        self.vertices[v].key.counter
    }

    pub fn moved(&self, v: usize) -> bool {
        self.vertices[v].key.moved
    }

    pub fn wrapped(&self, v: usize) -> bool {
        self.vertices[v].key.wrapped
    }

    pub fn a_state(&self, v: usize) -> usize {
        self.vertices[v].key.a_state as usize
    }

    pub fn b_state(&self, v: usize) -> usize {
        self.vertices[v].key.b_state as usize
    }

    pub fn a_state_name(&self, v: usize) -> &str {
        &self.a_names[self.a_state(v)]
    }

    pub fn b_state_name(&self, v: usize) -> &str {
        &self.b_names[self.b_state(v)]
    }

    /// Content of buffer `i` at vertex `v`, oldest letter first.
    pub fn buffer(&self, v: usize, i: usize) -> &[char] {
        &self.words[self.vertices[v].key.buffers[i] as usize]
    }

    pub fn out_edges(&self, v: usize) -> &[Edge] {
        &self.out[v]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, &Edge)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(v, es)| es.iter().map(move |e| (v, e)))
    }

    pub fn is_dead_end(&self, v: usize) -> bool {
        self.out[v].is_empty()
    }
}

impl GameGraph for Arena {
    fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    fn owner(&self, v: usize) -> Owner {
        self.vertices[v].key.owner
    }

    fn priority(&self, v: usize) -> u32 {
        self.vertices[v].priority as u32
    }

    fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    fn successor(&self, v: usize, edge: usize) -> usize {
        self.out[v][edge].target
    }
}

/// Closed-form bound on the configuration space:
/// `m · n · (k+1) · ∏_i Σ_{j=0}^{κ(i)+1} |Σ_i|^j`.
///
/// The reachable arena additionally distinguishes owner, moved and wrap
/// flags, but stays within twice this bound on all shipped instances (the
/// test suite measures it).
pub fn arena_size_bound(
    a: &Nba,
    b: &Nba,
    sigma: &TraceAlphabet,
    kappa: &CapacityVector,
) -> Result<u64, ArenaError> {
    let caps = check_instance(a, b, sigma, kappa)?;
    let mut bound: u64 = (a.state_count() as u64)
        .checked_mul(b.state_count() as u64)
        .and_then(|x| x.checked_mul(sigma.k() as u64 + 1))
        .ok_or(ArenaError::Overflow)?;
    for (i, &cap) in caps.iter().enumerate() {
        let base = sigma.component(i).len() as u64;
        let mut words: u64 = 0;
        let mut pow: u64 = 1;
        for j in 0..=cap as u64 + 1 {
            words = words.checked_add(pow).ok_or(ArenaError::Overflow)?;
            if j < cap as u64 + 1 {
                pow = pow.checked_mul(base).ok_or(ArenaError::Overflow)?;
            }
        }
        bound = bound.checked_mul(words).ok_or(ArenaError::Overflow)?;
    }
    Ok(bound)
}

fn check_instance(
    a: &Nba,
    b: &Nba,
    sigma: &TraceAlphabet,
    kappa: &CapacityVector,
) -> Result<Vec<u32>, ArenaError> {
    if kappa.len() != sigma.k() {
        return Err(ArenaError::CapacityMismatch {
            expected: sigma.k(),
            got: kappa.len(),
        });
    }
    let caps = kappa
        .finite_entries()
        .ok_or(ArenaError::UnsupportedCapacity)?;
    for nba in [a, b] {
        for &c in nba.alphabet() {
            if !sigma.contains(c) {
                return Err(ArenaError::ForeignLetter {
                    automaton: nba.name().to_string(),
                    letter: c,
                });
            }
        }
    }
    Ok(caps)
}

struct Builder<'x> {
    a: &'x Nba,
    b: &'x Nba,
    k: usize,
    caps: Vec<u32>,
    masks: HashMap<char, u64>,
    words: Vec<Vec<char>>,
    word_ids: HashMap<Vec<char>, u32>,
    ids: HashMap<VertexKey, usize>,
    vertices: Vec<VertexData>,
    out: Vec<Vec<Edge>>,
    queue: VecDeque<usize>,
}

impl<'x> Builder<'x> {
    fn intern_word(&mut self, w: Vec<char>) -> u32 {
        if let Some(&id) = self.word_ids.get(&w) {
            return id;
        }
        let id = self.words.len() as u32;
        self.words.push(w.clone());
        self.word_ids.insert(w, id);
        id
    }

    fn word(&self, id: u32) -> &[char] {
        &self.words[id as usize]
    }

    fn vertex(&mut self, key: VertexKey) -> usize {
        if let Some(&id) = self.ids.get(&key) {
            return id;
        }
        let priority = if key.wrapped {
            2
        } else if key.owner == Owner::Spoiler && self.a.is_accepting(key.a_state as usize) {
            1
        } else {
            0
        };
        let id = self.vertices.len();
        self.ids.insert(key.clone(), id);
        self.vertices.push(VertexData { key, priority });
        self.out.push(Vec::new());
        self.queue.push_back(id);
        id
    }

    /// Advances the round-robin counter on arrival at a configuration.
    ///
    /// `popped` is the component mask of a pop move (0 otherwise) and
    /// `accepted` tells whether the move was a pop into an accepting `B`
    /// state. The counter keeps advancing while the event at its current
    /// value holds, at most one full cycle; passing `k` back to 0 wraps.
    fn advance_counter(
        &self,
        mut counter: u8,
        buffers: &[u32],
        popped: u64,
        accepted: bool,
    ) -> (u8, bool) {
        let mut wrapped = false;
        for _ in 0..=self.k {
            let event = if counter == 0 {
                accepted
            } else {
                let i = counter as usize - 1;
                popped >> i & 1 == 1 || self.word(buffers[i]).is_empty()
            };
            if !event {
                break;
            }
            if counter as usize == self.k {
                counter = 0;
                wrapped = true;
            } else {
                counter += 1;
            }
        }
        (counter, wrapped)
    }

    fn expand(&mut self, v: usize) {
        let key = self.vertices[v].key.clone();
        match key.owner {
            Owner::Spoiler => self.expand_spoiler(v, &key),
            Owner::Duplicator => self.expand_duplicator(v, &key),
        }
    }

    fn expand_spoiler(&mut self, v: usize, key: &VertexKey) {
        for &(_, letter, target) in self.a.transitions_from(key.a_state as usize) {
            let mask = self.masks[&letter];
            let mut buffers = key.buffers.clone();
            for i in (0..self.k).filter(|i| mask >> i & 1 == 1) {
                debug_assert!(self.word(buffers[i]).len() <= self.caps[i] as usize);
                let mut w = self.word(buffers[i]).to_vec();
                w.push(letter);
                buffers[i] = self.intern_word(w);
            }
            let (counter, wrapped) = self.advance_counter(key.counter, &buffers, 0, false);
            let next = self.vertex(VertexKey {
                owner: Owner::Duplicator,
                a_state: target as u32,
                b_state: key.b_state,
                buffers,
                counter,
                moved: false,
                wrapped,
            });
            self.out[v].push(Edge {
                label: MoveLabel::SpoilerStep {
                    letter,
                    a_target: target,
                },
                target: next,
            });
        }
    }

    fn expand_duplicator(&mut self, v: usize, key: &VertexKey) {
        for &(_, letter, target) in self.b.transitions_from(key.b_state as usize) {
            let mask = self.masks[&letter];
            let mut buffers = key.buffers.clone();
            let mut enabled = true;
            for i in (0..self.k).filter(|i| mask >> i & 1 == 1) {
                let w = self.word(buffers[i]);
                if w.first() != Some(&letter) {
                    enabled = false;
                    break;
                }
                let rest = w[1..].to_vec();
                buffers[i] = self.intern_word(rest);
            }
            if !enabled {
                continue;
            }
            let accepted = self.b.is_accepting(target);
            let (counter, wrapped) = self.advance_counter(key.counter, &buffers, mask, accepted);
            let next = self.vertex(VertexKey {
                owner: Owner::Duplicator,
                a_state: key.a_state,
                b_state: target as u32,
                buffers,
                counter,
                moved: true,
                wrapped,
            });
            self.out[v].push(Edge {
                label: MoveLabel::DupStep {
                    letter,
                    b_target: target,
                },
                target: next,
            });
        }
        let within_capacity = (0..self.k)
            .all(|i| self.word(key.buffers[i]).len() <= self.caps[i] as usize);
        if within_capacity {
            let (counter, wrapped) = self.advance_counter(key.counter, &key.buffers, 0, false);
            let next = self.vertex(VertexKey {
                owner: Owner::Spoiler,
                a_state: key.a_state,
                b_state: key.b_state,
                buffers: key.buffers.clone(),
                counter,
                moved: false,
                wrapped,
            });
            self.out[v].push(Edge {
                label: MoveLabel::EndRound,
                target: next,
            });
        }
    }
}

/// Builds the reachable arena of the bounded simulation game.
///
/// Construction is a deterministic breadth-first exploration: vertex ids
/// are discovery order, edge order follows the sorted transition lists of
/// the automata with `EndRound` last.
pub fn build_arena(
    a: &Nba,
    b: &Nba,
    sigma: &TraceAlphabet,
    kappa: &CapacityVector,
) -> Result<Arena, ArenaError> {
    let caps = check_instance(a, b, sigma, kappa)?;
    let mut masks = HashMap::new();
    for nba in [a, b] {
        for &c in nba.alphabet() {
            masks
                .entry(c)
                .or_insert_with(|| sigma.component_mask(c).unwrap());
        }
    }
    let mut builder = Builder {
        a,
        b,
        k: sigma.k(),
        caps,
        masks,
        words: Vec::new(),
        word_ids: HashMap::new(),
        ids: HashMap::new(),
        vertices: Vec::new(),
        out: Vec::new(),
        queue: VecDeque::new(),
    };
    let empty = builder.intern_word(Vec::new());
    let initial = builder.vertex(VertexKey {
        owner: Owner::Spoiler,
        a_state: a.initial() as u32,
        b_state: b.initial() as u32,
        buffers: vec![empty; sigma.k()],
        counter: 0,
        moved: false,
        wrapped: false,
    });
    while let Some(v) = builder.queue.pop_front() {
        builder.expand(v);
    }
    log::debug!(
        "arena: {} vertices, {} edges",
        builder.vertices.len(),
        builder.out.iter().map(Vec::len).sum::<usize>()
    );
    Ok(Arena {
        vertices: builder.vertices,
        out: builder.out,
        words: builder.words,
        initial,
        kappa: builder.caps,
        a_names: a.states().to_vec(),
        b_names: b.states().to_vec(),
    })
}

/// Renders the arena in Graphviz DOT: Spoiler vertices are boxes,
/// Duplicator vertices ellipses; fill encodes priority (white 0, salmon 1,
/// light blue 2); dead ends get a red border; the initial vertex has an
/// entry arrow.
pub fn export_dot(arena: &Arena) -> String {
    let mut dot = String::from("digraph arena {\n");
    dot.push_str("  entry [shape=point, label=\"\"];\n");
    for v in 0..arena.vertex_count() {
        let shape = match arena.owner(v) {
            Owner::Spoiler => "box",
            Owner::Duplicator => "ellipse",
        };
        let fill = match arena.priority(v) {
            2 => "lightblue",
            1 => "salmon",
            _ => "white",
        };
        let buffers: Vec<String> = (0..arena.buffer_count())
            .map(|i| {
                let w = arena.buffer(v, i);
                if w.is_empty() {
                    "ε".to_string()
                } else {
                    w.iter().collect()
                }
            })
            .collect();
        let mut label = format!(
            "{} | {} | {} | c{}",
            arena.a_state_name(v),
            buffers.join(","),
            arena.b_state_name(v),
            arena.counter(v)
        );
        if arena.moved(v) {
            label.push_str(" m");
        }
        if arena.wrapped(v) {
            label.push_str(" w");
        }
        let dead = if arena.is_dead_end(v) {
            ", color=red, penwidth=3"
        } else {
            ""
        };
        dot.push_str(&format!(
            "  v{v} [shape={shape}, style=filled, fillcolor={fill}, label=\"{label}\"{dead}];\n"
        ));
    }
    dot.push_str(&format!("  entry -> v{};\n", arena.initial()));
    for (v, edge) in arena.edges() {
        let label = match edge.label {
            MoveLabel::SpoilerStep { letter, .. } => format!("push {letter}"),
            MoveLabel::DupStep { letter, .. } => format!("pop {letter}"),
            MoveLabel::EndRound => "end".to_string(),
        };
        dot.push_str(&format!(
            "  v{v} -> v{} [label=\"{label}\"];\n",
            edge.target
        ));
    }
    dot.push_str("}\n");
    dot
}
