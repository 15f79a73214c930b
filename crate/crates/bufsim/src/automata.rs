//! Nondeterministic Büchi automata, a line-oriented text format for them,
//! and acceptance of ultimately periodic words given as lassos.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Error raised when constructing an automaton from parts.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum NbaError {
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("duplicate letter `{0}`")]
    DuplicateLetter(char),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("letter `{0}` outside the alphabet")]
    ForeignLetter(char),
    #[error("loop of a lasso must be nonempty")]
    EmptyLoop,
    #[error("run step {step}: ({src}, {letter}, {dst}) is not a transition")]
    NotATransition {
        step: usize,
        src: String,
        letter: char,
        dst: String,
    },
}

/// Error raised while parsing the textual formats, with a 1-based line number.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: undeclared state `{name}`")]
    UndeclaredState { line: usize, name: String },
    #[error("line {line}: undeclared letter `{letter}`")]
    UndeclaredLetter { line: usize, letter: char },
    #[error("missing `{section}` section")]
    MissingSection { section: &'static str },
    #[error("line {line}: duplicate `{section}` declaration")]
    DuplicateSection { line: usize, section: &'static str },
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// A nondeterministic Büchi automaton over single-character letters.
///
/// States are kept in declaration order; transitions are a set of
/// `(source, letter, target)` triples sorted by that order. Missing
/// transitions are meaningful (a stuck player loses the simulation game),
/// so no dead-state completion is ever performed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nba {
    name: String,
    states: Vec<String>,
    alphabet: Vec<char>,
    initial: usize,
    /// Sorted, duplicate-free `(src, letter, dst)` triples over state indices.
    transitions: Vec<(usize, char, usize)>,
    /// Sorted accepting state indices.
    accepting: Vec<usize>,
}

impl Nba {
    pub fn new<S: Into<String>>(
        name: impl Into<String>,
        states: Vec<S>,
        alphabet: Vec<char>,
        initial: &str,
        transitions: &[(&str, char, &str)],
        accepting: &[&str],
    ) -> Result<Self, NbaError> {
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(NbaError::DuplicateState(s.clone()));
            }
        }
        let mut letters = HashSet::new();
        for &a in &alphabet {
            if !letters.insert(a) {
                return Err(NbaError::DuplicateLetter(a));
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| NbaError::UnknownState(name.to_string()))
        };
        let initial = lookup(initial)?;
        let mut triples = Vec::with_capacity(transitions.len());
        for &(src, letter, dst) in transitions {
            if !letters.contains(&letter) {
                return Err(NbaError::ForeignLetter(letter));
            }
            triples.push((lookup(src)?, letter, lookup(dst)?));
        }
        triples.sort_unstable();
        triples.dedup();
        let mut acc: Vec<usize> = accepting
            .iter()
            .map(|s| lookup(s))
            .collect::<Result<_, _>>()?;
        acc.sort_unstable();
        acc.dedup();
        Ok(Nba {
            name: name.into(),
            states,
            alphabet,
            initial,
            transitions: triples,
            accepting: acc,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn has_letter(&self, a: char) -> bool {
        self.alphabet.contains(&a)
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn transitions(&self) -> &[(usize, char, usize)] {
        &self.transitions
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    /// All transitions leaving `q`, as a slice of the sorted triple list.
    pub fn transitions_from(&self, q: usize) -> &[(usize, char, usize)] {
        let lo = self.transitions.partition_point(|&(s, _, _)| s < q);
        let hi = self.transitions.partition_point(|&(s, _, _)| s <= q);
        &self.transitions[lo..hi]
    }

    pub fn successors(&self, q: usize, a: char) -> impl Iterator<Item = usize> + '_ {
        self.transitions_from(q)
            .iter()
            .filter(move |&&(_, l, _)| l == a)
            .map(|&(_, _, t)| t)
    }

    pub fn accepting(&self) -> &[usize] {
        &self.accepting
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting.binary_search(&q).is_ok()
    }

    /// Parses the line-oriented text format. `#` starts a comment.
    ///
    /// ```text
    /// nba example
    /// alphabet: a b c
    /// states: q0 q1
    /// initial: q0
    /// accepting: q1
    /// trans:
    /// q0 a q1
    /// q1 b q0
    /// ```
    ///
    /// `accepting:` and `trans:` may be omitted or empty; the other sections
    /// are mandatory.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut header: Option<String> = None;
        let mut alphabet: Option<(usize, Vec<char>)> = None;
        let mut states: Option<(usize, Vec<String>)> = None;
        let mut initial: Option<(usize, String)> = None;
        let mut accepting: Option<(usize, Vec<String>)> = None;
        let mut trans_seen: Option<usize> = None;
        let mut triples: Vec<(usize, String, char, String)> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if header.is_none() {
                if tokens[0] != "nba" {
                    return Err(syntax(line, "expected `nba <name>` header"));
                }
                if tokens.len() > 2 {
                    return Err(syntax(line, "expected a single automaton name"));
                }
                header = Some(tokens.get(1).unwrap_or(&"").to_string());
                continue;
            }
            match tokens[0] {
                "alphabet:" => {
                    if alphabet.is_some() {
                        return Err(ParseError::DuplicateSection {
                            line,
                            section: "alphabet",
                        });
                    }
                    let mut letters = Vec::new();
                    for tok in &tokens[1..] {
                        let mut chars = tok.chars();
                        let c = chars.next().unwrap();
                        if chars.next().is_some() {
                            return Err(syntax(
                                line,
                                format!("letter `{tok}` must be a single character"),
                            ));
                        }
                        if letters.contains(&c) {
                            return Err(syntax(line, format!("duplicate letter `{c}`")));
                        }
                        letters.push(c);
                    }
                    alphabet = Some((line, letters));
                }
                "states:" => {
                    if states.is_some() {
                        return Err(ParseError::DuplicateSection {
                            line,
                            section: "states",
                        });
                    }
                    let names: Vec<String> = tokens[1..].iter().map(|s| s.to_string()).collect();
                    let mut seen = HashSet::new();
                    for n in &names {
                        if !seen.insert(n) {
                            return Err(syntax(line, format!("duplicate state `{n}`")));
                        }
                    }
                    states = Some((line, names));
                }
                "initial:" => {
                    if initial.is_some() {
                        return Err(ParseError::DuplicateSection {
                            line,
                            section: "initial",
                        });
                    }
                    if tokens.len() != 2 {
                        return Err(syntax(line, "expected exactly one initial state"));
                    }
                    initial = Some((line, tokens[1].to_string()));
                }
                "accepting:" => {
                    if accepting.is_some() {
                        return Err(ParseError::DuplicateSection {
                            line,
                            section: "accepting",
                        });
                    }
                    accepting = Some((line, tokens[1..].iter().map(|s| s.to_string()).collect()));
                }
                "trans:" => {
                    if trans_seen.is_some() {
                        return Err(ParseError::DuplicateSection {
                            line,
                            section: "trans",
                        });
                    }
                    if tokens.len() > 1 {
                        return Err(syntax(line, "transitions go on their own lines"));
                    }
                    trans_seen = Some(line);
                }
                _ => {
                    if trans_seen.is_none() {
                        return Err(syntax(
                            line,
                            format!("unexpected token `{}` outside a section", tokens[0]),
                        ));
                    }
                    if tokens.len() != 3 {
                        return Err(syntax(line, "expected `src letter dst`"));
                    }
                    let mut chars = tokens[1].chars();
                    let letter = chars.next().unwrap();
                    if chars.next().is_some() {
                        return Err(syntax(
                            line,
                            format!("letter `{}` must be a single character", tokens[1]),
                        ));
                    }
                    triples.push((line, tokens[0].to_string(), letter, tokens[2].to_string()));
                }
            }
        }

        if header.is_none() {
            return Err(ParseError::MissingSection { section: "nba" });
        }
        let (_, alphabet) = alphabet.ok_or(ParseError::MissingSection {
            section: "alphabet",
        })?;
        let (_, state_names) =
            states.ok_or(ParseError::MissingSection { section: "states" })?;
        let (init_line, init_name) =
            initial.ok_or(ParseError::MissingSection { section: "initial" })?;

        let index: HashMap<&str, usize> = state_names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let resolve = |line: usize, name: &str| {
            index.get(name).copied().ok_or(ParseError::UndeclaredState {
                line,
                name: name.to_string(),
            })
        };
        let initial = resolve(init_line, &init_name)?;
        let mut acc = Vec::new();
        if let Some((line, names)) = accepting {
            for n in &names {
                acc.push(resolve(line, n)?);
            }
        }
        acc.sort_unstable();
        acc.dedup();
        let mut transitions = Vec::with_capacity(triples.len());
        for (line, src, letter, dst) in &triples {
            if !alphabet.contains(letter) {
                return Err(ParseError::UndeclaredLetter {
                    line: *line,
                    letter: *letter,
                });
            }
            transitions.push((resolve(*line, src)?, *letter, resolve(*line, dst)?));
        }
        transitions.sort_unstable();
        transitions.dedup();

        Ok(Nba {
            name: header.unwrap(),
            states: state_names,
            alphabet,
            initial,
            transitions,
            accepting: acc,
        })
    }

    /// Renders the automaton in the text format accepted by [`Nba::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.name.is_empty() {
            out.push_str("nba\n");
        } else {
            out.push_str(&format!("nba {}\n", self.name));
        }
        out.push_str("alphabet:");
        for a in &self.alphabet {
            out.push(' ');
            out.push(*a);
        }
        out.push('\n');
        out.push_str("states:");
        for s in &self.states {
            out.push(' ');
            out.push_str(s);
        }
        out.push('\n');
        out.push_str(&format!("initial: {}\n", self.states[self.initial]));
        out.push_str("accepting:");
        for &q in &self.accepting {
            out.push(' ');
            out.push_str(&self.states[q]);
        }
        out.push('\n');
        out.push_str("trans:\n");
        for &(src, letter, dst) in &self.transitions {
            out.push_str(&format!(
                "{} {} {}\n",
                self.states[src], letter, self.states[dst]
            ));
        }
        out
    }

    /// Does the automaton accept `stem · loop^ω`?
    ///
    /// Searches the product of the automaton with the lasso's position
    /// automaton for a reachable cycle over loop positions that contains an
    /// accepting state.
    pub fn accepts_lasso(&self, w: &Lasso) -> Result<bool, NbaError> {
        for &c in w.stem().iter().chain(w.cycle()) {
            if !self.has_letter(c) {
                return Err(NbaError::ForeignLetter(c));
            }
        }
        let s = w.stem().len();
        let l = w.cycle().len();
        let positions = s + l;
        // Product nodes are (state, position), indexed q * positions + pos.
        let node = |q: usize, pos: usize| q * positions + pos;
        let mut reachable = vec![false; self.state_count() * positions];
        let mut queue = VecDeque::new();
        reachable[node(self.initial, 0)] = true;
        queue.push_back((self.initial, 0));
        let mut edges: Vec<(usize, usize)> = Vec::new();
        while let Some((q, pos)) = queue.pop_front() {
            let letter = w.letter_at(pos);
            let next_pos = if pos + 1 < positions { pos + 1 } else { s };
            for t in self.successors(q, letter) {
                edges.push((node(q, pos), node(t, next_pos)));
                if !reachable[node(t, next_pos)] {
                    reachable[node(t, next_pos)] = true;
                    queue.push_back((t, next_pos));
                }
            }
        }
        let mut graph = petgraph::graph::DiGraph::<(), ()>::new();
        let nodes: Vec<_> = (0..self.state_count() * positions)
            .map(|_| graph.add_node(()))
            .collect();
        for &(u, v) in &edges {
            graph.add_edge(nodes[u], nodes[v], ());
        }
        for scc in petgraph::algo::tarjan_scc(&graph) {
            let cyclic = scc.len() > 1
                || graph
                    .neighbors(scc[0])
                    .any(|n| n == scc[0]);
            if !cyclic {
                continue;
            }
            let has_accepting = scc.iter().any(|&n| {
                let id = n.index();
                reachable[id] && self.is_accepting(id / positions)
            });
            if has_accepting {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Restricts the automaton to the states reachable from the initial
    /// state. The language is preserved; nothing else is normalized.
    pub fn reachable_trim(&self) -> Nba {
        let mut seen = vec![false; self.state_count()];
        seen[self.initial] = true;
        let mut queue = VecDeque::from([self.initial]);
        while let Some(q) = queue.pop_front() {
            for &(_, _, t) in self.transitions_from(q) {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        let mut remap = vec![usize::MAX; self.state_count()];
        let mut states = Vec::new();
        for (q, name) in self.states.iter().enumerate() {
            if seen[q] {
                remap[q] = states.len();
                states.push(name.clone());
            }
        }
        let transitions = self
            .transitions
            .iter()
            .filter(|&&(s, _, _)| seen[s])
            .map(|&(s, a, t)| (remap[s], a, remap[t]))
            .collect();
        let accepting = self
            .accepting
            .iter()
            .filter(|&&q| seen[q])
            .map(|&q| remap[q])
            .collect();
        Nba {
            name: self.name.clone(),
            states,
            alphabet: self.alphabet.clone(),
            initial: remap[self.initial],
            transitions,
            accepting,
        }
    }
}

impl fmt::Display for Nba {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// An ultimately periodic word `stem · loop^ω`.
///
/// The literal format is `stem/loop`, e.g. `bb/ca` for `bb(ca)^ω` and `/ca`
/// for `(ca)^ω`. No normalization happens implicitly; [`Lasso::canonical`]
/// folds the loop to its primitive root and minimizes the stem explicitly.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lasso {
    stem: Vec<char>,
    cycle: Vec<char>,
}

impl Lasso {
    pub fn new(stem: Vec<char>, cycle: Vec<char>) -> Result<Self, NbaError> {
        if cycle.is_empty() {
            return Err(NbaError::EmptyLoop);
        }
        Ok(Lasso { stem, cycle })
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut parts = text.split('/');
        let stem = parts.next().unwrap_or("");
        let cycle = parts
            .next()
            .ok_or_else(|| syntax(1, "lasso literal must be `stem/loop`"))?;
        if parts.next().is_some() {
            return Err(syntax(1, "lasso literal has more than one `/`"));
        }
        if cycle.is_empty() {
            return Err(syntax(1, "lasso loop must be nonempty"));
        }
        Ok(Lasso {
            stem: stem.chars().collect(),
            cycle: cycle.chars().collect(),
        })
    }

    pub fn stem(&self) -> &[char] {
        &self.stem
    }

    /// The repeated part; nonempty by construction.
    pub fn cycle(&self) -> &[char] {
        &self.cycle
    }

    /// Letter at position `i` of the denoted infinite word.
    pub fn letter_at(&self, i: usize) -> char {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.cycle[(i - self.stem.len()) % self.cycle.len()]
        }
    }

    /// The first `n` letters of the denoted infinite word.
    pub fn unroll(&self, n: usize) -> Vec<char> {
        (0..n).map(|i| self.letter_at(i)).collect()
    }

    /// The unique representation with a primitive loop and a minimal stem.
    ///
    /// Folds `loop = r^m` to `r`, then repeatedly absorbs a stem letter equal
    /// to the last loop letter by rotating the loop right. Two lassos denote
    /// the same infinite word iff their canonical forms are equal.
    pub fn canonical(&self) -> Lasso {
        let mut cycle = primitive_root(&self.cycle);
        let mut stem = self.stem.clone();
        while let Some(&last) = stem.last() {
            if last != *cycle.last().unwrap() {
                break;
            }
            stem.pop();
            let moved = cycle.pop().unwrap();
            cycle.insert(0, moved);
        }
        Lasso { stem, cycle }
    }
}

/// The shortest word `r` with `word = r^m`.
pub(crate) fn primitive_root(word: &[char]) -> Vec<char> {
    let n = word.len();
    for d in 1..=n {
        if n.is_multiple_of(d) && word.iter().enumerate().all(|(i, &c)| c == word[i % d]) {
            return word[..d].to_vec();
        }
    }
    word.to_vec()
}

impl fmt::Display for Lasso {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.stem {
            write!(f, "{c}")?;
        }
        write!(f, "/")?;
        for c in &self.cycle {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A finite alternating sequence `q0 a0 q1 a1 … qn` of a specific automaton,
/// starting at its initial state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRun {
    states: Vec<usize>,
    letters: Vec<char>,
}

impl FiniteRun {
    /// The empty run sitting at the initial state.
    pub fn start(nba: &Nba) -> Self {
        FiniteRun {
            states: vec![nba.initial()],
            letters: Vec::new(),
        }
    }

    /// Extends the run by one transition, validating it against `nba`.
    pub fn step(&mut self, nba: &Nba, letter: char, target: usize) -> Result<(), NbaError> {
        let src = *self.states.last().unwrap();
        if !nba.successors(src, letter).any(|t| t == target) {
            return Err(NbaError::NotATransition {
                step: self.letters.len(),
                src: nba.state_name(src).to_string(),
                letter,
                dst: nba.state_name(target).to_string(),
            });
        }
        self.states.push(target);
        self.letters.push(letter);
        Ok(())
    }

    pub fn states(&self) -> &[usize] {
        &self.states
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn current(&self) -> usize {
        *self.states.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}
