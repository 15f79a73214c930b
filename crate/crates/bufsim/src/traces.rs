//! Trace alphabets: distributed alphabets `(Σ_1, …, Σ_k)` with possibly
//! overlapping components, per-component projections of finite words and
//! lassos, the induced trace equivalence, and membership of an ultimately
//! periodic word in the trace closure of a Büchi language.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::automata::{Lasso, Nba, ParseError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("trace alphabet needs at least one component")]
    NoComponents,
    #[error("at most 63 components are supported, got {0}")]
    TooManyComponents(usize),
    #[error("component index {i} out of range for {k} components")]
    ComponentOutOfRange { i: usize, k: usize },
    #[error("letter `{0}` not in the trace alphabet")]
    ForeignLetter(char),
}

/// A distributed alphabet `σ = (Σ_1, …, Σ_k)`.
///
/// The overall alphabet is the union of the components. A letter may belong
/// to several components; two letters are dependent when they share one.
/// Component indices are 0-based in this API; the text format uses 1-based
/// labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceAlphabet {
    /// Per-component letter sets, each sorted and duplicate-free.
    components: Vec<Vec<char>>,
    /// Sorted union of all components.
    alphabet: Vec<char>,
}

impl TraceAlphabet {
    pub fn new(components: Vec<Vec<char>>) -> Result<Self, TraceError> {
        if components.is_empty() {
            return Err(TraceError::NoComponents);
        }
        if components.len() > 63 {
            return Err(TraceError::TooManyComponents(components.len()));
        }
        let components: Vec<Vec<char>> = components
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        let mut alphabet: Vec<char> = components.iter().flatten().copied().collect();
        alphabet.sort_unstable();
        alphabet.dedup();
        Ok(TraceAlphabet {
            components,
            alphabet,
        })
    }

    /// The one-component alphabet where every pair of letters is dependent.
    pub fn single(alphabet: &[char]) -> Self {
        TraceAlphabet::new(vec![alphabet.to_vec()]).unwrap()
    }

    pub fn k(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, i: usize) -> &[char] {
        &self.components[i]
    }

    /// Sorted union of the components.
    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn contains(&self, a: char) -> bool {
        self.alphabet.binary_search(&a).is_ok()
    }

    pub fn in_component(&self, a: char, i: usize) -> bool {
        self.components[i].binary_search(&a).is_ok()
    }

    /// The set `σ(a)` of component indices containing `a`, as a bit mask.
    pub fn component_mask(&self, a: char) -> Result<u64, TraceError> {
        if !self.contains(a) {
            return Err(TraceError::ForeignLetter(a));
        }
        let mut mask = 0u64;
        for (i, _) in self
            .components
            .iter()
            .enumerate()
            .filter(|(_, c)| c.binary_search(&a).is_ok())
        {
            mask |= 1 << i;
        }
        Ok(mask)
    }

    pub fn components_of(&self, a: char) -> impl Iterator<Item = usize> + '_ {
        self.components
            .iter()
            .enumerate()
            .filter(move |(_, c)| c.binary_search(&a).is_ok())
            .map(|(i, _)| i)
    }

    /// Two letters are dependent iff they share a component.
    pub fn dependent(&self, a: char, b: char) -> bool {
        self.components
            .iter()
            .any(|c| c.binary_search(&a).is_ok() && c.binary_search(&b).is_ok())
    }

    /// Parses the sigma text format:
    ///
    /// ```text
    /// sigma
    /// 1: a b
    /// 2: b c
    /// ```
    ///
    /// Component labels must be `1..k` in ascending order.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let syntax = |line: usize, msg: String| ParseError::Syntax { line, msg };
        let mut header = false;
        let mut components: Vec<Vec<char>> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if !header {
                if tokens != ["sigma"] {
                    return Err(syntax(line, "expected `sigma` header".into()));
                }
                header = true;
                continue;
            }
            let label = tokens[0]
                .strip_suffix(':')
                .ok_or_else(|| syntax(line, "expected `<index>: letters`".into()))?;
            let index: usize = label
                .parse()
                .map_err(|_| syntax(line, format!("bad component index `{label}`")))?;
            if index != components.len() + 1 {
                return Err(syntax(
                    line,
                    format!("expected component {}, got {index}", components.len() + 1),
                ));
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
                letters.push(c);
            }
            components.push(letters);
        }
        if !header {
            return Err(ParseError::MissingSection { section: "sigma" });
        }
        if components.is_empty() {
            return Err(ParseError::MissingSection {
                section: "component",
            });
        }
        TraceAlphabet::new(components).map_err(|e| ParseError::Syntax {
            line: 1,
            msg: e.to_string(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("sigma\n");
        for (i, comp) in self.components.iter().enumerate() {
            out.push_str(&format!("{}:", i + 1));
            for c in comp {
                out.push(' ');
                out.push(*c);
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for TraceAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Projection `π_i(u)` of a finite word: deletes every letter outside `Σ_i`.
pub fn project(sigma: &TraceAlphabet, u: &[char], i: usize) -> Result<Vec<char>, TraceError> {
    if i >= sigma.k() {
        return Err(TraceError::ComponentOutOfRange { i, k: sigma.k() });
    }
    for &c in u {
        if !sigma.contains(c) {
            return Err(TraceError::ForeignLetter(c));
        }
    }
    Ok(u.iter()
        .copied()
        .filter(|&c| sigma.in_component(c, i))
        .collect())
}

/// Projection of an ultimately periodic word: finite when the loop has no
/// `Σ_i` letters, another lasso otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProjectedWord {
    Finite(Vec<char>),
    Infinite(Lasso),
}

pub fn project_lasso(
    sigma: &TraceAlphabet,
    w: &Lasso,
    i: usize,
) -> Result<ProjectedWord, TraceError> {
    let stem = project(sigma, w.stem(), i)?;
    let cycle = project(sigma, w.cycle(), i)?;
    if cycle.is_empty() {
        Ok(ProjectedWord::Finite(stem))
    } else {
        Ok(ProjectedWord::Infinite(Lasso::new(stem, cycle).unwrap()))
    }
}

/// Two finite words are trace equivalent iff all their projections agree.
pub fn finite_trace_equiv(
    sigma: &TraceAlphabet,
    u: &[char],
    v: &[char],
) -> Result<bool, TraceError> {
    for i in 0..sigma.k() {
        if project(sigma, u, i)? != project(sigma, v, i)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Do two lassos denote the same infinite word?
///
/// After folding both loops to their primitive roots, the words are equal iff
/// they agree on a prefix of length `|stem1| + |stem2| + lcm(|loop1|, |loop2|)`.
pub fn same_omega_word(u: &Lasso, v: &Lasso) -> bool {
    let u = u.canonical();
    let v = v.canonical();
    let depth = u.stem().len()
        + v.stem().len()
        + lcm(u.cycle().len() as u64, v.cycle().len() as u64) as usize;
    u.unroll(depth) == v.unroll(depth)
}

/// Trace equivalence of ultimately periodic words: every projection must
/// agree, finite ones letter-for-letter and infinite ones as ω-words.
pub fn lasso_trace_equiv(
    sigma: &TraceAlphabet,
    u: &Lasso,
    v: &Lasso,
) -> Result<bool, TraceError> {
    for i in 0..sigma.k() {
        let equal = match (project_lasso(sigma, u, i)?, project_lasso(sigma, v, i)?) {
            (ProjectedWord::Finite(x), ProjectedWord::Finite(y)) => x == y,
            (ProjectedWord::Infinite(x), ProjectedWord::Infinite(y)) => same_omega_word(&x, &y),
            _ => false,
        };
        if !equal {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Is some word of `L(B)` trace equivalent to `stem · loop^ω`?
///
/// Explores the product of `B` with one position tracker per component.
/// Tracker `i` walks along `π_i(w)`; a `B`-transition on letter `b` must
/// match the expected next letter of `π_i(w)` for every `i ∈ σ(b)` and
/// advances those trackers. The product accepts iff some reachable strongly
/// connected component with an internal edge
///   * contains an accepting `B` state,
///   * advances every tracker with an infinite projection, and
///   * sits at end-of-word for every tracker with a finite projection.
pub fn closure_member(sigma: &TraceAlphabet, w: &Lasso, b: &Nba) -> Result<bool, TraceError> {
    for &c in b.alphabet() {
        if !sigma.contains(c) {
            return Err(TraceError::ForeignLetter(c));
        }
    }
    let k = sigma.k();
    let projections: Vec<ProjectedWord> = (0..k)
        .map(|i| project_lasso(sigma, w, i))
        .collect::<Result<_, _>>()?;

    // Per tracker: expected letter at a position, successor position, and
    // end-of-word detection.
    let expected = |i: usize, pos: u32| -> Option<char> {
        match &projections[i] {
            ProjectedWord::Finite(x) => x.get(pos as usize).copied(),
            ProjectedWord::Infinite(x) => Some(x.letter_at(pos as usize)),
        }
    };
    let advance = |i: usize, pos: u32| -> u32 {
        match &projections[i] {
            ProjectedWord::Finite(_) => pos + 1,
            ProjectedWord::Infinite(x) => {
                let total = (x.stem().len() + x.cycle().len()) as u32;
                if pos + 1 < total {
                    pos + 1
                } else {
                    x.stem().len() as u32
                }
            }
        }
    };

    let masks: HashMap<char, u64> = b
        .alphabet()
        .iter()
        .map(|&c| (c, sigma.component_mask(c).unwrap()))
        .collect();

    type Node = (usize, Vec<u32>);
    let start: Node = (b.initial(), vec![0; k]);
    let mut ids: HashMap<Node, usize> = HashMap::new();
    let mut nodes: Vec<Node> = Vec::new();
    let mut edges: Vec<(usize, usize, u64)> = Vec::new();
    ids.insert(start.clone(), 0);
    nodes.push(start);
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        let (q, pos) = nodes[id].clone();
        for &(_, letter, q2) in b.transitions_from(q) {
            let mask = masks[&letter];
            let mut next = pos.clone();
            let mut ok = true;
            for i in (0..k).filter(|i| mask >> i & 1 == 1) {
                if expected(i, pos[i]) == Some(letter) {
                    next[i] = advance(i, pos[i]);
                } else {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let target = (q2, next);
            let next_id = *ids.entry(target.clone()).or_insert_with(|| {
                nodes.push(target.clone());
                queue.push_back(nodes.len() - 1);
                nodes.len() - 1
            });
            edges.push((id, next_id, mask));
        }
    }

    let mut graph = petgraph::graph::DiGraph::<(), ()>::new();
    let gnodes: Vec<_> = nodes.iter().map(|_| graph.add_node(())).collect();
    for &(u, v, _) in &edges {
        graph.add_edge(gnodes[u], gnodes[v], ());
    }
    let sccs = petgraph::algo::tarjan_scc(&graph);
    let mut comp_of = vec![usize::MAX; nodes.len()];
    for (c, scc) in sccs.iter().enumerate() {
        for n in scc {
            comp_of[n.index()] = c;
        }
    }
    let mut advanced = vec![0u64; sccs.len()];
    let mut has_edge = vec![false; sccs.len()];
    for &(u, v, mask) in &edges {
        if comp_of[u] == comp_of[v] {
            has_edge[comp_of[u]] = true;
            advanced[comp_of[u]] |= mask;
        }
    }
    let infinite_mask: u64 = (0..k)
        .filter(|&i| matches!(projections[i], ProjectedWord::Infinite(_)))
        .fold(0, |m, i| m | 1 << i);
    for (c, scc) in sccs.iter().enumerate() {
        if !has_edge[c] || advanced[c] & infinite_mask != infinite_mask {
            continue;
        }
        if !scc.iter().any(|&n| b.is_accepting(nodes[n.index()].0)) {
            continue;
        }
        // Finite trackers cannot advance inside a cycle, so their positions
        // are constant across the component; checking one node suffices.
        let sample = &nodes[scc[0].index()].1;
        let finite_done = (0..k).all(|i| match &projections[i] {
            ProjectedWord::Finite(x) => sample[i] as usize == x.len(),
            ProjectedWord::Infinite(_) => true,
        });
        if finite_done {
            return Ok(true);
        }
    }
    Ok(false)
}
