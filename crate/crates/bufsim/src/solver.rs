//! Max-parity game solving over explicit game graphs: a recursive
//! attractor-based solver and a progress-measure solver (kept independent so
//! they can cross-check each other), positional strategy extraction, and a
//! strategy verifier that searches for opponent-favoured lassos.
//!
//! Duplicator wins a play iff the maximal priority occurring infinitely
//! often is even. Dead ends lose for the player who owns them.

use std::collections::VecDeque;

use thiserror::Error;

use crate::gamegraph::Owner;

/// Minimal interface the solvers need: a finite graph with owned,
/// prioritized vertices and indexed out-edges.
pub trait GameGraph {
    fn vertex_count(&self) -> usize;
    fn owner(&self, v: usize) -> Owner;
    fn priority(&self, v: usize) -> u32;
    fn out_degree(&self, v: usize) -> usize;
    fn successor(&self, v: usize, edge: usize) -> usize;

    fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_
    where
        Self: Sized,
    {
        (0..self.out_degree(v)).map(move |e| self.successor(v, e))
    }
}

/// The player favoured by a priority occurring infinitely often.
pub fn priority_winner(p: u32) -> Owner {
    if p.is_multiple_of(2) {
        Owner::Duplicator
    } else {
        Owner::Spoiler
    }
}

/// A plain adjacency-list parity game, used by tests and random checking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitGame {
    owners: Vec<Owner>,
    priorities: Vec<u32>,
    successors: Vec<Vec<usize>>,
}

impl ExplicitGame {
    pub fn new(owners: Vec<Owner>, priorities: Vec<u32>, successors: Vec<Vec<usize>>) -> Self {
        assert_eq!(owners.len(), priorities.len());
        assert_eq!(owners.len(), successors.len());
        let n = owners.len();
        assert!(successors.iter().flatten().all(|&t| t < n));
        ExplicitGame {
            owners,
            priorities,
            successors,
        }
    }

    pub fn add_edge(&mut self, v: usize, target: usize) {
        assert!(target < self.owners.len());
        self.successors[v].push(target);
    }
}

impl GameGraph for ExplicitGame {
    fn vertex_count(&self) -> usize {
        self.owners.len()
    }

    fn owner(&self, v: usize) -> Owner {
        self.owners[v]
    }

    fn priority(&self, v: usize) -> u32 {
        self.priorities[v]
    }

    fn out_degree(&self, v: usize) -> usize {
        self.successors[v].len()
    }

    fn successor(&self, v: usize, edge: usize) -> usize {
        self.successors[v][edge]
    }
}

/// Winner of every vertex plus one positional strategy per player, defined
/// exactly on the vertices a player both owns and wins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    winners: Vec<Owner>,
    dup_strategy: Vec<Option<usize>>,
    sp_strategy: Vec<Option<usize>>,
}

impl Solution {
    fn new(n: usize) -> Self {
        Solution {
            winners: vec![Owner::Duplicator; n],
            dup_strategy: vec![None; n],
            sp_strategy: vec![None; n],
        }
    }

    pub fn winner(&self, v: usize) -> Owner {
        self.winners[v]
    }

    pub fn winners(&self) -> &[Owner] {
        &self.winners
    }

    pub fn strategy(&self, player: Owner) -> &[Option<usize>] {
        match player {
            Owner::Duplicator => &self.dup_strategy,
            Owner::Spoiler => &self.sp_strategy,
        }
    }

    fn strategy_mut(&mut self, player: Owner) -> &mut Vec<Option<usize>> {
        match player {
            Owner::Duplicator => &mut self.dup_strategy,
            Owner::Spoiler => &mut self.sp_strategy,
        }
    }

    pub fn region(&self, player: Owner) -> Vec<usize> {
        (0..self.winners.len())
            .filter(|&v| self.winners[v] == player)
            .collect()
    }

    /// One line per vertex: `id winner [strategy-edge]`, the edge given when
    /// the winner owns the vertex.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in 0..self.winners.len() {
            let w = self.winners[v];
            match self.strategy(w)[v] {
                Some(e) => out.push_str(&format!("{v} {w} {e}\n")),
                None => out.push_str(&format!("{v} {w}\n")),
            }
        }
        out
    }
}

/// `(source, edge index)` pairs per target vertex.
fn predecessors(game: &impl GameGraph) -> Vec<Vec<(u32, u32)>> {
    let mut pred = vec![Vec::new(); game.vertex_count()];
    for v in 0..game.vertex_count() {
        for e in 0..game.out_degree(v) {
            pred[game.successor(v, e)].push((v as u32, e as u32));
        }
    }
    pred
}

/// Computes the attractor of `player` towards `targets` within `alive`,
/// along with one witness edge per newly attracted player-owned vertex.
fn attractor(
    game: &impl GameGraph,
    pred: &[Vec<(u32, u32)>],
    alive: &[bool],
    player: Owner,
    targets: &[usize],
) -> (Vec<bool>, Vec<(usize, usize)>) {
    let n = game.vertex_count();
    let mut live_degree: Vec<u32> = vec![0; n];
    for (v, deg) in live_degree.iter_mut().enumerate() {
        if alive[v] {
            *deg = (0..game.out_degree(v))
                .filter(|&e| alive[game.successor(v, e)])
                .count() as u32;
        }
    }
    let mut in_attr = vec![false; n];
    let mut edges = Vec::new();
    let mut queue = VecDeque::new();
    for &t in targets {
        if alive[t] && !in_attr[t] {
            in_attr[t] = true;
            queue.push_back(t);
        }
    }
    while let Some(t) = queue.pop_front() {
        for &(u, e) in &pred[t] {
            let u = u as usize;
            if !alive[u] || in_attr[u] {
                continue;
            }
            if game.owner(u) == player {
                in_attr[u] = true;
                edges.push((u, e as usize));
                queue.push_back(u);
            } else {
                live_degree[u] -= 1;
                if live_degree[u] == 0 {
                    in_attr[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    (in_attr, edges)
}

fn zielonka_rec(
    game: &impl GameGraph,
    pred: &[Vec<(u32, u32)>],
    sol: &mut Solution,
    alive: &mut Vec<bool>,
) {
    let live: Vec<usize> = (0..game.vertex_count()).filter(|&v| alive[v]).collect();
    if live.is_empty() {
        return;
    }
    debug_assert!(
        live.iter()
            .all(|&v| (0..game.out_degree(v)).any(|e| alive[game.successor(v, e)])),
        "attractor removal must leave a total subgame"
    );
    let d = live.iter().map(|&v| game.priority(v)).max().unwrap();
    let sigma = priority_winner(d);
    let opp = sigma.opponent();
    let top: Vec<usize> = live
        .iter()
        .copied()
        .filter(|&v| game.priority(v) == d)
        .collect();
    let (in_a, edges_a) = attractor(game, pred, alive, sigma, &top);
    let a_set: Vec<usize> = live.iter().copied().filter(|&v| in_a[v]).collect();
    for &v in &a_set {
        alive[v] = false;
    }
    zielonka_rec(game, pred, sol, alive);
    let w_opp: Vec<usize> = live
        .iter()
        .copied()
        .filter(|&v| alive[v] && sol.winner(v) == opp)
        .collect();
    for &v in &a_set {
        alive[v] = true;
    }
    if w_opp.is_empty() {
        // σ keeps the opponent out everywhere: attract towards the top
        // priority and wander inside it.
        for &v in &a_set {
            sol.winners[v] = sigma;
            if game.owner(v) == opp {
                sol.strategy_mut(opp)[v] = None;
            }
        }
        for (v, e) in edges_a {
            sol.strategy_mut(sigma)[v] = Some(e);
        }
        for &v in &top {
            if game.owner(v) == sigma {
                let e = (0..game.out_degree(v))
                    .find(|&e| alive[game.successor(v, e)])
                    .expect("total subgame");
                sol.strategy_mut(sigma)[v] = Some(e);
            }
        }
    } else {
        // The opponent holds w_opp for good: no σ vertex outside the
        // attractor of the top priority can enter it, so the opponent's
        // subgame strategy still wins there. Solve the rest without the
        // opponent's extended region.
        let (in_b, edges_b) = attractor(game, pred, alive, opp, &w_opp);
        let b_set: Vec<usize> = live.iter().copied().filter(|&v| in_b[v]).collect();
        for &v in &b_set {
            alive[v] = false;
        }
        zielonka_rec(game, pred, sol, alive);
        for &v in &b_set {
            alive[v] = true;
        }
        for &v in &b_set {
            sol.winners[v] = opp;
            if game.owner(v) == sigma {
                sol.strategy_mut(sigma)[v] = None;
            }
        }
        // w_opp itself keeps the strategies from the inner solve; only the
        // newly attracted vertices need edges towards it.
        for (v, e) in edges_b {
            sol.strategy_mut(opp)[v] = Some(e);
        }
    }
}

/// Solves the game with the recursive attractor algorithm.
///
/// Dead ends are stripped up front: a dead end loses for its owner, so the
/// opposite player attracts towards it; the core recursion then runs on a
/// total subgame.
pub fn solve_zielonka(game: &impl GameGraph) -> Solution {
    let n = game.vertex_count();
    let pred = predecessors(game);
    let mut sol = Solution::new(n);
    let mut alive = vec![true; n];
    let spoiler_stuck: Vec<usize> = (0..n)
        .filter(|&v| game.out_degree(v) == 0 && game.owner(v) == Owner::Spoiler)
        .collect();
    let dup_stuck: Vec<usize> = (0..n)
        .filter(|&v| game.out_degree(v) == 0 && game.owner(v) == Owner::Duplicator)
        .collect();
    let (to_dup, dup_edges) = attractor(game, &pred, &alive, Owner::Duplicator, &spoiler_stuck);
    let (to_sp, sp_edges) = attractor(game, &pred, &alive, Owner::Spoiler, &dup_stuck);
    debug_assert!(
        (0..n).all(|v| !(to_dup[v] && to_sp[v])),
        "dead-end attractors must be disjoint"
    );
    for v in 0..n {
        if to_dup[v] {
            sol.winners[v] = Owner::Duplicator;
            alive[v] = false;
        } else if to_sp[v] {
            sol.winners[v] = Owner::Spoiler;
            alive[v] = false;
        }
    }
    for (v, e) in dup_edges {
        sol.dup_strategy[v] = Some(e);
    }
    for (v, e) in sp_edges {
        sol.sp_strategy[v] = Some(e);
    }
    zielonka_rec(game, &pred, &mut sol, &mut alive);
    sol
}

/// Small-progress-measure solve of one side.
///
/// Measures are vectors over the odd priorities (most significant first),
/// capped per component by the number of vertices of that priority, with an
/// absorbing top. The even side minimizes lifted successor measures, the
/// odd side maximizes; vertices that stabilize below top are won by the
/// even side. With `swap` every priority is shifted by one and Spoiler
/// plays the even role.
fn spm_even(game: &impl GameGraph, swap: bool) -> (Vec<bool>, Vec<Option<usize>>) {
    let n = game.vertex_count();
    let prio = |v: usize| game.priority(v) + swap as u32;
    let even_player = if swap {
        Owner::Spoiler
    } else {
        Owner::Duplicator
    };
    let d = (0..n).map(prio).max().unwrap_or(0);
    // Descending odd priorities; component j of a measure counts priority
    // odds[j].
    let odds: Vec<u32> = (1..=d).rev().filter(|p| p % 2 == 1).collect();
    let caps: Vec<u32> = odds
        .iter()
        .map(|&p| (0..n).filter(|&v| prio(v) == p).count() as u32)
        .collect();
    let bottom = vec![0u32; odds.len()];
    // None is the absorbing top.
    type Measure = Option<Vec<u32>>;
    let prefix_len = |p: u32| odds.iter().position(|&q| q < p).unwrap_or(odds.len());
    let prog = |m: &Measure, p: u32| -> Measure {
        let m = m.as_ref()?;
        let len = prefix_len(p);
        let mut out = bottom.clone();
        out[..len].copy_from_slice(&m[..len]);
        if p % 2 == 1 {
            // Strictly above m on the components ≥ p: bump the component of
            // p itself and carry leftward.
            let mut j = len;
            loop {
                j -= 1;
                out[j] += 1;
                if out[j] <= caps[j] {
                    break;
                }
                out[j] = 0;
                if j == 0 {
                    return None;
                }
            }
        }
        Some(out)
    };
    let less = |a: &Measure, b: &Measure| match (a, b) {
        (Some(x), Some(y)) => x < y,
        (Some(_), None) => true,
        (None, _) => false,
    };
    let lift = |rho: &[Measure], v: usize| -> Measure {
        let p = prio(v);
        let mut best: Option<Measure> = None;
        for e in 0..game.out_degree(v) {
            let cand = prog(&rho[game.successor(v, e)], p);
            best = Some(match best {
                None => cand,
                Some(cur) => {
                    let keep = if game.owner(v) == even_player {
                        !less(&cand, &cur)
                    } else {
                        less(&cand, &cur)
                    };
                    if keep {
                        cur
                    } else {
                        cand
                    }
                }
            });
        }
        match best {
            Some(m) => m,
            // Dead end: the even side has no move (top), the odd side is
            // stuck at bottom.
            None => {
                if game.owner(v) == even_player {
                    None
                } else {
                    Some(bottom.clone())
                }
            }
        }
    };

    let pred = predecessors(game);
    let mut rho: Vec<Measure> = vec![Some(bottom.clone()); n];
    let mut queued = vec![true; n];
    let mut queue: VecDeque<usize> = (0..n).collect();
    while let Some(v) = queue.pop_front() {
        queued[v] = false;
        let new = lift(&rho, v);
        if less(&rho[v], &new) {
            rho[v] = new;
            for &(u, _) in &pred[v] {
                let u = u as usize;
                if !queued[u] {
                    queued[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    let wins: Vec<bool> = rho.iter().map(|m| m.is_some()).collect();
    let mut strategy = vec![None; n];
    for v in 0..n {
        if !wins[v] || game.owner(v) != even_player {
            continue;
        }
        let p = prio(v);
        let mut best: Option<(Measure, usize)> = None;
        for e in 0..game.out_degree(v) {
            let cand = prog(&rho[game.successor(v, e)], p);
            let better = match &best {
                None => true,
                Some((cur, _)) => less(&cand, cur),
            };
            if better {
                best = Some((cand, e));
            }
        }
        strategy[v] = best.map(|(_, e)| e);
    }
    (wins, strategy)
}

/// Solves the game with small progress measures, both sides independently.
pub fn solve_spm(game: &impl GameGraph) -> Solution {
    let n = game.vertex_count();
    let (dup_wins, dup_strategy) = spm_even(game, false);
    let (sp_wins, sp_strategy) = spm_even(game, true);
    debug_assert!(
        (0..n).all(|v| dup_wins[v] != sp_wins[v]),
        "the two half-solves must partition the vertices"
    );
    Solution {
        winners: dup_wins
            .iter()
            .map(|&w| if w { Owner::Duplicator } else { Owner::Spoiler })
            .collect(),
        dup_strategy,
        sp_strategy,
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StrategyError {
    #[error("strategy at vertex {vertex} uses edge {edge}, but the out-degree is {degree}")]
    EdgeOutOfRange {
        vertex: usize,
        edge: usize,
        degree: usize,
    },
}

/// Checks that following `player`'s strategy from its claimed region never
/// lets the opponent force a win: no reachable play under the strategy may
/// hit a dead end owned by `player` or an opponent-favoured lasso.
///
/// Returns `Ok(false)` when the strategy is incomplete or loses somewhere;
/// errors only when a strategy edge does not exist in the graph.
pub fn verify_strategy(
    game: &impl GameGraph,
    sol: &Solution,
    player: Owner,
) -> Result<bool, StrategyError> {
    let n = game.vertex_count();
    let strategy = sol.strategy(player);
    let mut reach = vec![false; n];
    let mut restricted: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for (v, seen) in reach.iter_mut().enumerate() {
        if sol.winner(v) == player {
            *seen = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        let succs: Vec<usize> = if game.owner(v) == player {
            match strategy[v] {
                // A mandatory move without an instruction: the strategy
                // does not cover its own region (or a reachable dead end).
                None => return Ok(false),
                Some(e) => {
                    if e >= game.out_degree(v) {
                        return Err(StrategyError::EdgeOutOfRange {
                            vertex: v,
                            edge: e,
                            degree: game.out_degree(v),
                        });
                    }
                    vec![game.successor(v, e)]
                }
            }
        } else {
            // Opponent vertices contribute every move; an opponent dead end
            // is a win for `player` and simply stops the play.
            (0..game.out_degree(v))
                .map(|e| game.successor(v, e))
                .collect()
        };
        for &t in &succs {
            if !reach[t] {
                reach[t] = true;
                queue.push_back(t);
            }
        }
        restricted[v] = succs;
    }
    // Any lasso in the restricted graph whose maximal priority favours the
    // opponent refutes the strategy.
    let opponent = player.opponent();
    let max_p = (0..n).filter(|&v| reach[v]).map(|v| game.priority(v)).max();
    let Some(max_p) = max_p else {
        return Ok(true);
    };
    for p in (0..=max_p).filter(|&p| priority_winner(p) == opponent) {
        let mut graph = petgraph::graph::DiGraph::<usize, ()>::new();
        let mut node = vec![None; n];
        for v in 0..n {
            if reach[v] && game.priority(v) <= p {
                node[v] = Some(graph.add_node(v));
            }
        }
        for v in 0..n {
            let Some(nv) = node[v] else { continue };
            for &t in &restricted[v] {
                if let Some(nt) = node[t] {
                    graph.add_edge(nv, nt, ());
                }
            }
        }
        for scc in petgraph::algo::tarjan_scc(&graph) {
            let cyclic =
                scc.len() > 1 || graph.neighbors(scc[0]).any(|m| m == scc[0]);
            if cyclic && scc.iter().any(|&m| game.priority(graph[m]) == p) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
