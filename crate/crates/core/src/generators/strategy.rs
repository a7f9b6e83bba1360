//! Staller's cut-vertex strategy on generated members `(H, V∖X(H))`.
//!
//! Staller keeps a "live" part of `H`, initially all of it, in which nobody
//! has claimed anything. If the live part is a single black vertex whose
//! neighbors she already owns, she claims it and completes its closed
//! neighborhood. Otherwise she claims the lowest-id white cut vertex of the
//! live part that splits it into exactly two parts; the live part becomes
//! the one Dominator did not answer in (the part with the lower least vertex
//! if he answered in neither).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{GameState, Player, Solver};
use crate::graph::{closed_neighborhood_hypergraph, Graph, PredominatedGraph, Vertex};

use super::cactus::CactusBuild;

const MAX_STRATEGY_VERTICES: usize = 64;

#[derive(Clone, Debug)]
pub struct StallerStrategy {
    graph: Graph,
    black: u64,
}

/// One strategy decision: the move, and the two parts it leaves when it is a
/// cut move (`None` for the final winning move).
type Decision = (Vertex, Option<(u64, u64)>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Position {
    live: u64,
    staller: u64,
    dominator: u64,
}

impl StallerStrategy {
    pub fn new(graph: &Graph, fixed_degree: &[Vertex]) -> Result<Self> {
        if graph.n() == 0 || graph.n() > MAX_STRATEGY_VERTICES {
            return Err(Error::Capacity {
                what: "strategy graph vertex count (must be 1..=64)",
                actual: graph.n(),
                limit: MAX_STRATEGY_VERTICES,
            });
        }
        let mut black = 0u64;
        for &x in fixed_degree {
            if x >= graph.n() {
                return Err(Error::invalid(format!("vertex {x} out of range")));
            }
            black |= 1 << x;
        }
        Ok(StallerStrategy {
            graph: graph.clone(),
            black,
        })
    }

    pub fn from_build(build: &CactusBuild) -> Self {
        StallerStrategy::new(&build.graph, &build.fixed_degree).expect("generated members are small")
    }

    fn full(&self) -> u64 {
        if self.graph.n() == 64 {
            u64::MAX
        } else {
            (1u64 << self.graph.n()) - 1
        }
    }

    fn neighbor_mask(&self, v: Vertex) -> u64 {
        self.graph.neighbors(v).iter().fold(0, |m, &w| m | 1 << w)
    }

    /// Components of the subgraph induced by `mask`.
    fn parts(&self, mask: u64) -> Vec<u64> {
        let mut rest = mask;
        let mut out = Vec::new();
        while rest != 0 {
            let start = rest & rest.wrapping_neg();
            let mut comp = start;
            let mut frontier = start;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let fresh = self.neighbor_mask(v) & mask & !comp;
                comp |= fresh;
                frontier |= fresh;
            }
            out.push(comp);
            rest &= !comp;
        }
        out
    }

    fn decide(&self, pos: &Position) -> Option<Decision> {
        let live = pos.live;
        if live.count_ones() == 1 {
            let v = live.trailing_zeros() as usize;
            let nbrs = self.neighbor_mask(v);
            if self.black >> v & 1 == 1 && nbrs & !pos.staller == 0 {
                return Some((v, None));
            }
        }
        let mut whites = live & !self.black;
        while whites != 0 {
            let w = whites.trailing_zeros() as usize;
            whites &= whites - 1;
            let parts = self.parts(live & !(1 << w));
            if let [a, b] = parts[..] {
                return Some((w, Some((a, b))));
            }
        }
        None
    }

    /// Replays `transcript` (Staller's moves at even positions, Dominator's at
    /// odd ones), checking Staller's moves are the strategy's.
    fn replay(&self, transcript: &[Vertex]) -> Result<Position> {
        let mut pos = Position {
            live: self.full(),
            staller: 0,
            dominator: 0,
        };
        let mut parts: Option<(u64, u64)> = None;
        for (i, &m) in transcript.iter().enumerate() {
            if m >= self.graph.n() || (pos.staller | pos.dominator) >> m & 1 == 1 {
                return Err(Error::invalid(format!("move {i} claims unavailable vertex {m}")));
            }
            if i % 2 == 0 {
                let (expected, split) = self
                    .decide(&pos)
                    .ok_or_else(|| Error::invalid("strategy has no move in this position"))?;
                if expected != m {
                    return Err(Error::invalid(format!(
                        "move {i} is {m}, but the strategy plays {expected}"
                    )));
                }
                pos.staller |= 1 << m;
                parts = split;
                if split.is_none() && i + 1 < transcript.len() {
                    return Err(Error::invalid("transcript continues after Staller's win"));
                }
            } else {
                pos.dominator |= 1 << m;
                let (a, b) = parts.expect("Dominator answers a cut move");
                pos.live = if a >> m & 1 == 1 { b } else { a };
            }
        }
        Ok(pos)
    }

    /// Staller's next move after a transcript of complete rounds.
    pub fn next_move(&self, transcript: &[Vertex]) -> Result<Vertex> {
        if transcript.len() % 2 == 1 {
            return Err(Error::invalid("it is Dominator's turn"));
        }
        let pos = self.replay(transcript)?;
        self.decide(&pos)
            .map(|(m, _)| m)
            .ok_or_else(|| Error::invalid("strategy has no move in this position"))
    }

    /// Staller owns `N[v]` for some black `v`.
    fn staller_won(&self, staller: u64) -> bool {
        let mut black = self.black;
        while black != 0 {
            let v = black.trailing_zeros() as usize;
            black &= black - 1;
            let closed = self.neighbor_mask(v) | 1 << v;
            if closed & !staller == 0 {
                return true;
            }
        }
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyCheck {
    /// Complete games explored.
    pub lines: u64,
    /// Longest explored game, in moves.
    pub longest_game: usize,
    /// A game Staller did not win, if any.
    pub failure: Option<Vec<Vertex>>,
}

impl StrategyCheck {
    pub fn is_winning(&self) -> bool {
        self.failure.is_none()
    }
}

/// Plays the strategy against every Dominator reply class. The strategy
/// depends only on the live part and Staller's own claims, and Dominator's
/// claims always lie outside the live part, so replies inside the same part
/// (or all replies outside both parts) lead to identical continuations; one
/// representative per class (its lowest id) covers every Dominator strategy.
pub fn verify_staller_strategy(strategy: &StallerStrategy) -> StrategyCheck {
    let mut check = StrategyCheck {
        lines: 0,
        longest_game: 0,
        failure: None,
    };
    let mut transcript = Vec::new();
    explore(strategy, &mut transcript, &mut check);
    check
}

fn explore(s: &StallerStrategy, transcript: &mut Vec<Vertex>, check: &mut StrategyCheck) {
    if check.failure.is_some() {
        return;
    }
    let pos = s.replay(transcript).expect("explored transcripts follow the strategy");
    let Some((m, split)) = s.decide(&pos) else {
        check.lines += 1;
        check.failure = Some(transcript.clone());
        return;
    };
    transcript.push(m);
    let staller = pos.staller | 1 << m;
    if s.staller_won(staller) {
        check.lines += 1;
        check.longest_game = check.longest_game.max(transcript.len());
    } else if let Some((a, b)) = split {
        let free = s.full() & !(staller | pos.dominator);
        let outside = free & !(a | b);
        let mut replies = vec![a.trailing_zeros() as usize, b.trailing_zeros() as usize];
        if outside != 0 {
            replies.push(outside.trailing_zeros() as usize);
        }
        for d in replies {
            transcript.push(d);
            explore(s, transcript, check);
            transcript.pop();
        }
    } else {
        check.lines += 1;
        check.failure = Some(transcript.clone());
    }
    transcript.pop();
}

/// Plays the strategy against a solver-driven Dominator on `(H, V∖X(H))`:
/// Dominator plays his lowest-id winning move whenever one exists, and
/// otherwise blocks an open threat or takes the lowest free vertex. Returns
/// the transcript and whether Staller won.
pub fn play_against_solver(
    strategy: &StallerStrategy,
    solver: &Solver,
) -> Result<(bool, Vec<Vertex>)> {
    let whites: Vec<Vertex> = (0..strategy.graph.n())
        .filter(|&v| strategy.black >> v & 1 == 0)
        .collect();
    let pg = PredominatedGraph::new(strategy.graph.clone(), whites)?;
    let h = closed_neighborhood_hypergraph(&pg);
    let mut transcript = Vec::new();
    let mut state = GameState::default();
    loop {
        let m = strategy.next_move(&transcript)?;
        transcript.push(m);
        state = state.claim(m)?;
        if strategy.staller_won(state.maker_claimed()) {
            return Ok((true, transcript));
        }
        let free = strategy.full() & !(state.maker_claimed() | state.breaker_claimed());
        if free == 0 {
            return Ok((false, transcript));
        }
        let verdict = solver.solve_from(&h, state)?;
        let d = match (verdict.winner, verdict.first_optimal_move) {
            (Player::Breaker, Some(d)) => d,
            _ => threat_block(strategy, state.maker_claimed(), free)
                .unwrap_or(free.trailing_zeros() as usize),
        };
        transcript.push(d);
        state = state.claim(d)?;
    }
}

/// The missing vertex of a black closed neighborhood Staller is one move
/// from completing, if any.
fn threat_block(s: &StallerStrategy, staller: u64, free: u64) -> Option<Vertex> {
    (0..s.graph.n())
        .filter(|&v| s.black >> v & 1 == 1)
        .map(|v| (s.neighbor_mask(v) | 1 << v) & !staller)
        .find(|missing| missing.count_ones() == 1 && missing & free != 0)
        .map(|m| m.trailing_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::cactus::{apply_replacements, Family, ReplacementPlan};
    use crate::tree::Substructure;

    #[test]
    fn p3_strategy() {
        let s = StallerStrategy::new(&Graph::path(3), &[0, 2]).unwrap();
        assert_eq!(s.next_move(&[]).unwrap(), 1);
        assert_eq!(s.next_move(&[1, 0]).unwrap(), 2);
        assert_eq!(s.next_move(&[1, 2]).unwrap(), 0);
        assert!(s.next_move(&[0, 1]).is_err());
        let check = verify_staller_strategy(&s);
        assert!(check.is_winning());
        assert_eq!(check.longest_game, 3);
        let (won, t) = play_against_solver(&s, &Solver::default()).unwrap();
        assert!(won);
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn p1_strategy() {
        let s = StallerStrategy::new(&Graph::empty(1), &[0]).unwrap();
        assert_eq!(s.next_move(&[]).unwrap(), 0);
        assert!(verify_staller_strategy(&s).is_winning());
    }

    #[test]
    fn losing_position_is_reported() {
        // P2 with one black vertex is not a member: no white cut vertex exists
        let s = StallerStrategy::new(&Graph::path(2), &[0]).unwrap();
        assert!(!verify_staller_strategy(&s).is_winning());
    }

    #[test]
    fn cactus_strategy() {
        let p3 = Substructure::new([0, 1, 2], [(0, 1), (1, 2)], [0, 2]);
        let plan = ReplacementPlan::parse("(((0 1) 3 3))").unwrap();
        let h = apply_replacements(&p3, &plan, Family::C).unwrap();
        let s = StallerStrategy::from_build(&h);
        assert!(verify_staller_strategy(&s).is_winning());
        assert!(play_against_solver(&s, &Solver::default()).unwrap().0);
    }
}
