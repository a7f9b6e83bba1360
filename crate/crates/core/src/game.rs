//! Exhaustive Maker-Breaker solver and the checks built on it.
//!
//! Maker moves first. A position is a pair of claimed-vertex bitmasks; the
//! player to move follows from the claim counts. The search is a boolean
//! minimax with a transposition table keyed by both masks.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{closed_neighborhood_hypergraph, PredominatedGraph, Vertex};
use crate::hypergraph::{EdgeKey, Hypergraph};

/// Hard ceiling imposed by the 64-bit position masks.
pub const MAX_SOLVER_VERTICES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    Maker,
    Breaker,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Maker => Player::Breaker,
            Player::Breaker => Player::Maker,
        }
    }

    /// Name of the player in the domination game (Staller plays Maker).
    pub fn domination_role(self) -> &'static str {
        match self {
            Player::Maker => "Staller",
            Player::Breaker => "Dominator",
        }
    }
}

/// Claimed vertices of both players. Maker moves first, so Maker is to move
/// exactly when both players have claimed the same number of vertices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct GameState {
    maker_claimed: u64,
    breaker_claimed: u64,
}

impl GameState {
    pub fn new(maker_claimed: u64, breaker_claimed: u64) -> Result<Self> {
        if maker_claimed & breaker_claimed != 0 {
            return Err(Error::invalid("a vertex is claimed by both players"));
        }
        let diff = maker_claimed.count_ones() as i64 - breaker_claimed.count_ones() as i64;
        if diff != 0 && diff != 1 {
            return Err(Error::invalid(
                "claim counts inconsistent with Maker moving first",
            ));
        }
        Ok(GameState {
            maker_claimed,
            breaker_claimed,
        })
    }

    pub fn maker_claimed(&self) -> u64 {
        self.maker_claimed
    }

    pub fn breaker_claimed(&self) -> u64 {
        self.breaker_claimed
    }

    pub fn to_move(&self) -> Player {
        if self.maker_claimed.count_ones() == self.breaker_claimed.count_ones() {
            Player::Maker
        } else {
            Player::Breaker
        }
    }

    pub fn is_claimed(&self, v: Vertex) -> bool {
        (self.maker_claimed | self.breaker_claimed) >> v & 1 == 1
    }

    /// The position after the player to move claims `v`.
    pub fn claim(&self, v: Vertex) -> Result<GameState> {
        if v >= MAX_SOLVER_VERTICES || self.is_claimed(v) {
            return Err(Error::invalid(format!("vertex {v} is not available")));
        }
        let bit = 1u64 << v;
        Ok(match self.to_move() {
            Player::Maker => GameState {
                maker_claimed: self.maker_claimed | bit,
                ..*self
            },
            Player::Breaker => GameState {
                breaker_claimed: self.breaker_claimed | bit,
                ..*self
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub winner: Player,
    pub first_optimal_move: Option<Vertex>,
    pub nodes_expanded: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub vertex_limit: usize,
    /// Maximum number of cached positions before the older half is evicted.
    pub table_capacity: usize,
    pub double_threat: bool,
    pub pairing_shortcut: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            vertex_limit: 28,
            table_capacity: 1 << 22,
            double_threat: true,
            pairing_shortcut: true,
        }
    }
}

impl SolverConfig {
    /// No shortcuts: plain minimax with the transposition table.
    pub fn unpruned() -> Self {
        SolverConfig {
            double_threat: false,
            pairing_shortcut: false,
            ..SolverConfig::default()
        }
    }

    pub fn with_limit(limit: usize) -> Self {
        SolverConfig {
            vertex_limit: limit,
            ..SolverConfig::default()
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Solver {
    config: SolverConfig,
}

impl Solver {
    pub fn new(config: SolverConfig) -> Self {
        Solver { config }
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn solve(&self, h: &Hypergraph) -> Result<Verdict> {
        self.solve_from(h, GameState::default())
    }

    /// Solves the game from an arbitrary legal position.
    pub fn solve_from(&self, h: &Hypergraph, state: GameState) -> Result<Verdict> {
        let limit = self.config.vertex_limit.min(MAX_SOLVER_VERTICES);
        if h.n() > limit {
            return Err(Error::Capacity {
                what: "hypergraph vertex count",
                actual: h.n(),
                limit,
            });
        }
        let board = if h.n() == 64 { u64::MAX } else { (1u64 << h.n()) - 1 };
        if (state.maker_claimed | state.breaker_claimed) & !board != 0 {
            return Err(Error::invalid("position claims vertices outside the board"));
        }
        let mut search = Search::new(&self.config, h, state);
        Ok(search.root())
    }

    pub fn maker_wins(&self, h: &Hypergraph) -> Result<bool> {
        Ok(self.solve(h)?.winner == Player::Maker)
    }

    fn maker_wins_from(&self, h: &Hypergraph, state: GameState) -> Result<bool> {
        let mut search = Search::new(&self.config, h, state);
        Ok(search.value())
    }

    /// Maker wins on `h`, and Breaker wins once any single keyed edge is removed.
    pub fn is_critical(&self, h: &Hypergraph) -> Result<bool> {
        if !self.maker_wins(h)? {
            return Ok(false);
        }
        for key in h.keys() {
            if self.maker_wins(&h.without_edge(key))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Greedy reduction to a critical subhypergraph: scans keys in ascending
    /// order and drops each edge whose removal still leaves a Maker win.
    pub fn extract_critical_subhypergraph(&self, h: &Hypergraph) -> Result<Hypergraph> {
        if !self.maker_wins(h)? {
            return Err(Error::invalid(
                "critical subhypergraphs exist only for Maker-win games",
            ));
        }
        let mut current = h.clone();
        let keys: Vec<EdgeKey> = h.keys().cloned().collect();
        for key in keys {
            let candidate = current.without_edge(&key);
            if self.maker_wins(&candidate)? {
                current = candidate;
            }
        }
        Ok(current)
    }

    /// The domination game on `(G, D)` is the Maker-Breaker game on `N(G, D)`
    /// with Staller as Maker.
    pub fn staller_wins_game(&self, pg: &PredominatedGraph) -> Result<Verdict> {
        self.solve(&closed_neighborhood_hypergraph(pg))
    }

    pub fn staller_wins(&self, pg: &PredominatedGraph) -> Result<bool> {
        Ok(self.staller_wins_game(pg)?.winner == Player::Maker)
    }

    /// Staller wins on `(G, D)` but Dominator wins on `(G, D + v)` for every `v` outside `D`.
    pub fn is_mbd_critical(&self, pg: &PredominatedGraph) -> Result<bool> {
        self.is_critical(&closed_neighborhood_hypergraph(pg))
    }

    /// Brute-force Dominator-criticality: `D` nonempty, Dominator wins on
    /// `(G, D)`, and Staller wins on `(G, D - v)` for every `v` in `D`.
    pub fn is_dominator_critical_game(&self, pg: &PredominatedGraph) -> Result<bool> {
        let d = pg.predominated();
        if d.is_empty() {
            return Err(Error::invalid(
                "Dominator-criticality requires a nonempty predominated set",
            ));
        }
        if self.staller_wins(pg)? {
            return Ok(false);
        }
        for v in d {
            if !self.staller_wins(&pg.with_predominated(v, false))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn solve(h: &Hypergraph) -> Result<Verdict> {
    Solver::default().solve(h)
}

pub fn maker_wins(h: &Hypergraph) -> Result<bool> {
    Solver::default().maker_wins(h)
}

pub fn is_critical(h: &Hypergraph) -> Result<bool> {
    Solver::default().is_critical(h)
}

pub fn extract_critical_subhypergraph(h: &Hypergraph) -> Result<Hypergraph> {
    Solver::default().extract_critical_subhypergraph(h)
}

pub fn staller_wins_game(pg: &PredominatedGraph) -> Result<Verdict> {
    Solver::default().staller_wins_game(pg)
}

pub fn is_mbd_critical(pg: &PredominatedGraph) -> Result<bool> {
    Solver::default().is_mbd_critical(pg)
}

pub fn is_dominator_critical_game(pg: &PredominatedGraph) -> Result<bool> {
    Solver::default().is_dominator_critical_game(pg)
}

/// Whether Maker wins from `state` (either player to move).
pub fn maker_wins_from(h: &Hypergraph, state: GameState) -> Result<bool> {
    let solver = Solver::default();
    if h.n() > MAX_SOLVER_VERTICES {
        return Err(Error::Capacity {
            what: "hypergraph vertex count",
            actual: h.n(),
            limit: MAX_SOLVER_VERTICES,
        });
    }
    solver.maker_wins_from(h, state)
}

/// Disjoint vertex pairs for a Breaker pairing strategy.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingCertificate {
    pub pairs: Vec<(Vertex, Vertex)>,
}

impl PairingCertificate {
    pub fn new(pairs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Self {
        let mut pairs: Vec<_> = pairs.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort_unstable();
        PairingCertificate { pairs }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairingCheck {
    /// Pairs are disjoint and every edge contains one of them: Breaker,
    /// moving second, wins by always answering inside the pair.
    Valid,
    /// Malformed certificate: a vertex occurs in two pairs or twice in one.
    Overlapping { vertex: Vertex },
    /// Well-formed, but this edge contains no complete pair.
    Uncovered { key: EdgeKey },
}

pub fn check_pairing(h: &Hypergraph, cert: &PairingCertificate) -> PairingCheck {
    let mut partner: HashMap<Vertex, Vertex> = HashMap::new();
    for &(a, b) in &cert.pairs {
        for v in [a, b] {
            if partner.contains_key(&v) || a == b {
                return PairingCheck::Overlapping { vertex: v };
            }
        }
        partner.insert(a, b);
        partner.insert(b, a);
    }
    for (key, edge) in h.edges() {
        let covered = edge.iter().any(|v| {
            partner
                .get(v)
                .is_some_and(|p| edge.binary_search(p).is_ok())
        });
        if !covered {
            return PairingCheck::Uncovered { key: key.clone() };
        }
    }
    PairingCheck::Valid
}

pub fn validate_pairing(h: &Hypergraph, cert: &PairingCertificate) -> bool {
    check_pairing(h, cert) == PairingCheck::Valid
}

#[derive(Default)]
struct MixHasher(u64);

impl Hasher for MixHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(b as u64);
        }
    }

    fn write_u64(&mut self, x: u64) {
        self.0 = (self.0.rotate_left(5) ^ x).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    }

    fn write_u128(&mut self, x: u128) {
        self.write_u64(x as u64);
        self.write_u64((x >> 64) as u64);
    }
}

type PositionMap = HashMap<u128, bool, BuildHasherDefault<MixHasher>>;

/// Bounded cache of solved positions. Two generations: when the current one
/// fills up it becomes the previous one and the old previous is dropped, so
/// recently used entries survive (hits in the old generation are promoted).
struct Table {
    capacity: usize,
    current: PositionMap,
    previous: PositionMap,
}

impl Table {
    fn new(capacity: usize) -> Self {
        Table {
            capacity: capacity.max(2),
            current: PositionMap::default(),
            previous: PositionMap::default(),
        }
    }

    fn get(&mut self, key: u128) -> Option<bool> {
        if let Some(&v) = self.current.get(&key) {
            return Some(v);
        }
        let v = self.previous.remove(&key)?;
        self.insert(key, v);
        Some(v)
    }

    fn insert(&mut self, key: u128, value: bool) {
        if self.current.len() >= self.capacity / 2 {
            self.previous = std::mem::take(&mut self.current);
        }
        self.current.insert(key, value);
    }
}

struct Search<'a> {
    config: &'a SolverConfig,
    n: usize,
    edges: Vec<u64>,
    incident: Vec<Vec<u32>>,
    /// Per edge: vertices not yet claimed by Maker.
    need: Vec<u32>,
    /// Per edge: vertices claimed by Breaker. An edge is live while this is 0.
    hit: Vec<u32>,
    /// Per vertex: live edges containing it.
    live_degree: Vec<u32>,
    live_edges: u32,
    /// Live edges missing exactly one vertex.
    threats: u32,
    /// Live edges fully claimed by Maker.
    completed: u32,
    maker: u64,
    breaker: u64,
    table: Table,
    nodes: u64,
}

impl<'a> Search<'a> {
    fn new(config: &'a SolverConfig, h: &Hypergraph, state: GameState) -> Self {
        let n = h.n();
        let edges: Vec<u64> = h
            .edges()
            .map(|(_, e)| e.iter().fold(0u64, |m, &v| m | 1 << v))
            .collect();
        let mut incident = vec![Vec::new(); n];
        let mut live_degree = vec![0u32; n];
        for (i, &m) in edges.iter().enumerate() {
            for v in bits(m) {
                incident[v].push(i as u32);
                live_degree[v] += 1;
            }
        }
        let need: Vec<u32> = edges.iter().map(|m| m.count_ones()).collect();
        let threats = need.iter().filter(|&&k| k == 1).count() as u32;
        let mut search = Search {
            config,
            n,
            hit: vec![0; edges.len()],
            live_edges: edges.len() as u32,
            edges,
            incident,
            need,
            live_degree,
            threats,
            completed: 0,
            maker: 0,
            breaker: 0,
            table: Table::new(config.table_capacity),
            nodes: 0,
        };
        for v in bits(state.maker_claimed) {
            search.claim_maker(v);
        }
        for v in bits(state.breaker_claimed) {
            search.claim_breaker(v);
        }
        search
    }

    fn maker_to_move(&self) -> bool {
        self.maker.count_ones() == self.breaker.count_ones()
    }

    fn free(&self) -> u64 {
        let board = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        board & !(self.maker | self.breaker)
    }

    fn claim_maker(&mut self, v: Vertex) {
        self.maker |= 1 << v;
        for &e in &self.incident[v] {
            let e = e as usize;
            self.need[e] -= 1;
            if self.hit[e] == 0 {
                match self.need[e] {
                    1 => self.threats += 1,
                    0 => {
                        self.threats -= 1;
                        self.completed += 1;
                    }
                    _ => {}
                }
            }
        }
    }

    fn unclaim_maker(&mut self, v: Vertex) {
        self.maker &= !(1 << v);
        for &e in &self.incident[v] {
            let e = e as usize;
            self.need[e] += 1;
            if self.hit[e] == 0 {
                match self.need[e] {
                    1 => {
                        self.completed -= 1;
                        self.threats += 1;
                    }
                    2 => self.threats -= 1,
                    _ => {}
                }
            }
        }
    }

    fn claim_breaker(&mut self, v: Vertex) {
        self.breaker |= 1 << v;
        for i in 0..self.incident[v].len() {
            let e = self.incident[v][i] as usize;
            self.hit[e] += 1;
            if self.hit[e] == 1 {
                self.live_edges -= 1;
                match self.need[e] {
                    1 => self.threats -= 1,
                    0 => self.completed -= 1,
                    _ => {}
                }
                for u in bits(self.edges[e]) {
                    self.live_degree[u] -= 1;
                }
            }
        }
    }

    fn unclaim_breaker(&mut self, v: Vertex) {
        self.breaker &= !(1 << v);
        for i in 0..self.incident[v].len() {
            let e = self.incident[v][i] as usize;
            self.hit[e] -= 1;
            if self.hit[e] == 0 {
                self.live_edges += 1;
                match self.need[e] {
                    1 => self.threats += 1,
                    0 => self.completed += 1,
                    _ => {}
                }
                for u in bits(self.edges[e]) {
                    self.live_degree[u] += 1;
                }
            }
        }
    }

    fn play(&mut self, v: Vertex, maker: bool) -> bool {
        if maker {
            self.claim_maker(v);
        } else {
            self.claim_breaker(v);
        }
        let value = self.value();
        if maker {
            self.unclaim_maker(v);
        } else {
            self.unclaim_breaker(v);
        }
        value
    }

    /// Terminal outcome, if the game is already decided.
    fn decided(&self) -> Option<bool> {
        if self.completed > 0 {
            Some(true)
        } else if self.live_edges == 0 {
            Some(false)
        } else {
            None
        }
    }

    fn root(&mut self) -> Verdict {
        self.nodes += 1;
        let to_move = if self.maker_to_move() {
            Player::Maker
        } else {
            Player::Breaker
        };
        if let Some(maker_won) = self.decided() {
            return Verdict {
                winner: if maker_won { Player::Maker } else { Player::Breaker },
                first_optimal_move: None,
                nodes_expanded: self.nodes,
            };
        }
        let maker = to_move == Player::Maker;
        let mut found = None;
        for v in bits(self.free()) {
            let maker_wins = self.play(v, maker);
            if maker_wins == maker {
                found = Some(v);
                break;
            }
        }
        let winner = match (found, to_move) {
            (Some(_), p) => p,
            (None, p) => p.opponent(),
        };
        Verdict {
            winner,
            first_optimal_move: found,
            nodes_expanded: self.nodes,
        }
    }

    /// Whether Maker wins from the current position.
    fn value(&mut self) -> bool {
        self.nodes += 1;
        if let Some(v) = self.decided() {
            return v;
        }
        let maker = self.maker_to_move();
        if maker && self.threats > 0 {
            return true;
        }
        let key = (self.maker as u128) << 64 | self.breaker as u128;
        if let Some(v) = self.table.get(key) {
            return v;
        }
        let value = if maker {
            self.maker_turn()
        } else {
            self.breaker_turn()
        };
        self.table.insert(key, value);
        value
    }

    fn maker_turn(&mut self) -> bool {
        if self.config.pairing_shortcut && self.pairing_blocks_all() {
            return false;
        }
        let mut moves = [0u8; 64];
        let count = self.ordered_moves(&mut moves);
        for &v in &moves[..count] {
            if self.play(v as usize, true) {
                return true;
            }
        }
        false
    }

    fn breaker_turn(&mut self) -> bool {
        if self.config.double_threat && self.threats > 0 {
            let mut missing = 0u64;
            for (e, &m) in self.edges.iter().enumerate() {
                if self.hit[e] == 0 && self.need[e] == 1 {
                    missing |= m & !self.maker;
                }
            }
            if missing.count_ones() >= 2 {
                return true;
            }
            // the single blocking move is forced
            let v = missing.trailing_zeros() as usize;
            return self.play(v, false);
        }
        let mut moves = [0u8; 64];
        let count = self.ordered_moves(&mut moves);
        for &v in &moves[..count] {
            if !self.play(v as usize, false) {
                return false;
            }
        }
        true
    }

    /// Free vertices on live edges, by descending live degree then ascending id.
    /// Claiming a vertex outside every live edge is never better than passing,
    /// so those vertices are skipped.
    fn ordered_moves(&self, out: &mut [u8; 64]) -> usize {
        let mut count = 0;
        for v in bits(self.free()) {
            if self.live_degree[v] > 0 {
                out[count] = v as u8;
                count += 1;
            }
        }
        let deg = &self.live_degree;
        out[..count].sort_unstable_by_key(|&v| (std::cmp::Reverse(deg[v as usize]), v));
        count
    }

    /// Greedy search for disjoint free pairs such that every live edge contains
    /// one; if found, Breaker (to move second) wins by answering in pairs.
    fn pairing_blocks_all(&self) -> bool {
        let mut residual: [u64; 64] = [0; 64];
        let mut count = 0;
        for (e, &m) in self.edges.iter().enumerate() {
            if self.hit[e] == 0 {
                if count == residual.len() {
                    return false;
                }
                residual[count] = m & !self.maker;
                count += 1;
            }
        }
        let residual = &mut residual[..count];
        residual.sort_unstable_by_key(|m| (m.count_ones(), *m));
        let mut used = 0u64;
        let mut pairs: [u64; 32] = [0; 32];
        let mut pair_count = 0;
        for &m in residual.iter() {
            if pairs[..pair_count].iter().any(|&p| p & !m == 0) {
                continue;
            }
            let open = m & !used;
            if open.count_ones() < 2 || pair_count == pairs.len() {
                return false;
            }
            let a = open & open.wrapping_neg();
            let rest = open & !a;
            let b = rest & rest.wrapping_neg();
            pairs[pair_count] = a | b;
            pair_count += 1;
            used |= a | b;
        }
        true
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = Vertex> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}
