//! Positions, moves and outcomes for the three game variants.
//!
//! A numeric game `PCG(m, R)` is played on positive integer heaps; a position
//! is predicate-losing when the heap product reduced mod `m` lies in `R`. In
//! unit mode (the default) every heap label must be coprime to `m`. A field
//! game is played on labels `1..q-1` of `GF(q)` and is predicate-losing when
//! the field product of the labelled elements is 1. A chain game is played on
//! its compressed numeric game `PCG(k, {1})`.
//!
//! Moves strictly decrease one heap and may never keep its residue mod the
//! game modulus (the null-move ban). Field labels are pairwise distinct
//! elements so the ban is automatic there.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chain_rsa::ChainSpec;
use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, FieldSpec};
use crate::number_theory::{gcd, mod_inverse, mul_mod, units, Residue};

/// `PCG(m, R)` over the integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NumericGame {
    m: u64,
    losing: BTreeSet<u64>,
    unit_mode: bool,
}

impl NumericGame {
    pub fn new(m: u64, losing: impl IntoIterator<Item = u64>, unit_mode: bool) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidSpec(format!(
                "modulus must be at least 2, got {m}"
            )));
        }
        let losing: BTreeSet<u64> = losing.into_iter().collect();
        if losing.is_empty() {
            return Err(Error::InvalidSpec("losing set is empty".into()));
        }
        for &r in &losing {
            if r == 0 || r >= m || gcd(r, m) != 1 {
                return Err(Error::InvalidSpec(format!(
                    "{r} is not a unit residue mod {m}"
                )));
            }
        }
        Ok(NumericGame {
            m,
            losing,
            unit_mode,
        })
    }

    /// Unit-mode `PCG(m, {1})`.
    pub fn mum(m: u64) -> Result<Self> {
        NumericGame::new(m, [1], true)
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn losing_set(&self) -> &BTreeSet<u64> {
        &self.losing
    }

    pub fn unit_mode(&self) -> bool {
        self.unit_mode
    }
}

/// The chain game, carried by its compressed numeric game.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChainGame {
    chain: ChainSpec,
    game: NumericGame,
}

impl ChainGame {
    pub fn new(chain: ChainSpec, unit_mode: bool) -> Result<Self> {
        let k = chain.order();
        if k < 2 {
            return Err(Error::DegenerateOrder(k));
        }
        let game = NumericGame::new(k, [1], unit_mode)?;
        Ok(ChainGame { chain, game })
    }

    pub fn chain(&self) -> &ChainSpec {
        &self.chain
    }

    pub fn compressed(&self) -> &NumericGame {
        &self.game
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGameSpec", into = "RawGameSpec")]
pub enum GameSpec {
    Numeric(NumericGame),
    Field(FieldSpec),
    Chain(ChainGame),
}

fn default_unit_mode() -> bool {
    true
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
enum RawGameSpec {
    Numeric {
        m: u64,
        losing: Vec<u64>,
        #[serde(default = "default_unit_mode")]
        unit_mode: bool,
    },
    Field(FieldSpec),
    Chain {
        #[serde(rename = "N")]
        modulus: u64,
        g: u64,
        #[serde(default = "default_unit_mode")]
        unit_mode: bool,
    },
}

impl TryFrom<RawGameSpec> for GameSpec {
    type Error = Error;
    fn try_from(raw: RawGameSpec) -> Result<Self> {
        match raw {
            RawGameSpec::Numeric {
                m,
                losing,
                unit_mode,
            } => Ok(GameSpec::Numeric(NumericGame::new(m, losing, unit_mode)?)),
            RawGameSpec::Field(f) => Ok(GameSpec::Field(f)),
            RawGameSpec::Chain {
                modulus,
                g,
                unit_mode,
            } => Ok(GameSpec::Chain(ChainGame::new(
                ChainSpec::new(modulus, g)?,
                unit_mode,
            )?)),
        }
    }
}

impl From<GameSpec> for RawGameSpec {
    fn from(spec: GameSpec) -> Self {
        match spec {
            GameSpec::Numeric(g) => RawGameSpec::Numeric {
                m: g.m,
                losing: g.losing.into_iter().collect(),
                unit_mode: g.unit_mode,
            },
            GameSpec::Field(f) => RawGameSpec::Field(f),
            GameSpec::Chain(c) => RawGameSpec::Chain {
                modulus: c.chain.modulus(),
                g: c.chain.generator(),
                unit_mode: c.game.unit_mode,
            },
        }
    }
}

/// Heap vector. Validity depends on the game, see [`GameSpec::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Position {
    pub heaps: Vec<u64>,
}

impl Position {
    pub fn new(heaps: impl Into<Vec<u64>>) -> Self {
        Position {
            heaps: heaps.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.heaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heaps.is_empty()
    }

    fn sorted(&self) -> Vec<u64> {
        let mut h = self.heaps.clone();
        h.sort_unstable();
        h
    }
}

impl From<Vec<u64>> for Position {
    fn from(heaps: Vec<u64>) -> Self {
        Position { heaps }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.heaps.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub heap_index: usize,
    pub new_value: u64,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "heap {} -> {}", self.heap_index, self.new_value)
    }
}

/// `P`: the player to move loses. `N`: the player to move wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    P,
    N,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::P => "P",
            Outcome::N => "N",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionTag {
    Threshold,
    Indeterminacy,
}

impl fmt::Display for RegionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionTag::Threshold => "Threshold",
            RegionTag::Indeterminacy => "Indeterminacy",
        })
    }
}

/// Value of the product invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvariantValue {
    Residue(Residue),
    Field(FieldElement),
}

/// A position together with the game it belongs to. This is the JSON shape
/// `{ "spec": {...}, "heaps": [...] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GamePosition {
    pub spec: GameSpec,
    pub heaps: Vec<u64>,
}

impl GamePosition {
    pub fn new(spec: GameSpec, position: Position) -> Result<Self> {
        spec.validate(&position)?;
        Ok(GamePosition {
            spec,
            heaps: position.heaps,
        })
    }

    pub fn position(&self) -> Position {
        Position::new(self.heaps.clone())
    }

    /// Disjunctive sum; both summands must be positions of the same game.
    pub fn sum(&self, other: &GamePosition) -> Result<GamePosition> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch);
        }
        let mut heaps = self.heaps.clone();
        heaps.extend_from_slice(&other.heaps);
        Ok(GamePosition {
            spec: self.spec.clone(),
            heaps,
        })
    }
}

impl GameSpec {
    pub fn numeric(m: u64, losing: impl IntoIterator<Item = u64>, unit_mode: bool) -> Result<Self> {
        Ok(GameSpec::Numeric(NumericGame::new(m, losing, unit_mode)?))
    }

    pub fn mum(m: u64) -> Result<Self> {
        Ok(GameSpec::Numeric(NumericGame::mum(m)?))
    }

    /// Numeric view: the game itself, or the compressed game of a chain.
    pub fn numeric_view(&self) -> Option<&NumericGame> {
        match self {
            GameSpec::Numeric(g) => Some(g),
            GameSpec::Chain(c) => Some(&c.game),
            GameSpec::Field(_) => None,
        }
    }

    /// Region boundary: `m`, `k`, or `q - 1` for fields.
    pub fn modulus(&self) -> u64 {
        match self {
            GameSpec::Field(f) => f.q() - 1,
            _ => self.numeric_view().expect("numeric").m,
        }
    }

    /// Losing set as labels of the invariant group.
    pub fn losing_labels(&self) -> BTreeSet<u64> {
        match self.numeric_view() {
            Some(g) => g.losing.clone(),
            None => BTreeSet::from([1]),
        }
    }

    pub fn has_singleton_losing_set(&self) -> bool {
        self.losing_labels().len() == 1
    }

    /// Whether the predicate value set is a group (all field games, unit-mode numeric games).
    pub fn is_unit_world(&self) -> bool {
        self.numeric_view().is_none_or(|g| g.unit_mode)
    }

    /// The all-minimal terminal must be predicate-losing for game-tree use.
    pub fn is_game_tree_consistent(&self) -> bool {
        self.losing_labels().contains(&1)
    }

    pub fn is_label(&self, v: u64) -> bool {
        match self {
            GameSpec::Field(f) => v >= 1 && v < f.q(),
            _ => {
                let g = self.numeric_view().expect("numeric");
                v >= 1 && (!g.unit_mode || gcd(v, g.m) == 1)
            }
        }
    }

    /// A single-heap step `from -> to` obeying the decrease rule and the null-move ban.
    pub fn is_legal_step(&self, from: u64, to: u64) -> bool {
        if to >= from || !self.is_label(to) {
            return false;
        }
        match self.numeric_view() {
            Some(g) => to % g.m != from % g.m,
            None => true,
        }
    }

    pub fn validate(&self, pos: &Position) -> Result<()> {
        if pos.heaps.is_empty() {
            return Err(Error::InvalidPosition("no heaps".into()));
        }
        for &h in &pos.heaps {
            if !self.is_label(h) {
                let why = match self {
                    GameSpec::Field(f) => format!("heap {h} outside [1, {}]", f.q() - 1),
                    _ if h == 0 => "heap 0".to_string(),
                    _ => format!("heap {h} is not coprime to {}", self.modulus()),
                };
                return Err(Error::InvalidPosition(why));
            }
        }
        Ok(())
    }

    /// Product of the group labels `a` and `b`.
    pub fn group_mul(&self, a: u64, b: u64) -> u64 {
        match self {
            GameSpec::Field(f) => f.mul_labels(a, b).expect("nonzero labels"),
            _ => mul_mod(a, b, self.modulus()),
        }
    }

    pub fn group_inv(&self, a: u64) -> Result<u64> {
        match self {
            GameSpec::Field(f) => Ok(f.inv_label(a)?),
            _ => Ok(mod_inverse(a, self.modulus())?),
        }
    }

    /// Labels of the invariant's value group, ascending.
    pub fn group_elements(&self) -> Vec<u64> {
        match self {
            GameSpec::Field(f) => (1..f.q()).collect(),
            _ => units(self.modulus()),
        }
    }

    /// Label of the heap's image in the value group (field label or residue).
    pub fn encode(&self, h: u64) -> u64 {
        match self {
            GameSpec::Field(_) => h,
            _ => h % self.modulus(),
        }
    }

    /// Invariant as a label: residue mod `m` / `k`, or field label.
    pub fn invariant_label(&self, heaps: &[u64]) -> u64 {
        match self {
            GameSpec::Field(f) => {
                let mut acc = f.one();
                for &h in heaps {
                    acc = f.fmul(&acc, &f.s_map(h).expect("valid label"));
                }
                f.c_map(&acc).expect("product of units")
            }
            _ => {
                let m = self.modulus();
                heaps.iter().fold(1 % m, |acc, &h| mul_mod(acc, h, m))
            }
        }
    }

    pub fn invariant(&self, pos: &Position) -> Result<InvariantValue> {
        self.validate(pos)?;
        let label = self.invariant_label(&pos.heaps);
        Ok(match self {
            GameSpec::Field(f) => InvariantValue::Field(f.s_map(label)?),
            _ => InvariantValue::Residue(Residue::new(label, self.modulus())?),
        })
    }

    pub fn is_losing_predicate(&self, pos: &Position) -> Result<bool> {
        self.validate(pos)?;
        Ok(self.predicate_on(&pos.heaps))
    }

    fn predicate_on(&self, heaps: &[u64]) -> bool {
        let label = self.invariant_label(heaps);
        match self.numeric_view() {
            Some(g) => g.losing.contains(&label),
            None => label == 1,
        }
    }

    pub fn legal_moves(&self, pos: &Position) -> Result<Vec<Move>> {
        self.validate(pos)?;
        let mut moves = Vec::new();
        for (heap_index, &h) in pos.heaps.iter().enumerate() {
            for v in 1..h {
                if self.is_legal_step(h, v) {
                    moves.push(Move {
                        heap_index,
                        new_value: v,
                    });
                }
            }
        }
        Ok(moves)
    }

    pub fn apply_move(&self, pos: &Position, mv: Move) -> Result<Position> {
        self.validate(pos)?;
        let illegal = Error::IllegalMove {
            heap_index: mv.heap_index,
            new_value: mv.new_value,
        };
        let &from = pos.heaps.get(mv.heap_index).ok_or(illegal.clone())?;
        if !self.is_legal_step(from, mv.new_value) {
            return Err(illegal);
        }
        let mut heaps = pos.heaps.clone();
        heaps[mv.heap_index] = mv.new_value;
        Ok(Position { heaps })
    }

    pub fn region(&self, pos: &Position) -> Result<RegionTag> {
        self.validate(pos)?;
        Ok(self.region_of(&pos.heaps))
    }

    pub(crate) fn region_of(&self, heaps: &[u64]) -> RegionTag {
        let in_threshold = match self {
            GameSpec::Field(f) => heaps.iter().any(|&h| h == f.q() - 1),
            _ => heaps.iter().any(|&h| h >= self.modulus()),
        };
        if in_threshold {
            RegionTag::Threshold
        } else {
            RegionTag::Indeterminacy
        }
    }

    /// One move from a non-losing position to a predicate-losing one.
    ///
    /// Defined for Threshold positions and for single-heap positions (the
    /// output of [`GameSpec::normalize`]). Numeric games take the smallest
    /// decrement over every eligible heap and losing residue, ties broken by
    /// the lowest heap index. Field games move the first heap equal to
    /// `q - 1` to `C(s(h_j) * phi^-1)`.
    pub fn repair_move(&self, pos: &Position) -> Result<Move> {
        self.validate(pos)?;
        if self.predicate_on(&pos.heaps) {
            return Err(Error::PreconditionViolated(
                "position is already losing".into(),
            ));
        }
        let region = self.region_of(&pos.heaps);
        if region == RegionTag::Indeterminacy && pos.heaps.len() != 1 {
            return Err(Error::PreconditionViolated(
                "repair needs a Threshold position or a single heap".into(),
            ));
        }
        match self {
            GameSpec::Field(f) => {
                let top = f.q() - 1;
                let j = match region {
                    RegionTag::Threshold => pos
                        .heaps
                        .iter()
                        .position(|&h| h == top)
                        .expect("threshold heap"),
                    RegionTag::Indeterminacy => 0,
                };
                let phi = self.invariant_label(&pos.heaps);
                let target = self.group_mul(pos.heaps[j], f.inv_label(phi)?);
                let mv = Move {
                    heap_index: j,
                    new_value: target,
                };
                if !self.is_legal_step(pos.heaps[j], target) {
                    return Err(Error::PreconditionViolated(format!("no repair from {pos}")));
                }
                Ok(mv)
            }
            _ => self.numeric_repair(pos, region),
        }
    }

    fn numeric_repair(&self, pos: &Position, region: RegionTag) -> Result<Move> {
        let game = self.numeric_view().expect("numeric");
        let m = game.m;
        let mut best: Option<(u64, usize)> = None;
        for (j, &h) in pos.heaps.iter().enumerate() {
            if region == RegionTag::Threshold && h < m {
                continue;
            }
            let cofactor = pos
                .heaps
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .fold(1 % m, |acc, (_, &t)| mul_mod(acc, t, m));
            let max_d = (m - 1).min(h - 1);
            let candidate = match mod_inverse(cofactor, m) {
                // t_j - d = C^{-1} r (mod m)
                Ok(cinv) => game
                    .losing
                    .iter()
                    .map(|&r| {
                        let target = mul_mod(cinv, r, m);
                        (h % m + m - target) % m
                    })
                    .filter(|&d| d >= 1 && d <= max_d && self.is_label(h - d))
                    .min(),
                // permissive mode with a non-unit cofactor: search the window
                Err(_) => (1..=max_d).find(|&d| {
                    self.is_label(h - d) && game.losing.contains(&mul_mod(cofactor, h - d, m))
                }),
            };
            if let Some(d) = candidate {
                if best.is_none_or(|(bd, _)| d < bd) {
                    best = Some((d, j));
                }
            }
        }
        match best {
            Some((d, j)) => Ok(Move {
                heap_index: j,
                new_value: pos.heaps[j] - d,
            }),
            None => Err(Error::PreconditionViolated(format!(
                "no repair move from {pos}"
            ))),
        }
    }

    /// Collapse to one heap carrying the same invariant.
    pub fn normalize(&self, pos: &Position) -> Result<Position> {
        self.validate(pos)?;
        let a = self.invariant_label(&pos.heaps);
        match self {
            GameSpec::Field(_) => Ok(Position::new(vec![a])),
            _ => {
                let m = self.modulus();
                if gcd(a, m) != 1 {
                    return Err(Error::ZeroInvariant);
                }
                // a in [1, m-1] is the least positive label of its class
                Ok(Position::new(vec![a]))
            }
        }
    }

    /// Outcome classifier: the invariant alone on Threshold positions when the
    /// losing set is a singleton, game-tree search everywhere else.
    pub fn outcome(&self, pos: &Position) -> Result<Outcome> {
        Solver::new(self.clone()).outcome(pos)
    }

    pub fn outcome_bruteforce(&self, pos: &Position) -> Result<Outcome> {
        Solver::new(self.clone()).outcome_bruteforce(pos)
    }
}

impl fmt::Display for GameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameSpec::Numeric(g) => {
                let r: Vec<String> = g.losing.iter().map(u64::to_string).collect();
                let mode = if g.unit_mode { "" } else { ", permissive" };
                write!(f, "PCG({}, {{{}}}{mode})", g.m, r.join(","))
            }
            GameSpec::Field(field) => write!(f, "poly-MuM over {field}"),
            GameSpec::Chain(c) => write!(
                f,
                "chain(N={}, g={}) ~ PCG({}, {{1}})",
                c.chain.modulus(),
                c.chain.generator(),
                c.game.m
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Largest heap value the search will expand.
    pub max_heap: u64,
    /// Largest memo table size.
    pub max_nodes: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_heap: 1 << 12,
            max_nodes: 20_000_000,
        }
    }
}

/// Memoized normal-play solver. Positions are stored sorted since the game
/// is symmetric in its heaps. The memo is owned by one solver; share a solver
/// across many queries on the same game to reuse work.
#[derive(Debug, Clone)]
pub struct Solver {
    spec: GameSpec,
    limits: SearchLimits,
    memo: HashMap<Vec<u64>, bool>,
}

impl Solver {
    pub fn new(spec: GameSpec) -> Self {
        Solver::with_limits(spec, SearchLimits::default())
    }

    pub fn with_limits(spec: GameSpec, limits: SearchLimits) -> Self {
        Solver {
            spec,
            limits,
            memo: HashMap::new(),
        }
    }

    pub fn spec(&self) -> &GameSpec {
        &self.spec
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Ground-truth game-tree outcome (terminal positions are `P`).
    pub fn outcome_bruteforce(&mut self, pos: &Position) -> Result<Outcome> {
        self.spec.validate(pos)?;
        if !self.spec.is_game_tree_consistent() {
            return Err(Error::PredicateOnly);
        }
        if let Some(&h) = pos.heaps.iter().find(|&&h| h > self.limits.max_heap) {
            return Err(Error::SearchBudgetExceeded(format!(
                "heap {h} above cap {}",
                self.limits.max_heap
            )));
        }
        let win = self.wins(pos.sorted())?;
        Ok(if win { Outcome::N } else { Outcome::P })
    }

    pub fn outcome(&mut self, pos: &Position) -> Result<Outcome> {
        self.spec.validate(pos)?;
        if self.spec.has_singleton_losing_set()
            && self.spec.region_of(&pos.heaps) == RegionTag::Threshold
        {
            return Ok(if self.spec.predicate_on(&pos.heaps) {
                Outcome::P
            } else {
                Outcome::N
            });
        }
        self.outcome_bruteforce(pos)
    }

    /// Child positions, sorted, deduplicated.
    pub(crate) fn children(spec: &GameSpec, heaps: &[u64]) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        for (j, &h) in heaps.iter().enumerate() {
            if j > 0 && heaps[j - 1] == h {
                continue;
            }
            for v in 1..h {
                if spec.is_legal_step(h, v) {
                    let mut child = heaps.to_vec();
                    child[j] = v;
                    child.sort_unstable();
                    out.push(child);
                }
            }
        }
        out
    }

    fn wins(&mut self, heaps: Vec<u64>) -> Result<bool> {
        if let Some(&w) = self.memo.get(&heaps) {
            return Ok(w);
        }
        if self.memo.len() >= self.limits.max_nodes {
            return Err(Error::SearchBudgetExceeded(format!(
                "{} nodes",
                self.limits.max_nodes
            )));
        }
        let mut win = false;
        for child in Solver::children(&self.spec, &heaps) {
            if !self.wins(child)? {
                win = true;
                break;
            }
        }
        self.memo.insert(heaps, win);
        Ok(win)
    }

    /// A move to a `P` position if one exists.
    pub fn winning_move(&mut self, pos: &Position) -> Result<Option<Move>> {
        for mv in self.spec.legal_moves(pos)? {
            let next = self.spec.apply_move(pos, mv)?;
            if self.outcome_bruteforce(&next)? == Outcome::P {
                return Ok(Some(mv));
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mum4() -> GameSpec {
        GameSpec::mum(4).unwrap()
    }

    fn gf8() -> GameSpec {
        GameSpec::Field(FieldSpec::from_bitmask(0b1011).unwrap())
    }

    fn pos(h: &[u64]) -> Position {
        Position::new(h.to_vec())
    }

    #[test]
    fn spec_validation() {
        assert!(GameSpec::numeric(1, [1], true).is_err());
        assert!(GameSpec::numeric(4, [], true).is_err());
        assert!(GameSpec::numeric(4, [2], true).is_err());
        assert!(GameSpec::numeric(4, [0], true).is_err());
        let inconsistent = GameSpec::numeric(5, [2], true).unwrap();
        assert!(!inconsistent.is_game_tree_consistent());
        assert_eq!(
            inconsistent.outcome_bruteforce(&pos(&[3])),
            Err(Error::PredicateOnly)
        );
        // predicate analysis still works
        assert_eq!(inconsistent.is_losing_predicate(&pos(&[2])), Ok(true));
    }

    #[test]
    fn position_validation() {
        assert!(mum4().validate(&pos(&[])).is_err());
        assert!(mum4().validate(&pos(&[2])).is_err());
        assert!(mum4().validate(&pos(&[0])).is_err());
        assert!(GameSpec::numeric(4, [1], false)
            .unwrap()
            .validate(&pos(&[2]))
            .is_ok());
        assert!(gf8().validate(&pos(&[8])).is_err());
        assert!(gf8().validate(&pos(&[7])).is_ok());
    }

    #[test]
    fn invariant_examples() {
        let spec = mum4();
        assert_eq!(
            spec.invariant(&pos(&[3, 3])).unwrap(),
            InvariantValue::Residue(Residue::new(1, 4).unwrap())
        );
        assert_eq!(spec.invariant_label(&[1, 1, 1]), 1);
        assert_eq!(gf8().invariant_label(&[1, 1]), 1);
        assert_eq!(gf8().invariant_label(&[2, 2]), 4);
    }

    #[test]
    fn predicate_examples() {
        let spec = mum4();
        assert_eq!(spec.is_losing_predicate(&pos(&[5, 1])), Ok(true));
        assert_eq!(spec.is_losing_predicate(&pos(&[3, 1])), Ok(false));
        let aes = GameSpec::Field(FieldSpec::aes());
        let f = FieldSpec::aes();
        for h in 1..256 {
            let partner = f.inv_label(h).unwrap();
            assert_eq!(aes.is_losing_predicate(&pos(&[h, partner])), Ok(true));
        }
    }

    #[test]
    fn legal_moves_examples() {
        let spec = mum4();
        assert_eq!(
            spec.legal_moves(&pos(&[5])).unwrap(),
            vec![Move {
                heap_index: 0,
                new_value: 3
            }]
        );
        assert!(spec.legal_moves(&pos(&[1, 1, 1])).unwrap().is_empty());
        let moves = gf8().legal_moves(&pos(&[7, 1])).unwrap();
        assert_eq!(moves.len(), 6);
        assert!(moves.iter().all(|m| m.heap_index == 0));
    }

    #[test]
    fn apply_move_examples() {
        let spec = mum4();
        let mv = |j, v| Move {
            heap_index: j,
            new_value: v,
        };
        assert_eq!(spec.apply_move(&pos(&[3, 3]), mv(0, 1)), Ok(pos(&[1, 3])));
        assert_eq!(spec.apply_move(&pos(&[5, 1]), mv(0, 3)), Ok(pos(&[3, 1])));
        assert_eq!(
            spec.apply_move(&pos(&[5, 1]), mv(0, 1)),
            Err(Error::IllegalMove {
                heap_index: 0,
                new_value: 1
            })
        );
        assert!(spec.apply_move(&pos(&[5, 1]), mv(2, 1)).is_err());
    }

    #[test]
    fn region_examples() {
        assert_eq!(mum4().region(&pos(&[5, 1])), Ok(RegionTag::Threshold));
        assert_eq!(mum4().region(&pos(&[3, 3])), Ok(RegionTag::Indeterminacy));
        assert_eq!(gf8().region(&pos(&[7, 2])), Ok(RegionTag::Threshold));
        assert_eq!(gf8().region(&pos(&[6, 2])), Ok(RegionTag::Indeterminacy));
    }

    #[test]
    fn repair_examples() {
        let spec = mum4();
        let mv = spec.repair_move(&pos(&[5, 3])).unwrap();
        assert_eq!(
            mv,
            Move {
                heap_index: 0,
                new_value: 3
            }
        );
        let after = spec.apply_move(&pos(&[5, 3]), mv).unwrap();
        assert_eq!(spec.is_losing_predicate(&after), Ok(true));
        assert!(matches!(
            spec.repair_move(&pos(&[5, 1])),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            GameSpec::mum(5).unwrap().repair_move(&pos(&[2, 2])),
            Err(Error::PreconditionViolated(_))
        ));

        let field = gf8();
        for h in 1..7 {
            let p = pos(&[7, h]);
            if field.is_losing_predicate(&p).unwrap() {
                continue;
            }
            let mv = field.repair_move(&p).unwrap();
            let after = field.apply_move(&p, mv).unwrap();
            assert_eq!(field.is_losing_predicate(&after), Ok(true), "from {p}");
        }
    }

    #[test]
    fn repair_tie_break_prefers_smallest_decrement() {
        let spec = GameSpec::numeric(5, [1, 4], true).unwrap();
        // 9 = 4 is already losing
        assert!(spec.repair_move(&pos(&[9, 1])).is_err());
        // heaps (7, 1): residue 2; targets 1 (d = 1) and 4 (d = 3)
        assert_eq!(
            spec.repair_move(&pos(&[7, 1])),
            Ok(Move {
                heap_index: 0,
                new_value: 6
            })
        );
        // two big heaps: (8, 6) = 3*1 = 3; heap 0 needs d in {2 (->6: 6*6=36=1), 4 (->4: 24=4)}
        // heap 1 (cofactor 3, inverse 2): targets 2, 3 -> d = 4, 3. best d = 2 on heap 0
        assert_eq!(
            spec.repair_move(&pos(&[8, 6])),
            Ok(Move {
                heap_index: 0,
                new_value: 6
            })
        );
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(mum4().normalize(&pos(&[3, 3])), Ok(pos(&[1])));
        assert_eq!(gf8().normalize(&pos(&[5])), Ok(pos(&[5])));
        assert_eq!(gf8().normalize(&pos(&[2, 2])), Ok(pos(&[4])));
        let permissive = GameSpec::numeric(4, [1], false).unwrap();
        assert_eq!(
            permissive.normalize(&pos(&[2, 3])),
            Err(Error::ZeroInvariant)
        );
        assert_eq!(permissive.normalize(&pos(&[5, 7])), Ok(pos(&[3])));
    }

    #[test]
    fn outcome_examples() {
        let spec = mum4();
        assert_eq!(spec.outcome_bruteforce(&pos(&[1, 1])), Ok(Outcome::P));
        assert_eq!(spec.outcome_bruteforce(&pos(&[3, 1])), Ok(Outcome::N));
        assert_eq!(spec.outcome_bruteforce(&pos(&[3, 3])), Ok(Outcome::P));
        assert_eq!(spec.outcome(&pos(&[5, 1])), Ok(Outcome::P));
        assert_eq!(spec.outcome(&pos(&[5, 3])), Ok(Outcome::N));
        for p in [[1u64, 3], [3, 3], [3, 1]] {
            assert_eq!(spec.outcome(&pos(&p)), spec.outcome_bruteforce(&pos(&p)));
        }
    }

    #[test]
    fn bruteforce_respects_limits() {
        let mut solver = Solver::with_limits(
            mum4(),
            SearchLimits {
                max_heap: 10,
                max_nodes: 100,
            },
        );
        assert!(matches!(
            solver.outcome_bruteforce(&pos(&[11])),
            Err(Error::SearchBudgetExceeded(_))
        ));
        let mut tiny = Solver::with_limits(
            mum4(),
            SearchLimits {
                max_heap: 100,
                max_nodes: 3,
            },
        );
        assert!(matches!(
            tiny.outcome_bruteforce(&pos(&[9, 9, 9])),
            Err(Error::SearchBudgetExceeded(_))
        ));
    }

    #[test]
    fn json_shape() {
        let gp = GamePosition::new(mum4(), pos(&[5, 1])).unwrap();
        let json = serde_json::to_string(&gp).unwrap();
        assert_eq!(
            json,
            r#"{"spec":{"variant":"numeric","m":4,"losing":[1],"unit_mode":true},"heaps":[5,1]}"#
        );
        let chain: GameSpec = serde_json::from_str(r#"{"variant":"chain","N":15,"g":2}"#).unwrap();
        assert_eq!(chain.modulus(), 4);
        let field: GameSpec =
            serde_json::from_str(r#"{"variant":"field","p":2,"n":3,"irreducible":[1,1,0,1]}"#)
                .unwrap();
        assert_eq!(field, gf8());
        assert!(
            serde_json::from_str::<GameSpec>(r#"{"variant":"numeric","m":4,"losing":[2]}"#)
                .is_err()
        );
    }

    #[test]
    fn sum_requires_same_game() {
        let a = GamePosition::new(mum4(), pos(&[5])).unwrap();
        let b = GamePosition::new(mum4(), pos(&[7, 3])).unwrap();
        assert_eq!(a.sum(&b).unwrap().heaps, vec![5, 7, 3]);
        let c = GamePosition::new(GameSpec::mum(5).unwrap(), pos(&[7])).unwrap();
        assert_eq!(a.sum(&c), Err(Error::SpecMismatch));
    }
}
