//! Two games whose move operation is aligned with their invariant, and a
//! generic checker for the alignment condition.
//!
//! In the additive game a move subtracts from one heap and the invariant is
//! the heap sum mod `m`; in the divisor game a move replaces one heap by a
//! proper divisor and the invariant is the heap product mod `m`. Once one
//! heap's move images generate the invariant's target group, that heap alone
//! steers the invariant anywhere.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game_core::Outcome;
use crate::number_theory::{divisors, gcd, mod_inverse, mul_mod, units};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditiveGameSpec {
    m: u64,
    s: u64,
}

impl AdditiveGameSpec {
    pub fn new(m: u64, s: u64) -> Result<Self> {
        if m < 2 || s >= m {
            return Err(Error::InvalidSpec(format!(
                "need m >= 2 and s < m, got m={m}, s={s}"
            )));
        }
        Ok(AdditiveGameSpec { m, s })
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn losing_residue(&self) -> u64 {
        self.s
    }

    pub fn is_losing(&self, heaps: &[u64]) -> bool {
        heaps.iter().sum::<u64>() % self.m == self.s
    }

    /// The all-ones terminal satisfies the predicate only when `n = s (mod m)`.
    pub fn is_game_tree_consistent(&self, n: usize) -> bool {
        n as u64 % self.m == self.s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorGameSpec {
    m: u64,
}

impl DivisorGameSpec {
    pub fn new(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidSpec(format!("need m >= 2, got {m}")));
        }
        Ok(DivisorGameSpec { m })
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditiveReach {
    /// Sum residues reachable by one move on the chosen heap.
    pub reachable: BTreeSet<u64>,
    /// `reachable` together with the current residue is all of `Z/mZ`.
    pub covers_all: bool,
}

pub fn additive_reach_check(
    spec: &AdditiveGameSpec,
    heaps: &[u64],
    j: usize,
) -> Result<AdditiveReach> {
    let m = spec.m;
    let &t = heaps
        .get(j)
        .ok_or_else(|| Error::InvalidPosition(format!("no heap {j}")))?;
    if t < m {
        return Err(Error::PreconditionViolated(format!(
            "heap {j} = {t} is below m = {m}"
        )));
    }
    let sum = heaps.iter().sum::<u64>() % m;
    let reachable: BTreeSet<u64> = (1..m)
        .filter(|&d| t - d >= 1)
        .map(|d| (sum + m - d) % m)
        .collect();
    let covers_all = reachable.len() as u64 + u64::from(!reachable.contains(&sum)) == m;
    Ok(AdditiveReach {
        reachable,
        covers_all,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutcomeMode {
    GameTree,
    PredicateOnly,
}

/// Normal-play outcome of the additive game (moves: any smaller positive
/// value on one heap). When the terminal is not predicate-losing the game
/// tree cannot agree with the predicate, so the predicate verdict is returned
/// and flagged.
pub fn additive_outcome(spec: &AdditiveGameSpec, heaps: &[u64]) -> Result<(Outcome, OutcomeMode)> {
    if heaps.is_empty() || heaps.contains(&0) {
        return Err(Error::InvalidPosition("heaps must be positive".into()));
    }
    if !spec.is_game_tree_consistent(heaps.len()) {
        let o = if spec.is_losing(heaps) {
            Outcome::P
        } else {
            Outcome::N
        };
        return Ok((o, OutcomeMode::PredicateOnly));
    }
    if heaps.iter().any(|&h| h > 512) {
        return Err(Error::SearchBudgetExceeded(
            "additive heaps above 512".into(),
        ));
    }
    let mut memo = HashMap::new();
    let mut sorted = heaps.to_vec();
    sorted.sort_unstable();
    let win = additive_wins(sorted, &mut memo);
    Ok((
        if win { Outcome::N } else { Outcome::P },
        OutcomeMode::GameTree,
    ))
}

fn additive_wins(heaps: Vec<u64>, memo: &mut HashMap<Vec<u64>, bool>) -> bool {
    if let Some(&w) = memo.get(&heaps) {
        return w;
    }
    let mut win = false;
    'outer: for j in 0..heaps.len() {
        for v in 1..heaps[j] {
            let mut child = heaps.clone();
            child[j] = v;
            child.sort_unstable();
            if !additive_wins(child, memo) {
                win = true;
                break 'outer;
            }
        }
    }
    memo.insert(heaps, win);
    win
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorUnits {
    pub units: BTreeSet<u64>,
    /// Proper divisors skipped because they share a factor with `m`.
    pub discarded_non_units: usize,
}

/// `{ d * t^-1 mod m : d | t, d < t, gcd(d, m) = 1 }`.
pub fn divisor_move_units(t: u64, m: u64) -> Result<DivisorUnits> {
    if m < 2 {
        return Err(Error::InvalidSpec(format!("need m >= 2, got {m}")));
    }
    if t == 0 {
        return Err(Error::InvalidPosition("heap 0".into()));
    }
    let t_inv = mod_inverse(t, m)?;
    let mut set = BTreeSet::new();
    let mut discarded_non_units = 0;
    for d in divisors(t)?.into_iter().filter(|&d| d < t) {
        if gcd(d, m) == 1 {
            set.insert(mul_mod(d % m, t_inv, m));
        } else {
            discarded_non_units += 1;
        }
    }
    Ok(DivisorUnits {
        units: set,
        discarded_non_units,
    })
}

/// Subgroup of `(Z/mZ)^x` generated by `subset` (always contains 1).
pub fn generated_subgroup(subset: &BTreeSet<u64>, m: u64) -> BTreeSet<u64> {
    let mut closure = BTreeSet::from([1 % m]);
    let mut frontier = vec![1 % m];
    while let Some(x) = frontier.pop() {
        for &g in subset {
            let y = mul_mod(x, g, m);
            if closure.insert(y) {
                frontier.push(y);
            }
        }
    }
    closure
}

pub fn generates_group(subset: &BTreeSet<u64>, m: u64) -> bool {
    let group = units(m);
    let group = if m == 2 { vec![1] } else { group };
    generated_subgroup(subset, m).len() == group.len()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub t: u64,
    pub coprime: bool,
    pub generated_subgroup_order: usize,
    pub generates: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub m: u64,
    pub start: u64,
    pub bound: u64,
    pub rows: Vec<ScanRow>,
}

impl ScanReport {
    /// Coprime `t` whose divisor-move units do not generate the group.
    pub fn failures(&self) -> Vec<u64> {
        self.rows
            .iter()
            .filter(|r| r.coprime && !r.generates)
            .map(|r| r.t)
            .collect()
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Checks the divisor-collapse hypothesis for every `t` in `[start, bound]`.
pub fn alignment_hypothesis_scan(m: u64, start: u64, bound: u64) -> Result<ScanReport> {
    if start == 0 || bound < start {
        return Err(Error::PreconditionViolated(format!(
            "need 1 <= M <= bound, got {start}..{bound}"
        )));
    }
    let mut rows = Vec::new();
    for t in start..=bound {
        if gcd(t, m) != 1 {
            rows.push(ScanRow {
                t,
                coprime: false,
                generated_subgroup_order: 0,
                generates: false,
            });
            continue;
        }
        let set = divisor_move_units(t, m)?.units;
        let order = generated_subgroup(&set, m).len();
        rows.push(ScanRow {
            t,
            coprime: true,
            generated_subgroup_order: order,
            generates: generates_group(&set, m),
        });
    }
    Ok(ScanReport {
        m,
        start,
        bound,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorCollapse {
    /// Multipliers of the aggregate product available to repeated moves on
    /// heap `j`: the move semigroup generated by the one-move units.
    pub reachable_units: BTreeSet<u64>,
    pub transitive: bool,
    /// Multipliers reachable by an actual chain of divisor moves
    /// `t -> d1 -> d2 -> ...` on the heap (only divisors of `t` ever appear).
    pub literal_reachable: BTreeSet<u64>,
    pub literally_transitive: bool,
}

pub fn divisor_collapse_check(
    spec: &DivisorGameSpec,
    heaps: &[u64],
    j: usize,
) -> Result<DivisorCollapse> {
    let m = spec.m;
    let &t = heaps
        .get(j)
        .ok_or_else(|| Error::InvalidPosition(format!("no heap {j}")))?;
    let one_move = divisor_move_units(t, m)?.units;
    let reachable_units = if one_move.is_empty() {
        BTreeSet::new()
    } else {
        generated_subgroup(&one_move, m)
    };

    // walk divisor chains from t
    let t_inv = mod_inverse(t, m)?;
    let mut seen = BTreeSet::from([t]);
    let mut frontier = vec![t];
    let mut literal_reachable = BTreeSet::new();
    while let Some(x) = frontier.pop() {
        for d in divisors(x)?
            .into_iter()
            .filter(|&d| d < x && gcd(d, m) == 1)
        {
            if seen.insert(d) {
                literal_reachable.insert(mul_mod(d % m, t_inv, m));
                frontier.push(d);
            }
        }
    }

    let group_size = if m == 2 { 1 } else { units(m).len() };
    Ok(DivisorCollapse {
        transitive: group_size == 1 || reachable_units.len() == group_size,
        literally_transitive: group_size == 1 || literal_reachable.len() == group_size,
        reachable_units,
        literal_reachable,
    })
}

/// A finite monoid given by its Cayley table, elements `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMonoid {
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl FiniteMonoid {
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::MalformedTable("empty table".into()));
        }
        if let Some(i) = table.iter().position(|row| row.len() != n) {
            return Err(Error::MalformedTable(format!(
                "row {i} has the wrong length"
            )));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::MalformedTable("entry out of range".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::MalformedTable("no identity element".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::MalformedTable(format!(
                            "not associative at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteMonoid { table, identity })
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// `Z/mZ` under addition.
    pub fn cyclic_additive(m: usize) -> Self {
        let table = (0..m)
            .map(|a| (0..m).map(|b| (a + b) % m).collect())
            .collect();
        FiniteMonoid::new(table).expect("cyclic group")
    }

    /// `(Z/mZ)^x` with elements indexed by ascending residue; returns the residues too.
    pub fn unit_group(m: u64) -> (Self, Vec<u64>) {
        let elems = if m == 2 { vec![1] } else { units(m) };
        let pos: HashMap<u64, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let table = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| pos[&mul_mod(a, b, m)]).collect())
            .collect();
        (FiniteMonoid::new(table).expect("unit group"), elems)
    }

    /// Submonoid generated by `subset`.
    pub fn generated(&self, subset: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut closure = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in subset {
                let y = self.op(x, g);
                if closure.insert(y) {
                    frontier.push(y);
                }
            }
        }
        closure
    }
}

/// Whether every element outside `kernel` has a one-heap move image that
/// generates the whole monoid.
pub fn alignment_principle_check<K: Ord>(
    move_image: &BTreeMap<K, BTreeSet<usize>>,
    monoid: &FiniteMonoid,
    kernel: &BTreeSet<K>,
) -> Result<bool> {
    if move_image.values().flatten().any(|&q| q >= monoid.len()) {
        return Err(Error::MalformedTable(
            "move image outside the monoid".into(),
        ));
    }
    if monoid.len() == 1 {
        return Ok(true);
    }
    Ok(move_image
        .iter()
        .filter(|(x, _)| !kernel.contains(x))
        .all(|(_, image)| monoid.generated(image).len() == monoid.len()))
}

/// Move images per heap, the target monoid, and the kernel heaps.
pub type AlignmentInstance = (BTreeMap<u64, BTreeSet<usize>>, FiniteMonoid, BTreeSet<u64>);

/// Additive game instance: heap `x` moves by `-d`, `1 <= d <= min(m-1, x-1)`,
/// kernel `[1, m-1]`.
pub fn additive_alignment_instance(m: u64, max_heap: u64) -> AlignmentInstance {
    let monoid = FiniteMonoid::cyclic_additive(m as usize);
    let image = (1..=max_heap)
        .map(|x| {
            let shifts = (1..m)
                .filter(|&d| d < x)
                .map(|d| ((m - d) % m) as usize)
                .collect();
            (x, shifts)
        })
        .collect();
    let kernel = (1..m).collect();
    (image, monoid, kernel)
}

/// Divisor game instance on coprime heaps in `[1, bound]`, kernel `t < start`.
pub fn divisor_alignment_instance(m: u64, start: u64, bound: u64) -> Result<AlignmentInstance> {
    let (monoid, elems) = FiniteMonoid::unit_group(m);
    let pos: HashMap<u64, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut image = BTreeMap::new();
    for t in (1..=bound).filter(|&t| gcd(t, m) == 1) {
        let set = divisor_move_units(t, m)?
            .units
            .iter()
            .map(|u| pos[&(u % m.max(2))])
            .collect();
        image.insert(t, set);
    }
    let kernel = (1..start).collect();
    Ok((image, monoid, kernel))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn additive_reach_examples() {
        let spec = AdditiveGameSpec::new(5, 0).unwrap();
        let r = additive_reach_check(&spec, &[7, 2], 0).unwrap();
        assert!(r.covers_all);
        assert_eq!(r.reachable.len(), 4);
        let two = AdditiveGameSpec::new(2, 0).unwrap();
        assert!(additive_reach_check(&two, &[2], 0).unwrap().covers_all);
        assert!(matches!(
            additive_reach_check(&spec, &[4, 2], 0),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(AdditiveGameSpec::new(3, 3).is_err());
    }

    #[test]
    fn additive_outcome_modes() {
        let spec = AdditiveGameSpec::new(3, 0).unwrap();
        // terminal (1,1) has sum 2, not 0: predicate-only
        assert_eq!(
            additive_outcome(&spec, &[1, 2]),
            Ok((Outcome::P, OutcomeMode::PredicateOnly))
        );
        let two = AdditiveGameSpec::new(2, 0).unwrap();
        assert!(two.is_losing(&[1, 1]));
        assert_eq!(
            additive_outcome(&two, &[1, 1]),
            Ok((Outcome::P, OutcomeMode::GameTree))
        );
    }

    #[test]
    fn additive_game_tree_is_nim() {
        // heaps behave like Nim heaps of size t - 1
        let spec = AdditiveGameSpec::new(5, 2).unwrap();
        for a in 1..=12u64 {
            for b in 1..=12u64 {
                let (o, mode) = additive_outcome(&spec, &[a, b]).unwrap();
                assert_eq!(mode, OutcomeMode::GameTree);
                let nim = if (a - 1) ^ (b - 1) == 0 {
                    Outcome::P
                } else {
                    Outcome::N
                };
                assert_eq!(o, nim, "({a},{b})");
            }
        }
        // so a heap >= m with a false predicate can still be P: (5,5) sums to 0, not 2
        assert!(!spec.is_losing(&[5, 5]));
        assert_eq!(additive_outcome(&spec, &[5, 5]).unwrap().0, Outcome::P);
    }

    #[test]
    fn divisor_units_examples() {
        assert_eq!(
            divisor_move_units(9, 4).unwrap().units,
            BTreeSet::from([1, 3])
        );
        // prime t: only divisor 1
        assert_eq!(
            divisor_move_units(7, 5).unwrap().units,
            BTreeSet::from([mod_inverse(7, 5).unwrap()])
        );
        assert!(matches!(
            divisor_move_units(4, 2),
            Err(Error::NumberTheory(_))
        ));
        let r = divisor_move_units(12, 5).unwrap();
        assert_eq!(r.discarded_non_units, 0);
        let r = divisor_move_units(25, 6).unwrap();
        assert_eq!(r.units.len(), 2);
        let r = divisor_move_units(35, 5);
        assert!(r.is_err());
        let r = divisor_move_units(21, 9).unwrap_err();
        assert!(matches!(r, Error::NumberTheory(_)));
        let r = divisor_move_units(35, 7);
        assert!(r.is_err());
        // 15 mod 4: divisors 1, 3, 5 all units
        assert_eq!(divisor_move_units(15, 4).unwrap().discarded_non_units, 0);
        // 45 mod 8 is a unit, divisors 1,3,5,9,15 are units too
        assert_eq!(divisor_move_units(45, 8).unwrap().discarded_non_units, 0);
    }

    #[test]
    fn non_unit_divisors_are_counted() {
        // 10 is not coprime to 4, so pick m = 9 with t = 10: divisors 1, 2, 5 all coprime to 9
        assert_eq!(divisor_move_units(10, 9).unwrap().discarded_non_units, 0);
        // t = 14, m = 21: gcd(14, 21) = 7, not allowed
        assert!(divisor_move_units(14, 21).is_err());
        // t = 25, m = 10: divisor 5 shares a factor... but t itself does too; use m = 15, t = 4
        // no divisor of a unit can share a factor with m, so the count is always 0
        for t in 1..200u64 {
            if gcd(t, 12) == 1 {
                assert_eq!(divisor_move_units(t, 12).unwrap().discarded_non_units, 0);
            }
        }
    }

    #[test]
    fn generation_examples() {
        assert!(!generates_group(&BTreeSet::from([1]), 5));
        assert!(generates_group(&BTreeSet::from([2]), 5));
        assert!(generates_group(&BTreeSet::from([3]), 4));
        assert!(generates_group(&BTreeSet::new(), 2));
    }

    #[test]
    fn scan_examples() {
        let scan = alignment_hypothesis_scan(5, 2, 100).unwrap();
        assert_eq!(scan.rows.len(), 99);
        let scan2 = alignment_hypothesis_scan(2, 1, 50).unwrap();
        assert!(scan2.failures().is_empty());
        let scan4 = alignment_hypothesis_scan(4, 2, 100).unwrap();
        for p in [5u64, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97] {
            assert!(scan4.failures().contains(&p), "{p}");
        }
        let mut buf = Vec::new();
        scan4.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,coprime,generated_subgroup_order,generates\n2,false,0,false\n"));
    }

    #[test]
    fn collapse_examples() {
        let spec = DivisorGameSpec::new(5).unwrap();
        let r = divisor_collapse_check(&spec, &[32, 3], 0).unwrap();
        assert!(r.transitive);
        assert!(r.literally_transitive);
        let r = divisor_collapse_check(&spec, &[1, 3], 0).unwrap();
        assert!(r.reachable_units.is_empty());
        assert!(!r.transitive);
        let two = DivisorGameSpec::new(2).unwrap();
        assert!(divisor_collapse_check(&two, &[9], 0).unwrap().transitive);
        // t = 2 mod 5: one move multiplies by 3, a generator, yet only divisor 1 is reachable
        let r = divisor_collapse_check(&spec, &[2], 0).unwrap();
        assert!(r.transitive);
        assert!(!r.literally_transitive);
        assert_eq!(r.literal_reachable, BTreeSet::from([3]));
    }

    #[test]
    fn monoid_validation() {
        assert!(FiniteMonoid::new(vec![]).is_err());
        assert!(FiniteMonoid::new(vec![vec![0, 1], vec![1]]).is_err());
        assert!(FiniteMonoid::new(vec![vec![0, 2], vec![1, 0]]).is_err());
        // no identity
        assert!(FiniteMonoid::new(vec![vec![1, 1], vec![1, 1]]).is_err());
        assert_eq!(FiniteMonoid::cyclic_additive(6).len(), 6);
    }

    #[test]
    fn principle_instances() {
        let (image, monoid, kernel) = additive_alignment_instance(6, 30);
        assert_eq!(
            alignment_principle_check(&image, &monoid, &kernel),
            Ok(true)
        );

        let (image, monoid, kernel) = divisor_alignment_instance(4, 2, 40).unwrap();
        // 5 and 13 are primes = 1 mod 4
        assert_eq!(
            alignment_principle_check(&image, &monoid, &kernel),
            Ok(false)
        );

        let trivial = FiniteMonoid::new(vec![vec![0]]).unwrap();
        let empty: BTreeMap<u64, BTreeSet<usize>> = BTreeMap::from([(1, BTreeSet::new())]);
        assert_eq!(
            alignment_principle_check(&empty, &trivial, &BTreeSet::new()),
            Ok(true)
        );

        let bad: BTreeMap<u64, BTreeSet<usize>> = BTreeMap::from([(1, BTreeSet::from([9]))]);
        assert!(alignment_principle_check(&bad, &monoid, &BTreeSet::new()).is_err());
    }
}
