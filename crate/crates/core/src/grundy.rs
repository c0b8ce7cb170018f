//! Sprague-Grundy machinery.
//!
//! Two notions of value live here. [`grundy_standard`] is the classical mex
//! recursion over the naturals. [`product_sg`] is the residue-indexed value
//! carried by Threshold positions: the invariant itself, placed on a fixed
//! indexing of the value group with the identity at index 0. The single-hole
//! and multiplicativity checkers value every option by its invariant, also
//! options that fall back into the Indeterminacy Region; such options are
//! counted as boundary cases so that any violation there can be told apart.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game_core::{GameSpec, Position, RegionTag, SearchLimits, Solver};

/// Fixed bijection from the value group onto `0..|G|`, ascending by label so
/// that the identity (label 1) gets index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SgIndexing {
    elements: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl SgIndexing {
    pub fn canonical(spec: &GameSpec) -> Self {
        let elements = spec.group_elements();
        let index = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        SgIndexing { elements, index }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn value_of(&self, element: u64) -> Option<SgValue> {
        self.index
            .get(&element)
            .map(|&idx| SgValue { idx, element })
    }

    pub fn value_at(&self, idx: usize) -> Option<SgValue> {
        self.elements
            .get(idx)
            .map(|&element| SgValue { idx, element })
    }

    pub fn domain(&self) -> BTreeSet<SgValue> {
        (0..self.len()).filter_map(|i| self.value_at(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SgValue {
    pub idx: usize,
    pub element: u64,
}

fn require_product_sg(spec: &GameSpec, pos: &Position) -> Result<()> {
    spec.validate(pos)?;
    if spec.losing_labels() != BTreeSet::from([1]) {
        return Err(Error::UnsupportedLosingSet);
    }
    if spec.region(pos)? != RegionTag::Threshold {
        return Err(Error::WrongRegion);
    }
    Ok(())
}

fn value_of_heaps(spec: &GameSpec, heaps: &[u64], indexing: &SgIndexing) -> Result<SgValue> {
    let label = spec.invariant_label(heaps);
    indexing
        .value_of(label)
        .ok_or_else(|| Error::PreconditionViolated(format!("invariant {label} is not a unit")))
}

pub fn product_sg(spec: &GameSpec, pos: &Position, indexing: &SgIndexing) -> Result<SgValue> {
    require_product_sg(spec, pos)?;
    value_of_heaps(spec, &pos.heaps, indexing)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptionValues {
    pub values: BTreeSet<SgValue>,
    pub total_options: usize,
    /// Options that lie in the Indeterminacy Region.
    pub boundary_options: usize,
}

pub fn option_value_set(
    spec: &GameSpec,
    pos: &Position,
    indexing: &SgIndexing,
) -> Result<OptionValues> {
    require_product_sg(spec, pos)?;
    let mut values = BTreeSet::new();
    let mut boundary_options = 0;
    let moves = spec.legal_moves(pos)?;
    for mv in &moves {
        let next = spec.apply_move(pos, *mv)?;
        if spec.region(&next)? == RegionTag::Indeterminacy {
            boundary_options += 1;
        }
        values.insert(value_of_heaps(spec, &next.heaps, indexing)?);
    }
    Ok(OptionValues {
        values,
        total_options: moves.len(),
        boundary_options,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingleHole {
    pub holds: bool,
    pub own: SgValue,
    pub missing: BTreeSet<SgValue>,
    pub boundary_options: usize,
}

/// Holds when the option values are the whole domain minus the position's own value.
pub fn single_hole_check(
    spec: &GameSpec,
    pos: &Position,
    indexing: &SgIndexing,
) -> Result<SingleHole> {
    let own = product_sg(spec, pos, indexing)?;
    let opts = option_value_set(spec, pos, indexing)?;
    let missing: BTreeSet<SgValue> = indexing
        .domain()
        .difference(&opts.values)
        .copied()
        .collect();
    Ok(SingleHole {
        holds: missing.len() == 1 && missing.contains(&own),
        own,
        missing,
        boundary_options: opts.boundary_options,
    })
}

/// Smallest-index value of the domain absent from `values`.
pub fn indexed_mex(values: &BTreeSet<SgValue>, indexing: &SgIndexing) -> Result<SgValue> {
    (0..indexing.len())
        .find(|&i| !values.iter().any(|v| v.idx == i))
        .and_then(|i| indexing.value_at(i))
        .ok_or(Error::DomainExhausted)
}

/// Classical Grundy values with a shared memo.
#[derive(Debug, Clone)]
pub struct GrundySolver {
    spec: GameSpec,
    limits: SearchLimits,
    memo: HashMap<Vec<u64>, u64>,
}

impl GrundySolver {
    pub fn new(spec: GameSpec) -> Self {
        GrundySolver {
            spec,
            limits: SearchLimits::default(),
            memo: HashMap::new(),
        }
    }

    pub fn with_limits(spec: GameSpec, limits: SearchLimits) -> Self {
        GrundySolver {
            spec,
            limits,
            memo: HashMap::new(),
        }
    }

    pub fn grundy(&mut self, pos: &Position) -> Result<u64> {
        self.spec.validate(pos)?;
        if let Some(&h) = pos.heaps.iter().find(|&&h| h > self.limits.max_heap) {
            return Err(Error::SearchBudgetExceeded(format!(
                "heap {h} above cap {}",
                self.limits.max_heap
            )));
        }
        let mut heaps = pos.heaps.clone();
        heaps.sort_unstable();
        self.value(heaps)
    }

    fn value(&mut self, heaps: Vec<u64>) -> Result<u64> {
        if let Some(&g) = self.memo.get(&heaps) {
            return Ok(g);
        }
        if self.memo.len() >= self.limits.max_nodes {
            return Err(Error::SearchBudgetExceeded(format!(
                "{} nodes",
                self.limits.max_nodes
            )));
        }
        let mut seen = BTreeSet::new();
        for child in Solver::children(&self.spec, &heaps) {
            seen.insert(self.value(child)?);
        }
        let g = (0..).find(|v| !seen.contains(v)).expect("unbounded");
        self.memo.insert(heaps, g);
        Ok(g)
    }
}

pub fn grundy_standard(spec: &GameSpec, pos: &Position) -> Result<u64> {
    GrundySolver::new(spec.clone()).grundy(pos)
}

/// Classical Grundy values of every label vector in `[1, bound]^n` (sorted
/// vectors only, since heaps commute).
pub fn grundy_table(spec: &GameSpec, n: usize, bound: u64) -> Result<Vec<(Position, u64)>> {
    let labels: Vec<u64> = (1..=bound).filter(|&v| spec.is_label(v)).collect();
    let mut solver = GrundySolver::new(spec.clone());
    let mut rows = Vec::new();
    for heaps in sorted_vectors(&labels, n) {
        let pos = Position::new(heaps);
        let g = solver.grundy(&pos)?;
        rows.push((pos, g));
    }
    Ok(rows)
}

/// Non-decreasing vectors of length `n` over `labels`.
fn sorted_vectors(labels: &[u64], n: usize) -> Vec<Vec<u64>> {
    fn go(labels: &[u64], n: usize, start: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..labels.len() {
            cur.push(labels[i]);
            go(labels, n, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(labels, n, 0, &mut Vec::new(), &mut out);
    out
}

/// Disjunctive sum of two positions of one game: heap concatenation.
pub fn sum_positions(spec: &GameSpec, a: &Position, b: &Position) -> Result<Position> {
    spec.validate(a)?;
    spec.validate(b)?;
    let mut heaps = a.heaps.clone();
    heaps.extend_from_slice(&b.heaps);
    Ok(Position::new(heaps))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheck {
    pub pair: (Vec<u64>, Vec<u64>),
    pub summand_values: (u64, u64),
    pub expected_product: u64,
    pub observed_mex: u64,
    pub holds: bool,
    pub boundary_flag: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicativityReport {
    pub checked: Vec<PairCheck>,
    /// Pairs with a summand outside the Threshold Region.
    pub out_of_scope: Vec<(Vec<u64>, Vec<u64>)>,
}

impl MultiplicativityReport {
    pub fn violations(&self) -> impl Iterator<Item = &PairCheck> {
        self.checked.iter().filter(|c| !c.holds)
    }

    /// Violations split by whether the sum had options in the Indeterminacy Region.
    pub fn violation_counts(&self) -> (usize, usize) {
        let (boundary, interior): (Vec<_>, Vec<_>) =
            self.violations().partition(|c| c.boundary_flag);
        (interior.len(), boundary.len())
    }

    pub fn is_clean(&self) -> bool {
        self.violations().next().is_none()
    }
}

/// For each Threshold pair: both summands are single-hole, the sum's options
/// miss exactly the product of the summand values, and the indexed mex of the
/// sum's options is that product.
pub fn sg_multiplicativity_check(
    spec: &GameSpec,
    sample: &[(Position, Position)],
    indexing: &SgIndexing,
) -> Result<MultiplicativityReport> {
    let mut report = MultiplicativityReport::default();
    for (a, b) in sample {
        let in_scope =
            spec.region(a)? == RegionTag::Threshold && spec.region(b)? == RegionTag::Threshold;
        if !in_scope {
            report.out_of_scope.push((a.heaps.clone(), b.heaps.clone()));
            continue;
        }
        let ha = single_hole_check(spec, a, indexing)?;
        let hb = single_hole_check(spec, b, indexing)?;
        let expected = spec.group_mul(ha.own.element, hb.own.element);
        let expected_value = indexing.value_of(expected).expect("group closed");
        let sum = sum_positions(spec, a, b)?;
        let opts = option_value_set(spec, &sum, indexing)?;
        let missing: BTreeSet<SgValue> = indexing
            .domain()
            .difference(&opts.values)
            .copied()
            .collect();
        let mex = indexed_mex(&opts.values, indexing)?;
        let holds = ha.holds
            && hb.holds
            && missing.len() == 1
            && missing.contains(&expected_value)
            && mex == expected_value;
        report.checked.push(PairCheck {
            pair: (a.heaps.clone(), b.heaps.clone()),
            summand_values: (ha.own.element, hb.own.element),
            expected_product: expected,
            observed_mex: mex.element,
            holds,
            boundary_flag: opts.boundary_options > 0,
        });
    }
    report.checked.sort_by(|x, y| x.pair.cmp(&y.pair));
    report.out_of_scope.sort();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::FieldSpec;

    fn pos(h: &[u64]) -> Position {
        Position::new(h.to_vec())
    }

    fn gf8() -> GameSpec {
        GameSpec::Field(FieldSpec::from_bitmask(0b1011).unwrap())
    }

    #[test]
    fn indexing_puts_identity_first() {
        let ix = SgIndexing::canonical(&GameSpec::mum(5).unwrap());
        assert_eq!(ix.value_of(1), Some(SgValue { idx: 0, element: 1 }));
        assert_eq!(ix.len(), 4);
        let ix = SgIndexing::canonical(&gf8());
        assert_eq!(ix.len(), 7);
        assert_eq!(ix.value_of(1).unwrap().idx, 0);
        assert_eq!(ix.value_of(0), None);
    }

    #[test]
    fn product_sg_examples() {
        let spec = GameSpec::mum(4).unwrap();
        let ix = SgIndexing::canonical(&spec);
        assert_eq!(product_sg(&spec, &pos(&[5, 1]), &ix).unwrap().idx, 0);
        assert_eq!(product_sg(&spec, &pos(&[5, 3]), &ix).unwrap().element, 3);
        assert_eq!(
            product_sg(&spec, &pos(&[3, 1]), &ix),
            Err(Error::WrongRegion)
        );
        let ix8 = SgIndexing::canonical(&gf8());
        assert_eq!(product_sg(&gf8(), &pos(&[7, 1]), &ix8).unwrap().element, 7);
        let general = GameSpec::numeric(5, [1, 4], true).unwrap();
        assert_eq!(
            product_sg(&general, &pos(&[6]), &SgIndexing::canonical(&general)),
            Err(Error::UnsupportedLosingSet)
        );
    }

    #[test]
    fn option_values_examples() {
        let spec = GameSpec::mum(4).unwrap();
        let ix = SgIndexing::canonical(&spec);
        let opts = option_value_set(&spec, &pos(&[5]), &ix).unwrap();
        assert_eq!(
            opts.values.iter().map(|v| v.element).collect::<Vec<_>>(),
            vec![3]
        );
        assert_eq!(opts.boundary_options, 1);

        let ix8 = SgIndexing::canonical(&gf8());
        let opts = option_value_set(&gf8(), &pos(&[7]), &ix8).unwrap();
        let elems: Vec<u64> = opts.values.iter().map(|v| v.element).collect();
        assert_eq!(elems, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(
            option_value_set(&gf8(), &pos(&[1, 1]), &ix8),
            Err(Error::WrongRegion)
        );
    }

    #[test]
    fn single_hole_examples() {
        let ix8 = SgIndexing::canonical(&gf8());
        for a in 1..=7 {
            for b in 1..=7 {
                if a != 7 && b != 7 {
                    continue;
                }
                let r = single_hole_check(&gf8(), &pos(&[a, b]), &ix8).unwrap();
                assert!(r.holds, "({a},{b}) missing {:?}", r.missing);
            }
        }
        // (6, 2) in PCG(5,{1}): heap 6 reaches 4, 3, 2 and heap 2 reaches 1, values {3, 1, 4, 1}
        let spec = GameSpec::mum(5).unwrap();
        let ix = SgIndexing::canonical(&spec);
        let r = single_hole_check(&spec, &pos(&[6, 2]), &ix).unwrap();
        assert!(r.holds);
        assert_eq!(r.own.element, 2);
        assert_eq!(
            single_hole_check(&spec, &pos(&[1, 1]), &ix),
            Err(Error::WrongRegion)
        );
    }

    #[test]
    fn mex_examples() {
        let ix = SgIndexing::canonical(&GameSpec::mum(5).unwrap());
        assert_eq!(indexed_mex(&BTreeSet::new(), &ix).unwrap().idx, 0);
        let mut almost = ix.domain();
        almost.remove(&ix.value_at(3).unwrap());
        assert_eq!(indexed_mex(&almost, &ix).unwrap().idx, 3);
        let two: BTreeSet<SgValue> = [0, 1].iter().map(|&i| ix.value_at(i).unwrap()).collect();
        assert_eq!(indexed_mex(&two, &ix).unwrap().idx, 2);
        assert_eq!(indexed_mex(&ix.domain(), &ix), Err(Error::DomainExhausted));
    }

    #[test]
    fn classical_grundy() {
        let spec = GameSpec::mum(4).unwrap();
        assert_eq!(grundy_standard(&spec, &pos(&[1, 1, 1])), Ok(0));
        // (3): options {1} with value 0, so value 1
        assert_eq!(grundy_standard(&spec, &pos(&[3])), Ok(1));
        // (5): options {3}, value mex{1} = 0
        assert_eq!(grundy_standard(&spec, &pos(&[5])), Ok(0));
        let table = grundy_table(&GameSpec::mum(3).unwrap(), 1, 9).unwrap();
        assert_eq!(table.len(), 6);
        assert_eq!(table[0], (pos(&[1]), 0));
    }

    #[test]
    fn sums() {
        let spec = GameSpec::mum(4).unwrap();
        assert_eq!(
            sum_positions(&spec, &pos(&[5]), &pos(&[7])),
            Ok(pos(&[5, 7]))
        );
        assert_eq!(
            sum_positions(&spec, &pos(&[5, 1]), &pos(&[7, 3])),
            Ok(pos(&[5, 1, 7, 3]))
        );
        assert_eq!(
            spec.invariant_label(&[5, 7]),
            spec.group_mul(spec.invariant_label(&[5]), spec.invariant_label(&[7]))
        );
        assert!(sum_positions(&spec, &pos(&[5]), &pos(&[2])).is_err());
    }

    #[test]
    fn multiplicativity_on_gf8_singletons() {
        let ix8 = SgIndexing::canonical(&gf8());
        // every single-heap Threshold summand is (7); pair it with all two-heap threshold positions
        let mut pairs = vec![];
        for a in 1..=7u64 {
            for b in 1..=7u64 {
                pairs.push((pos(&[7, a]), pos(&[b, 7])));
            }
        }
        pairs.push((pos(&[3]), pos(&[7])));
        let report = sg_multiplicativity_check(&gf8(), &pairs, &ix8).unwrap();
        assert_eq!(report.checked.len(), 49);
        assert!(report.is_clean());
        assert_eq!(report.out_of_scope, vec![(vec![3], vec![7])]);
    }
}
