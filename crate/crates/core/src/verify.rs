//! Exhaustive verification suites. Each suite states the box it covered,
//! how many cases it checked, and every violation it found.

use std::collections::BTreeSet;
use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::analysis::{empirical_density, exact_losing_count, periodicity_with, OutcomeSource};
use crate::chain_rsa::{compression_check, evaluate_chain, ChainSpec};
use crate::collapse::{
    additive_reach_check, alignment_hypothesis_scan, divisor_collapse_check, divisor_move_units,
    AdditiveGameSpec, DivisorGameSpec,
};
use crate::error::Result;
use crate::finite_field::FieldSpec;
use crate::game_core::{GameSpec, Position, RegionTag, Solver};
use crate::grundy::{sg_multiplicativity_check, single_hole_check, SgIndexing};
use crate::number_theory::{crt_check_unity, factorize, mul_mod, units};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub scope: String,
    pub checked: u64,
    pub violations: Vec<String>,
    /// Counts or findings that are reported but are not violations.
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str, scope: impl Into<String>) -> Self {
        SuiteReport {
            suite: suite.into(),
            scope: scope.into(),
            checked: 0,
            violations: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations.push(what());
        }
    }

    fn merge(&mut self, other: SuiteReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
        self.notes.extend(other.notes);
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}] {}", self.suite, self.scope)?;
        write!(
            f,
            "{} checked, {} violations",
            self.checked,
            self.violations.len()
        )?;
        for note in &self.notes {
            write!(f, "\n  note: {note}")?;
        }
        for v in self.violations.iter().take(20) {
            write!(f, "\n  violation: {v}")?;
        }
        if self.violations.len() > 20 {
            write!(f, "\n  ... {} more", self.violations.len() - 20)?;
        }
        Ok(())
    }
}

/// Every vector in `labels^n`, in odometer order.
pub fn all_vectors(labels: &[u64], n: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    if labels.is_empty() || n == 0 {
        return out;
    }
    let mut idx = vec![0usize; n];
    'outer: loop {
        out.push(idx.iter().map(|&i| labels[i]).collect());
        for i in idx.iter_mut().rev() {
            if *i + 1 < labels.len() {
                *i += 1;
                continue 'outer;
            }
            *i = 0;
        }
        return out;
    }
}

fn labels_upto(spec: &GameSpec, bound: u64) -> Vec<u64> {
    (1..=bound).filter(|&v| spec.is_label(v)).collect()
}

pub fn compression_suite(chain: &ChainSpec, bound: u64, n: usize) -> Result<SuiteReport> {
    let report = compression_check(chain, bound, n)?;
    let mut out = SuiteReport::new(
        "compression",
        format!(
            "N={}, g={}, k={}, heaps in [1,{bound}]^{n}",
            chain.modulus(),
            chain.generator(),
            chain.order()
        ),
    );
    out.checked = report.total;
    out.violations = report
        .counterexamples
        .iter()
        .map(|h| format!("{h:?}"))
        .collect();
    out.notes.push(format!(
        "{} positions, {} counterexamples",
        report.total,
        report.counterexamples.len()
    ));
    out.notes
        .push(format!("{} losing positions", report.losing_count));
    Ok(out)
}

/// Fast classifier against game-tree search on every Threshold position.
pub fn threshold_suite(m: u64, ns: &[usize], heap_max: u64) -> Result<SuiteReport> {
    let spec = GameSpec::mum(m)?;
    let mut out = SuiteReport::new(
        "threshold",
        format!("PCG({m},{{1}}) unit mode, n in {ns:?}, heaps <= {heap_max}"),
    );
    let mut solver = Solver::new(spec.clone());
    let labels = labels_upto(&spec, heap_max);
    for &n in ns {
        for heaps in all_vectors(&labels, n) {
            let pos = Position::new(heaps);
            if spec.region(&pos)? != RegionTag::Threshold {
                continue;
            }
            let fast = solver.outcome(&pos)?;
            let oracle = solver.outcome_bruteforce(&pos)?;
            out.check(fast == oracle, || {
                format!("{pos}: classifier {fast}, game tree {oracle}")
            });
        }
    }
    Ok(out)
}

/// Repair on non-losing Threshold positions, blocking on losing ones.
pub fn repair_suite(spec: &GameSpec, ns: &[usize], heap_max: u64) -> Result<SuiteReport> {
    let mut out = SuiteReport::new(
        "repair",
        format!("{spec}, n in {ns:?}, heaps <= {heap_max}"),
    );
    let labels = labels_upto(spec, heap_max);
    for &n in ns {
        for heaps in all_vectors(&labels, n) {
            let pos = Position::new(heaps);
            if spec.region(&pos)? != RegionTag::Threshold {
                continue;
            }
            if spec.is_losing_predicate(&pos)? {
                let mut losing_options = 0;
                for mv in spec.legal_moves(&pos)? {
                    if spec.is_losing_predicate(&spec.apply_move(&pos, mv)?)? {
                        losing_options += 1;
                    }
                }
                out.check(losing_options == 0, || {
                    format!("{pos}: {losing_options} losing options")
                });
            } else {
                let result = spec
                    .repair_move(&pos)
                    .and_then(|mv| spec.apply_move(&pos, mv))
                    .and_then(|next| spec.is_losing_predicate(&next));
                out.check(result == Ok(true), || {
                    format!("{pos}: repair gave {result:?}")
                });
            }
        }
    }
    Ok(out)
}

/// Invariant and predicate preserved by normalisation; normalise-then-repair
/// lands on a losing position from every non-losing Indeterminacy position.
pub fn normalize_suite(spec: &GameSpec, ns: &[usize], heap_max: u64) -> Result<SuiteReport> {
    let mut out = SuiteReport::new(
        "normalize",
        format!("{spec}, n in {ns:?}, heaps <= {heap_max}"),
    );
    let labels = labels_upto(spec, heap_max);
    for &n in ns {
        for heaps in all_vectors(&labels, n) {
            let pos = Position::new(heaps);
            let norm = spec.normalize(&pos)?;
            out.check(
                norm.len() == 1
                    && spec.invariant(&norm)? == spec.invariant(&pos)?
                    && spec.is_losing_predicate(&norm)? == spec.is_losing_predicate(&pos)?,
                || format!("{pos} -> {norm}"),
            );
            if spec.region(&pos)? == RegionTag::Indeterminacy && !spec.is_losing_predicate(&pos)? {
                let result = spec
                    .repair_move(&norm)
                    .and_then(|mv| spec.apply_move(&norm, mv))
                    .and_then(|next| spec.is_losing_predicate(&next));
                out.check(result == Ok(true), || {
                    format!("{pos} -> {norm}: repair gave {result:?}")
                });
            }
        }
    }
    Ok(out)
}

/// Single-hole on Threshold positions with up to `single_n` heaps and
/// multiplicativity on all pairs of Threshold summands with up to `pair_n` heaps.
pub fn sg_suite(
    spec: &GameSpec,
    single_n: usize,
    pair_n: usize,
    heap_max: u64,
) -> Result<SuiteReport> {
    let mut out = SuiteReport::new(
        "sg",
        format!("{spec}, single-hole n <= {single_n}, summands n <= {pair_n}, heaps <= {heap_max}"),
    );
    let ix = SgIndexing::canonical(spec);
    let labels = labels_upto(spec, heap_max);
    let mut boundary = 0;
    let mut summands = Vec::new();
    for n in 1..=single_n.max(pair_n) {
        for heaps in all_vectors(&labels, n) {
            let pos = Position::new(heaps);
            if spec.region(&pos)? != RegionTag::Threshold {
                continue;
            }
            if n <= single_n {
                let hole = single_hole_check(spec, &pos, &ix)?;
                if hole.boundary_options > 0 {
                    boundary += 1;
                }
                out.check(hole.holds, || {
                    format!(
                        "{pos}: own {}, missing {:?}",
                        hole.own.element, hole.missing
                    )
                });
            }
            if n <= pair_n {
                summands.push(pos);
            }
        }
    }
    let mut pairs = Vec::new();
    for a in &summands {
        for b in &summands {
            pairs.push((a.clone(), b.clone()));
        }
    }
    let report = sg_multiplicativity_check(spec, &pairs, &ix)?;
    for c in &report.checked {
        out.check(c.holds, || {
            format!(
                "{:?} + {:?}: expected {}, mex {}{}",
                c.pair.0,
                c.pair.1,
                c.expected_product,
                c.observed_mex,
                if c.boundary_flag { " (boundary)" } else { "" }
            )
        });
    }
    let (interior, flagged) = report.violation_counts();
    let flagged_pairs = report.checked.iter().filter(|c| c.boundary_flag).count();
    out.notes.push(format!(
        "single-hole positions with Indeterminacy options: {boundary}; pairs {}, boundary-flagged {flagged_pairs}; violations interior {interior}, boundary {flagged}",
        report.checked.len()
    ));
    Ok(out)
}

/// Exact counts `|R| |G|^(n-1)` (with the constructive cross-check).
pub fn density_suite(spec: &GameSpec, ns: &[usize]) -> Result<SuiteReport> {
    let mut out = SuiteReport::new("density", format!("{spec}, exact over G^n, n in {ns:?}"));
    let g = spec.group_elements().len() as u64;
    let r = spec.losing_labels().len() as u64;
    for &n in ns {
        let rep = exact_losing_count(spec, n)?;
        let expected = r * g.pow(n as u32 - 1);
        out.check(
            rep.losing == expected && rep.constructive == Some(expected),
            || {
                format!(
                    "n={n}: {} losing, constructive {:?}, expected {expected}",
                    rep.losing, rep.constructive
                )
            },
        );
        out.notes.push(format!(
            "{spec} n={n}: {} of {} losing ({})",
            rep.losing, rep.total, rep.ratio
        ));
    }
    Ok(out)
}

/// Empirical density within `tolerance` (relative) of the prediction at `bound`.
pub fn empirical_density_suite(
    spec: &GameSpec,
    n: usize,
    bound: u64,
    tolerance: f64,
) -> Result<SuiteReport> {
    let mut out = SuiteReport::new(
        "density",
        format!("{spec}, [1,{bound}]^{n}, tolerance {tolerance}"),
    );
    let rep = empirical_density(spec, n, bound)?;
    out.check(rep.deviation() <= tolerance, || {
        format!(
            "ratio {:.5} vs predicted {}",
            rep.ratio.value(),
            rep.predicted
        )
    });
    out.notes.push(format!(
        "ratio {:.5}, predicted {}",
        rep.ratio.value(),
        rep.predicted
    ));
    Ok(out)
}

/// `f_j(x + m) = f_j(x)` for `x` in `[m, x_factor * m]` over every context of
/// labels below `m` with up to `n_max - 1` heaps and every insertion index.
pub fn periodicity_suite(
    m: u64,
    n_max: usize,
    x_factor: u64,
    source: OutcomeSource,
) -> Result<SuiteReport> {
    let spec = GameSpec::mum(m)?;
    let mut out = SuiteReport::new(
        "periodicity",
        format!("PCG({m},{{1}}) unit mode, n <= {n_max}, contexts over labels < {m}, x in [{m}, {}], {source:?}", x_factor * m),
    );
    let mut solver = Solver::new(spec.clone());
    let labels = labels_upto(&spec, m - 1);
    for len in 0..n_max {
        let contexts = if len == 0 {
            vec![vec![]]
        } else {
            all_vectors(&labels, len)
        };
        for context in contexts {
            for j in 0..=len {
                let rep = periodicity_with(&mut solver, &context, j, x_factor * m, source)?;
                for row in &rep.rows {
                    out.check(row.equal, || {
                        format!(
                            "context {context:?}, j={j}, x={}: {} vs {}",
                            row.x, row.outcome_x, row.outcome_x_plus_m
                        )
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Additive coverage, divisor transitivity against an independent closure,
/// and the alignment scan for `m = 4` against the prime-factor criterion.
pub fn collapse_suite(m_max: u64, heap_factor: u64, divisor_bound: u64) -> Result<SuiteReport> {
    let mut out = SuiteReport::new(
        "collapse",
        format!(
            "additive m in [2,{m_max}], n <= 2, heaps <= {heap_factor}m; divisor m in [2,{m_max}], heaps <= {divisor_bound}"
        ),
    );
    for m in 2..=m_max {
        let spec = AdditiveGameSpec::new(m, 0)?;
        let labels: Vec<u64> = (1..=heap_factor * m).collect();
        for n in 1..=2 {
            for heaps in all_vectors(&labels, n) {
                for j in (0..n).filter(|&j| heaps[j] >= m) {
                    let r = additive_reach_check(&spec, &heaps, j)?;
                    out.check(r.covers_all, || format!("additive m={m} {heaps:?} j={j}"));
                }
            }
        }
    }

    let mut transitive_heaps = 0;
    for m in 2..=m_max {
        let spec = DivisorGameSpec::new(m)?;
        let group = units(m);
        for t in (1..=divisor_bound).filter(|&t| crate::number_theory::gcd(t, m) == 1) {
            let c = divisor_collapse_check(&spec, &[t], 0)?;
            let expected = word_closure(&divisor_move_units(t, m)?.units, m).len() == group.len()
                || group.len() == 1;
            if c.transitive {
                transitive_heaps += 1;
            }
            out.check(c.transitive == expected, || {
                format!("divisor m={m} t={t}: transitive {}", c.transitive)
            });
        }
    }
    out.notes
        .push(format!("{transitive_heaps} transitive divisor heaps"));

    let scan = alignment_hypothesis_scan(4, 2, divisor_bound)?;
    let failures = scan.failures();
    let expected: Vec<u64> = (2..=divisor_bound)
        .filter(|&t| t % 2 == 1)
        .filter(|&t| {
            factorize(t)
                .map(|f| f.factors().iter().all(|&(p, _)| p % 4 == 1))
                .unwrap_or(false)
        })
        .collect();
    out.check(failures == expected, || {
        format!("scan m=4 failures {failures:?}, expected {expected:?}")
    });
    let primes: Vec<u64> = failures
        .iter()
        .copied()
        .filter(|&t| crate::number_theory::is_prime(t))
        .collect();
    out.check(!primes.is_empty(), || {
        "scan m=4 found no prime failures".into()
    });
    out.notes.push(format!(
        "m=4 scan: {} failures, primes {:?}",
        failures.len(),
        primes
    ));
    Ok(out)
}

/// Non-empty products of elements of `gens`, grown one factor at a time.
fn word_closure(gens: &BTreeSet<u64>, m: u64) -> BTreeSet<u64> {
    let mut reach: BTreeSet<u64> = gens.iter().map(|&g| g % m).collect();
    loop {
        let grown: BTreeSet<u64> = reach
            .iter()
            .flat_map(|&a| gens.iter().map(move |&g| mul_mod(a, g, m)))
            .chain(reach.iter().copied())
            .collect();
        if grown.len() == reach.len() {
            return reach;
        }
        reach = grown;
    }
}

/// Round trip, the standard inverse pair, Fermat on every unit, and `finv`
/// against `a^(q-2)`.
pub fn aes_suite(field: &FieldSpec) -> Result<SuiteReport> {
    let mut out = SuiteReport::new("aes", format!("{field}"));
    let q = field.q();
    for h in 1..q {
        let e = field.s_map(h)?;
        out.check(field.c_map(&e)? == h, || format!("round trip {h}"));
        out.check(field.fpow(&e, q - 1)? == field.one(), || {
            format!("{h}^{} != 1", q - 1)
        });
        out.check(field.finv(&e)? == field.fpow(&e, q - 2)?, || {
            format!("finv({h}) disagrees with a^(q-2)")
        });
    }
    if field.bitmask() == Some(crate::finite_field::AES_POLY) {
        let inv = field.inv_label(0x53)?;
        out.check(inv == 0xCA, || format!("finv(0x53) = {inv:#x}"));
        let prod = field.mul_labels(0x53, 0xCA)?;
        out.check(prod == 1, || format!("0x53 * 0xCA = {prod:#x}"));
    }
    Ok(out)
}

/// Seeded random `(h, k)`: the overall verdict is the conjunction of the
/// per-component verdicts, and matches the chain when `k` comes from one.
pub fn crt_suite(seed: u64, samples: usize) -> Result<SuiteReport> {
    let mut out = SuiteReport::new(
        "crt",
        format!("{samples} samples, k in [2, 10^6], seed {seed}"),
    );
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..samples {
        let k = rng.gen_range(2..=1_000_000u64);
        let h = if rng.gen_bool(0.25) {
            1 + k * rng.gen_range(0..1000u64)
        } else {
            rng.gen_range(1..=u32::MAX as u64)
        };
        let v = crt_check_unity(h, k)?;
        out.check(v.overall == v.per_component.iter().all(|&b| b), || {
            format!("h={h}, k={k}")
        });
    }
    let chain = ChainSpec::new(13, 2)?;
    for h in 1..=200u64 {
        let v = crate::chain_rsa::crt_losing_check(&chain, &[h])?;
        out.check(
            v.overall == (evaluate_chain(&chain, &[h])? == chain.generator()),
            || format!("chain h={h}"),
        );
    }
    Ok(out)
}

/// Every suite at its default box, in a fixed order.
pub fn all_suites(seed: u64) -> Result<Vec<SuiteReport>> {
    let fields =
        [0b111u64, 0b1011, 0b10011].map(|mask| FieldSpec::from_bitmask(mask).expect("irreducible"));
    let mut reports = vec![compression_suite(&ChainSpec::new(15, 2)?, 8, 3)?];
    let mut threshold = SuiteReport::new("threshold", "m in {3,4,5,6}, n in {2,3}, heaps <= 3m");
    let mut repair = SuiteReport::new("repair", "m in {3,4,5,6}, n in {2,3}, heaps <= 3m");
    let mut normalize = SuiteReport::new(
        "normalize",
        "m in {3,4,5,6}, n <= 3, heaps <= 3m; GF(4), GF(8), GF(16), n <= 2",
    );
    let mut sg = SuiteReport::new(
        "sg",
        "m in {3,4,5,6}, heaps <= 3m; GF(4), GF(8), GF(16); single-hole n <= 3, summands n <= 2",
    );
    for m in 3..=6 {
        let spec = GameSpec::mum(m)?;
        threshold.merge(threshold_suite(m, &[2, 3], 3 * m)?);
        repair.merge(repair_suite(&spec, &[2, 3], 3 * m)?);
        normalize.merge(normalize_suite(&spec, &[1, 2, 3], 3 * m)?);
        sg.merge(sg_suite(&spec, 3, 2, 3 * m)?);
    }
    for f in &fields {
        let spec = GameSpec::Field(f.clone());
        normalize.merge(normalize_suite(&spec, &[1, 2], f.q() - 1)?);
        sg.merge(sg_suite(&spec, 3, 2, f.q() - 1)?);
    }
    reports.extend([threshold, repair, normalize, sg]);
    let mut density = SuiteReport::new(
        "density",
        "GF(8), GF(16), AES n <= 2; PCG(m,{1}) m <= 12 n <= 3",
    );
    for f in fields.iter().skip(1).cloned().chain([FieldSpec::aes()]) {
        density.merge(density_suite(&GameSpec::Field(f), &[1, 2])?);
    }
    for m in 3..=12 {
        density.merge(density_suite(&GameSpec::mum(m)?, &[1, 2, 3])?);
    }
    reports.push(density);
    let mut period = SuiteReport::new("periodicity", "m in [3,6], n <= 3, x in [m, 4m], game tree");
    for m in 3..=6 {
        period.merge(periodicity_suite(m, 3, 4, OutcomeSource::GameTree)?);
    }
    reports.push(period);
    reports.push(collapse_suite(6, 3, 200)?);
    reports.push(aes_suite(&FieldSpec::aes())?);
    reports.push(crt_suite(seed, 10_000)?);
    Ok(reports)
}

pub const SUITES: [&str; 10] = [
    "compression",
    "threshold",
    "repair",
    "normalize",
    "sg",
    "density",
    "periodicity",
    "collapse",
    "aes",
    "crt",
];

pub fn is_suite(name: &str) -> bool {
    SUITES.contains(&name) || name == "all"
}
