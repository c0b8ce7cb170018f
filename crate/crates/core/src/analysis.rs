//! Losing densities, ultimate periodicity and the side-by-side comparison of
//! the chain, field and numeric instances.
//!
//! "Losing" in a density report always means the predicate. Where the counted
//! box meets the Indeterminacy Region a game-tree count can be attached with
//! [`DensityReport::with_game_tree`]; the two need not agree there.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chain_rsa::{chain_to_pcg, ChainSpec};
use crate::error::{Error, Result};
use crate::finite_field::FieldSpec;
use crate::game_core::{GameSpec, Outcome, Position, RegionTag, Solver};
use crate::grundy::{sg_multiplicativity_check, single_hole_check, SgIndexing};
use crate::number_theory::{crt_split, euler_phi, gcd};

/// Largest box `exact_losing_count` will enumerate.
pub const EXACT_COUNT_LIMIT: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        Ratio { num, den }
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn reduced(self) -> Ratio {
        let g = gcd(self.num, self.den).max(1);
        Ratio {
            num: self.num / g,
            den: self.den / g,
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        write!(f, "{}/{}", r.num, r.den)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub spec: String,
    pub n: usize,
    /// Largest heap counted; `None` for one-period counts over the group.
    pub bound: Option<u64>,
    pub total: u64,
    pub losing: u64,
    pub ratio: Ratio,
    pub predicted: Ratio,
    /// Losing count obtained by fixing `n - 1` heaps and solving for the last.
    pub constructive: Option<u64>,
    /// Game-tree `P` count over the same box, when requested.
    pub game_tree_losing: Option<u64>,
}

impl DensityReport {
    pub fn deviation(&self) -> f64 {
        (self.ratio.value() - self.predicted.value()).abs() / self.predicted.value()
    }

    /// Attaches the number of `P` positions, by game-tree search, in the same box.
    pub fn with_game_tree(mut self, spec: &GameSpec) -> Result<Self> {
        let labels = box_labels(spec, self.bound);
        let mut solver = Solver::new(spec.clone());
        let mut count = 0;
        let mut idx = vec![0usize; self.n];
        loop {
            let heaps: Vec<u64> = idx.iter().map(|&i| labels[i]).collect();
            if solver.outcome_bruteforce(&Position::new(heaps))? == Outcome::P {
                count += 1;
            }
            if !next_index(&mut idx, labels.len()) {
                break;
            }
        }
        self.game_tree_losing = Some(count);
        Ok(self)
    }

    pub fn write_csv<W: std::io::Write>(reports: &[DensityReport], out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "spec",
            "n",
            "bound",
            "total",
            "losing",
            "ratio",
            "predicted",
        ])?;
        for r in reports {
            w.write_record([
                r.spec.clone(),
                r.n.to_string(),
                r.bound.map_or(String::new(), |b| b.to_string()),
                r.total.to_string(),
                r.losing.to_string(),
                format!("{:.6}", r.ratio.value()),
                format!("{:.6}", r.predicted.value()),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn box_labels(spec: &GameSpec, bound: Option<u64>) -> Vec<u64> {
    match bound {
        Some(b) => (1..=b).filter(|&v| spec.is_label(v)).collect(),
        None => spec.group_elements(),
    }
}

fn next_index(idx: &mut [usize], len: usize) -> bool {
    for i in idx.iter_mut().rev() {
        if *i + 1 < len {
            *i += 1;
            return true;
        }
        *i = 0;
    }
    false
}

/// Exhaustive predicate count over `G^n`, one period of labels.
pub fn exact_losing_count(spec: &GameSpec, n: usize) -> Result<DensityReport> {
    if n == 0 {
        return Err(Error::PreconditionViolated("n must be positive".into()));
    }
    if !spec.is_unit_world() {
        return Err(Error::PreconditionViolated(
            "exact counts need a group of labels (field or unit-mode game)".into(),
        ));
    }
    let group = spec.group_elements();
    let size = group.len() as u128;
    let total = size.pow(n as u32);
    if total > EXACT_COUNT_LIMIT {
        return Err(Error::TooLarge(format!("{size}^{n} positions")));
    }
    let losing_set = spec.losing_labels();

    let mut losing = 0u64;
    count_products(spec, &group, n, 1, &mut |acc| {
        if losing_set.contains(&acc) {
            losing += 1;
        }
    });

    // fix the first n-1 heaps, then each losing label r has one completing label
    let mut constructive = 0u64;
    count_products(spec, &group, n - 1, 1, &mut |acc| {
        let inv = spec.group_inv(acc).expect("unit");
        for &r in &losing_set {
            let c = spec.group_mul(inv, r);
            if group.binary_search(&c).is_ok() {
                constructive += 1;
            }
        }
    });

    let predicted = Ratio::new(losing_set.len() as u64, size as u64);
    Ok(DensityReport {
        spec: spec.to_string(),
        n,
        bound: None,
        total: total as u64,
        losing,
        ratio: Ratio::new(losing, total as u64),
        predicted,
        constructive: Some(constructive),
        game_tree_losing: None,
    })
}

fn count_products(spec: &GameSpec, group: &[u64], depth: usize, acc: u64, f: &mut impl FnMut(u64)) {
    if depth == 0 {
        f(acc);
        return;
    }
    for &g in group {
        count_products(spec, group, depth - 1, spec.group_mul(acc, g), f);
    }
}

/// Predicate density over `[1, bound]^n` (coprime labels only in unit mode),
/// counted through the residue histogram of the labels.
pub fn empirical_density(spec: &GameSpec, n: usize, bound: u64) -> Result<DensityReport> {
    let game = spec.numeric_view().ok_or_else(|| {
        Error::PreconditionViolated("empirical density needs a numeric game".into())
    })?;
    if n == 0 || bound == 0 {
        return Err(Error::PreconditionViolated(
            "n and bound must be positive".into(),
        ));
    }
    let m = game.modulus() as usize;
    let mut hist = vec![0u128; m];
    let mut labels = 0u128;
    for v in (1..=bound).filter(|&v| spec.is_label(v)) {
        hist[(v % m as u64) as usize] += 1;
        labels += 1;
    }
    // dist[r] = number of vectors with product = r
    let mut dist = vec![0u128; m];
    dist[1 % m] = 1;
    for _ in 0..n {
        let mut next = vec![0u128; m];
        for (a, &ca) in dist.iter().enumerate().filter(|(_, &c)| c > 0) {
            for (b, &cb) in hist.iter().enumerate().filter(|(_, &c)| c > 0) {
                next[a * b % m] += ca * cb;
            }
        }
        dist = next;
    }
    let total = labels.pow(n as u32);
    let losing: u128 = game.losing_set().iter().map(|&r| dist[r as usize]).sum();
    if total > u64::MAX as u128 {
        return Err(Error::TooLarge(format!("{labels}^{n} positions")));
    }
    let r = game.losing_set().len() as u64;
    let predicted = if game.unit_mode() {
        Ratio::new(r, euler_phi(m as u64)?)
    } else {
        Ratio::new(r, m as u64)
    };
    Ok(DensityReport {
        spec: spec.to_string(),
        n,
        bound: Some(bound),
        total: total as u64,
        losing: losing as u64,
        ratio: Ratio::new(losing as u64, total as u64),
        predicted,
        constructive: None,
        game_tree_losing: None,
    })
}

/// `empirical_density` at each bound, in the given order.
pub fn density_series(spec: &GameSpec, n: usize, bounds: &[u64]) -> Result<Vec<DensityReport>> {
    bounds
        .iter()
        .map(|&b| empirical_density(spec, n, b))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutcomeSource {
    /// The game's classifier: invariant in the Threshold Region, search elsewhere.
    Classifier,
    /// Game-tree search everywhere.
    GameTree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodRow {
    pub context: Vec<u64>,
    pub j: usize,
    pub x: u64,
    pub outcome_x: Outcome,
    pub outcome_x_plus_m: Outcome,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicityReport {
    pub spec: String,
    pub context: Vec<u64>,
    pub j: usize,
    pub x_range: (u64, u64),
    pub source: OutcomeSource,
    pub rows: Vec<PeriodRow>,
    pub violations: Vec<u64>,
}

impl PeriodicityReport {
    pub fn write_csv<W: std::io::Write>(reports: &[PeriodicityReport], out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "context",
            "j",
            "x",
            "outcome_x",
            "outcome_x_plus_m",
            "equal",
        ])?;
        for row in reports.iter().flat_map(|r| &r.rows) {
            let ctx: Vec<String> = row.context.iter().map(u64::to_string).collect();
            w.write_record([
                ctx.join(" "),
                row.j.to_string(),
                row.x.to_string(),
                row.outcome_x.to_string(),
                row.outcome_x_plus_m.to_string(),
                row.equal.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Compares `f_j(x)` with `f_j(x + m)` for `x` in `[m, x_max]`, where `f_j(x)`
/// is the outcome with `x` inserted at index `j` of `context`. Values of `x`
/// that are not labels of the game are skipped.
pub fn periodicity_check(
    spec: &GameSpec,
    context: &[u64],
    j: usize,
    x_max: u64,
    source: OutcomeSource,
) -> Result<PeriodicityReport> {
    let mut solver = Solver::new(spec.clone());
    periodicity_with(&mut solver, context, j, x_max, source)
}

/// Same as [`periodicity_check`] with a caller-owned solver, so the memo is
/// shared across many contexts.
pub fn periodicity_with(
    solver: &mut Solver,
    context: &[u64],
    j: usize,
    x_max: u64,
    source: OutcomeSource,
) -> Result<PeriodicityReport> {
    let spec = solver.spec().clone();
    if spec.numeric_view().is_none() {
        return Err(Error::PreconditionViolated(
            "periodicity is defined for numeric games".into(),
        ));
    }
    if j > context.len() {
        return Err(Error::PreconditionViolated(format!(
            "insertion index {j} past context of {}",
            context.len()
        )));
    }
    if let Some(&bad) = context.iter().find(|&&h| !spec.is_label(h)) {
        return Err(Error::InvalidPosition(format!(
            "context heap {bad} is not a label"
        )));
    }
    let m = spec.modulus();
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for x in (m..=x_max).filter(|&x| spec.is_label(x)) {
        let at = |x: u64| {
            let mut heaps = context.to_vec();
            heaps.insert(j, x);
            Position::new(heaps)
        };
        let (a, b) = match source {
            OutcomeSource::Classifier => (solver.outcome(&at(x))?, solver.outcome(&at(x + m))?),
            OutcomeSource::GameTree => (
                solver.outcome_bruteforce(&at(x))?,
                solver.outcome_bruteforce(&at(x + m))?,
            ),
        };
        if a != b {
            violations.push(x);
        }
        rows.push(PeriodRow {
            context: context.to_vec(),
            j,
            x,
            outcome_x: a,
            outcome_x_plus_m: b,
            equal: a == b,
        });
    }
    Ok(PeriodicityReport {
        spec: spec.to_string(),
        context: context.to_vec(),
        j,
        x_range: (m, x_max),
        source,
        rows,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    pub chain: String,
    pub field: String,
    pub numeric: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub headers: [String; 3],
    pub rows: Vec<TableRow>,
}

impl ComparisonTable {
    pub fn row(&self, label: &str) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!(
            "| | {} | {} | {} |\n|---|---|---|---|\n",
            self.headers[0], self.headers[1], self.headers[2]
        );
        for r in &self.rows {
            out.push_str(&format!(
                "| {} | {} | {} | {} |\n",
                r.label, r.chain, r.field, r.numeric
            ));
        }
        out
    }
}

fn list(xs: &[u64]) -> String {
    let parts: Vec<String> = xs.iter().map(u64::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// Every cell is computed from the three live instances.
pub fn comparison_table(
    chain: &ChainSpec,
    field: &FieldSpec,
    mum_m: u64,
) -> Result<ComparisonTable> {
    let chain_game = chain_to_pcg(chain)?;
    let field_game = GameSpec::Field(field.clone());
    let mum = GameSpec::mum(mum_m)?;
    let k = chain.order();
    let q1 = field.q() - 1;
    let games = [&chain_game, &field_game, &mum];

    let mut rows = Vec::new();
    let mut push = |label: &str, cells: [String; 3]| {
        let [chain, field, numeric] = cells;
        rows.push(TableRow {
            label: label.to_string(),
            chain,
            field,
            numeric,
        });
    };

    push(
        "Ambient structure",
        [
            format!(
                "(Z/{}Z)^x, g = {}, exponents mod {k}",
                chain.modulus(),
                chain.generator()
            ),
            format!("GF({}^{})^x", field.p(), field.degree()),
            format!("(Z/{mum_m}Z)^x"),
        ],
    );
    push(
        "Aggregation",
        [
            "H = h1 h2 ... hn (exponent product)".into(),
            "s(h1) s(h2) ... s(hn) (field product)".into(),
            "h1 h2 ... hn (heap product)".into(),
        ],
    );
    push(
        "Compression modulus",
        [k.to_string(), q1.to_string(), mum_m.to_string()],
    );
    push(
        "Decomposition",
        [
            list(&crt_split(k)?),
            list(&crt_split(q1)?),
            list(&crt_split(mum_m)?),
        ],
    );
    push(
        "Losing predicate",
        [
            format!("H = 1 (mod {k})"),
            "product = 1 in the field".into(),
            format!("product = 1 (mod {mum_m})"),
        ],
    );
    push(
        "Threshold Region",
        [
            format!("some h >= {k}"),
            format!("some h = {q1}"),
            format!("some h >= {mum_m}"),
        ],
    );
    push(
        "Indeterminacy Region",
        [
            format!("[1, {}]^n", k - 1),
            format!("[1, {}]^n", q1 - 1),
            format!("[1, {}]^n", mum_m - 1),
        ],
    );

    let mut single_hole = Vec::new();
    let mut multiplicative = Vec::new();
    for g in games {
        let (passed, total) = single_hole_sample(g)?;
        single_hole.push(format!("{passed}/{total} positions"));
        let (passed, total) = multiplicativity_sample(g)?;
        multiplicative.push(format!("{passed}/{total} pairs"));
    }
    push("Single-hole in T", to3(single_hole));
    push("SG multiplicativity", to3(multiplicative));

    let mut normal = Vec::new();
    for g in games {
        let m = g.modulus();
        let sample = Position::new(vec![m - 1, m - 1]);
        normal.push(format!("{} -> {}", sample, g.normalize(&sample)?));
    }
    push("Normalisation", to3(normal));

    let mut density = Vec::new();
    for (i, g) in games.into_iter().enumerate() {
        let exact = exact_losing_count(g, 2)?;
        let cell = if i == 1 {
            format!("{}", exact.ratio)
        } else {
            let m = g.modulus();
            let permissive = GameSpec::numeric(m, [1], false)?;
            let all = empirical_density(&permissive, 2, m)?;
            format!(
                "{} over units; {} over all labels (1/m = 1/{m})",
                exact.ratio, all.ratio
            )
        };
        density.push(cell);
    }
    push("Density", to3(density));

    Ok(ComparisonTable {
        headers: [
            format!("chain (N={}, g={})", chain.modulus(), chain.generator()),
            format!("field ({field})"),
            format!("MuM (m={mum_m})"),
        ],
        rows,
    })
}

fn to3(v: Vec<String>) -> [String; 3] {
    v.try_into().expect("three instances")
}

/// Two-heap Threshold positions with the first heap at the modulus (numeric)
/// or at `q - 1` (field), the second running over all labels below that.
fn single_hole_sample(spec: &GameSpec) -> Result<(usize, usize)> {
    let ix = SgIndexing::canonical(spec);
    let m = spec.modulus();
    let top = match spec {
        GameSpec::Field(_) => m,
        _ => (m..)
            .find(|&v| spec.is_label(v))
            .expect("labels are unbounded"),
    };
    let mut passed = 0;
    let mut total = 0;
    for h in (1..=m).filter(|&h| spec.is_label(h)) {
        let pos = Position::new(vec![top, h]);
        debug_assert_eq!(spec.region(&pos)?, RegionTag::Threshold);
        total += 1;
        if single_hole_check(spec, &pos, &ix)?.holds {
            passed += 1;
        }
    }
    Ok((passed, total))
}

/// Single-heap Threshold summands `(t)` with `t` in one period above the modulus.
fn multiplicativity_sample(spec: &GameSpec) -> Result<(usize, usize)> {
    let ix = SgIndexing::canonical(spec);
    let m = spec.modulus();
    let tops: Vec<u64> = match spec {
        GameSpec::Field(_) => vec![m],
        _ => (m..2 * m).filter(|&v| spec.is_label(v)).collect(),
    };
    let mut pairs = Vec::new();
    for &a in &tops {
        for &b in &tops {
            pairs.push((Position::new(vec![a]), Position::new(vec![b])));
        }
    }
    let report = sg_multiplicativity_check(spec, &pairs, &ix)?;
    let passed = report.checked.iter().filter(|c| c.holds).count();
    Ok((passed, report.checked.len()))
}
