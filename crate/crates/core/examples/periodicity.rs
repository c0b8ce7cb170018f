//! Outcomes are periodic in each heap with period m beyond m, even where
//! only the game tree decides them.

use pcg::analysis::{periodicity_check, OutcomeSource};
use pcg::GameSpec;

fn main() -> pcg::Result<()> {
    let spec = GameSpec::mum(5)?;
    for context in [vec![], vec![2], vec![2, 3], vec![4, 4]] {
        let r = periodicity_check(&spec, &context, 0, 20, OutcomeSource::GameTree)?;
        let outcomes: String = r.rows.iter().map(|row| row.outcome_x.to_string()).collect();
        println!(
            "context {context:?}: x = 5..20 -> {outcomes}, violations {:?}",
            r.violations
        );
    }
    let mut out = Vec::new();
    let r = periodicity_check(&GameSpec::mum(4)?, &[3], 1, 16, OutcomeSource::Classifier)?;
    pcg::analysis::PeriodicityReport::write_csv(&[r], &mut out).expect("in-memory csv");
    print!("{}", String::from_utf8_lossy(&out));
    Ok(())
}
