//! Losing densities: exact over one period, empirical over growing boxes.

use pcg::analysis::{density_series, exact_losing_count};
use pcg::finite_field::FieldSpec;
use pcg::GameSpec;

fn main() -> pcg::Result<()> {
    for spec in [
        GameSpec::Field(FieldSpec::from_bitmask(0b1011)?),
        GameSpec::Field(FieldSpec::from_bitmask(0b10011)?),
        GameSpec::Field(FieldSpec::aes()),
        GameSpec::mum(12)?,
    ] {
        let r = exact_losing_count(&spec, 2)?;
        println!(
            "{}: {} of {} losing ({})",
            r.spec, r.losing, r.total, r.ratio
        );
    }

    let mum5 = GameSpec::mum(5)?;
    let r = exact_losing_count(&mum5, 2)?.with_game_tree(&mum5)?;
    println!(
        "{}: predicate {} vs game tree {:?} on one period",
        r.spec, r.losing, r.game_tree_losing
    );

    for spec in [GameSpec::mum(4)?, GameSpec::numeric(4, [1], false)?] {
        for r in density_series(&spec, 2, &[10, 40, 100, 400])? {
            println!(
                "{} bound {:>3}: {:.4} (predicted {})",
                r.spec,
                r.bound.unwrap(),
                r.ratio.value(),
                r.predicted
            );
        }
    }
    Ok(())
}
