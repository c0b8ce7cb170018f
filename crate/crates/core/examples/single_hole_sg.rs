//! Product-SG values: each Threshold position misses exactly its own
//! invariant among its options, and sums multiply.

use pcg::finite_field::FieldSpec;
use pcg::grundy::{
    grundy_standard, product_sg, sg_multiplicativity_check, single_hole_check, SgIndexing,
};
use pcg::{GameSpec, Position};

fn main() -> pcg::Result<()> {
    let spec = GameSpec::mum(5)?;
    let ix = SgIndexing::canonical(&spec);
    for heaps in [vec![6u64, 2], vec![7, 3], vec![9, 9]] {
        let pos = Position::new(heaps);
        let hole = single_hole_check(&spec, &pos, &ix)?;
        let missing: Vec<u64> = hole.missing.iter().map(|v| v.element).collect();
        println!(
            "{pos}: product-sg {} missing {missing:?} holds {}",
            hole.own.element, hole.holds
        );
    }
    println!(
        "classical grundy of (6,2): {}",
        grundy_standard(&spec, &Position::new(vec![6, 2]))?
    );

    let gf8 = GameSpec::Field(FieldSpec::from_bitmask(0b1011)?);
    let ix8 = SgIndexing::canonical(&gf8);
    let tops: Vec<Position> = (1..8).map(|h| Position::new(vec![7, h])).collect();
    let pairs: Vec<(Position, Position)> = tops
        .iter()
        .flat_map(|a| tops.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    let report = sg_multiplicativity_check(&gf8, &pairs, &ix8)?;
    println!(
        "{gf8}: {} pairs, clean {}",
        report.checked.len(),
        report.is_clean()
    );
    let v = product_sg(&gf8, &Position::new(vec![7, 3]), &ix8)?;
    println!(
        "product-sg of (7,3) = label {} at index {}",
        v.element, v.idx
    );
    Ok(())
}
