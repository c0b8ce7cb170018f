//! One large heap steering the invariant: always in the additive game,
//! only when divisor moves generate the unit group in the divisor game.

use pcg::collapse::{
    additive_alignment_instance, additive_reach_check, alignment_hypothesis_scan,
    alignment_principle_check, divisor_alignment_instance, divisor_collapse_check,
    AdditiveGameSpec, DivisorGameSpec,
};

fn main() -> pcg::Result<()> {
    let add = AdditiveGameSpec::new(5, 0)?;
    let r = additive_reach_check(&add, &[7, 2], 0)?;
    println!(
        "additive mod 5, (7,2): reach {:?}, covers all {}",
        r.reachable, r.covers_all
    );

    let div = DivisorGameSpec::new(5)?;
    for t in [32u64, 2, 11, 1] {
        let c = divisor_collapse_check(&div, &[t, 3], 0)?;
        println!(
            "divisor mod 5, heap {t}: closure {:?} transitive {}, literal chains {:?}",
            c.reachable_units, c.transitive, c.literal_reachable
        );
    }

    let scan = alignment_hypothesis_scan(4, 2, 100)?;
    println!(
        "mod 4, t in [2,100]: hypothesis fails for {:?}",
        scan.failures()
    );

    let (image, monoid, kernel) = additive_alignment_instance(6, 40);
    println!(
        "additive instance aligned: {}",
        alignment_principle_check(&image, &monoid, &kernel)?
    );
    let (image, monoid, kernel) = divisor_alignment_instance(4, 2, 100)?;
    println!(
        "divisor instance mod 4 aligned: {}",
        alignment_principle_check(&image, &monoid, &kernel)?
    );
    Ok(())
}
