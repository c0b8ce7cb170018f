//! The RSA exponent chain collapses to a product game mod ord_N(g).

use pcg::chain_rsa::{
    chain_to_pcg, compression_check, crt_losing_check, evaluate_chain, flatten_exponent, ChainSpec,
};

fn main() -> pcg::Result<()> {
    let spec = ChainSpec::new(15, 2)?;
    println!("N = 15, g = 2, k = ord_15(2) = {}", spec.order());

    for heaps in [[1u64, 1], [3, 3], [5, 1], [2, 3]] {
        let e = evaluate_chain(&spec, &heaps)?;
        let flat = flatten_exponent(&heaps, spec.order());
        println!(
            "{heaps:?}: E = {e}, H = {}, losing = {}",
            flat.exponent,
            e == spec.generator()
        );
    }

    let report = compression_check(&spec, 8, 3)?;
    println!(
        "[1,8]^3: {} positions, {} losing, {} counterexamples",
        report.total,
        report.losing_count,
        report.counterexamples.len()
    );
    println!("compressed game: {}", chain_to_pcg(&spec)?);

    // k = 12 splits into 4 and 3
    let twelve = ChainSpec::new(13, 2)?;
    for h in [25u64, 5, 7] {
        let v = crt_losing_check(&twelve, &[h])?;
        println!(
            "H = {h} mod 12 over {:?}: {:?} -> {}",
            v.components, v.per_component, v.overall
        );
    }
    Ok(())
}
