//! Repair, blocking and normalisation in MuM(4), and where the invariant
//! stops deciding the outcome in MuM(5).

use pcg::{GameSpec, Position, Solver};

fn main() -> pcg::Result<()> {
    let spec = GameSpec::mum(4)?;
    let pos = Position::new(vec![5, 3]);
    let mv = spec.repair_move(&pos)?;
    let next = spec.apply_move(&pos, mv)?;
    println!(
        "{spec}: {pos} is {}, repair {mv} -> {next}",
        spec.outcome(&pos)?
    );
    println!("options of {next}:");
    for m in spec.legal_moves(&next)? {
        let after = spec.apply_move(&next, m)?;
        println!(
            "  {m} -> {after} losing={}",
            spec.is_losing_predicate(&after)?
        );
    }

    let deep = Position::new(vec![3, 3, 3]);
    let single = spec.normalize(&deep)?;
    let fix = spec.repair_move(&single)?;
    println!("normalise {deep} -> {single}, then {fix}");

    // Threshold positions whose fate is decided inside the Indeterminacy Region
    let five = GameSpec::mum(5)?;
    let mut solver = Solver::new(five.clone());
    for heaps in [vec![7u64, 3], vec![6, 1], vec![2, 2]] {
        let p = Position::new(heaps);
        println!(
            "{five}: {p} region {}, classifier {}, game tree {}",
            five.region(&p)?,
            solver.outcome(&p)?,
            solver.outcome_bruteforce(&p)?
        );
    }
    Ok(())
}
