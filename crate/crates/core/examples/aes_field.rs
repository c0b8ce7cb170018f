//! GF(2^8) with the AES modulus, and the product game played over it.

use pcg::finite_field::FieldSpec;
use pcg::{GameSpec, Position};

fn main() -> pcg::Result<()> {
    let field = FieldSpec::aes();
    let a = field.s_map(0x53)?;
    let inv = field.finv(&a)?;
    println!("{field}");
    println!("s(0x53) = {}", field.describe(&a));
    println!(
        "finv(0x53) = {:#04X} = {}",
        field.c_map(&inv)?,
        field.describe(&inv)
    );
    println!("0x53 * 0xCA = {:#04x}", field.mul_labels(0x53, 0xCA)?);
    let fermat =
        (1..256).all(|h| field.fpow(&field.s_map(h).unwrap(), 255).unwrap() == field.one());
    println!("a^255 = 1 for every nonzero a: {fermat}");

    let spec = GameSpec::Field(field);
    let pos = Position::new(vec![255, 0x53, 7]);
    let mv = spec.repair_move(&pos)?;
    let next = spec.apply_move(&pos, mv)?;
    println!(
        "{pos}: region {}, repair {mv} -> {next}, losing {}",
        spec.region(&pos)?,
        spec.is_losing_predicate(&next)?
    );
    println!(
        "normal form of (2,3,4): {}",
        spec.normalize(&Position::new(vec![2, 3, 4]))?
    );
    Ok(())
}
