//! The chain, field and numeric games side by side, every cell computed.

use pcg::analysis::comparison_table;
use pcg::chain_rsa::ChainSpec;
use pcg::finite_field::FieldSpec;

fn main() -> pcg::Result<()> {
    let table = comparison_table(&ChainSpec::new(15, 2)?, &FieldSpec::aes(), 6)?;
    print!("{}", table.to_markdown());
    Ok(())
}
