//! The play loop driven by a canned human.

use std::io::Cursor;

use pcg::cli::play;
use pcg::{GameSpec, Position};

fn main() -> pcg::Result<()> {
    let spec = GameSpec::mum(4)?;
    // the first reply 1 1 keeps the residue of 5 and is refused
    let mut human = Cursor::new(b"1 1\n1 3\n2 1\n".to_vec());
    let mut screen = Vec::new();
    let transcript = play(
        &spec,
        &Position::new(vec![5, 5]),
        true,
        &mut human,
        &mut screen,
    )?;
    print!("{}", String::from_utf8_lossy(&screen));
    println!(
        "\nwinner: {:?} after {} turns",
        transcript.winner,
        transcript.turns.len()
    );
    Ok(())
}
