//! Every verification suite at its default box.

fn main() -> pcg::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    for report in pcg::verify::all_suites(seed)? {
        println!("{report}\n");
    }
    Ok(())
}
