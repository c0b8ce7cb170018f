fn main() {
    std::process::exit(pcg::cli::run(std::env::args().collect()));
}
