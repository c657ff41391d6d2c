fn main() {
    std::process::exit(lcacohom::cli::run());
}
