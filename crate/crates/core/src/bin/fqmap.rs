fn main() {
    std::process::exit(fqmap::cli::run());
}
