fn main() {
    std::process::exit(spinring::cli::main());
}
