fn main() {
    std::process::exit(hermite_count::cli::main_with_std());
}
