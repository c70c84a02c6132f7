fn main() {
    std::process::exit(eqlearn::harness::cli::main_with(std::env::args_os()));
}
