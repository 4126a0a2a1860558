fn main() {
    std::process::exit(layerdtn::cli::main_with_args(std::env::args_os()));
}
