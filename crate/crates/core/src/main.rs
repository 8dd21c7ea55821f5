fn main() {
    std::process::exit(gell::cli::main_with_args(std::env::args_os()));
}
