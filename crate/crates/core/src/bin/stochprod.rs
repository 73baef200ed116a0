fn main() {
    std::process::exit(stochprod::cli::main_with_args(std::env::args_os()));
}
