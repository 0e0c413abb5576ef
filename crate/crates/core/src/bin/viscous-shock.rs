fn main() {
    std::process::exit(viscous_shock::cli::main_with_args(std::env::args_os()));
}
