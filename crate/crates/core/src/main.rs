fn main() {
    std::process::exit(torus_control::cli::main_with_args(std::env::args_os()));
}
