fn main() {
    std::process::exit(asrbench::cli::main_with_args(std::env::args_os()));
}
