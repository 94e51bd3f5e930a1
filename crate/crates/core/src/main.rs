fn main() {
    std::process::exit(acstark::cli::main_with_args(std::env::args_os()));
}
