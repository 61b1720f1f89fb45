fn main() {
    std::process::exit(unitrace_cli::main_with_args(std::env::args_os()));
}
