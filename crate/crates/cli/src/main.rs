fn main() {
    std::process::exit(selfchain_cli::main_with_args(std::env::args_os()));
}
