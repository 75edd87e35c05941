fn main() {
    std::process::exit(qpoch::cli_app::main_with_args(std::env::args_os()));
}
