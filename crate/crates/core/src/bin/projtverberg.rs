fn main() {
    std::process::exit(projtverberg::cli::main_with_args(std::env::args_os()));
}
