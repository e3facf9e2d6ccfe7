fn main() {
    std::process::exit(masterloop::cli::main_with_args(std::env::args_os()));
}
