fn main() {
    std::process::exit(pvn::cli::main_with_args(std::env::args_os()));
}
