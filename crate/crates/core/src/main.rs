fn main() {
    std::process::exit(smallgens::cli::main_from_args(std::env::args_os()));
}
