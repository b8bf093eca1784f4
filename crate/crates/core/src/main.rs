fn main() {
    std::process::exit(darksector::cli::run_from_args(std::env::args_os()));
}
