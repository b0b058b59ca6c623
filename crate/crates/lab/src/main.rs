fn main() {
    std::process::exit(wavelab::cli::run_cli(std::env::args_os()));
}
