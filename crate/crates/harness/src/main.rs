fn main() {
    std::process::exit(tlr_harness::cli::run(std::env::args_os()));
}
