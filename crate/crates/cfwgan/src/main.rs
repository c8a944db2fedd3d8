fn main() {
    std::process::exit(cfwgan::cli::run(std::env::args_os()));
}
