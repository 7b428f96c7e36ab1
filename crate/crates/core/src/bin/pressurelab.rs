fn main() {
    std::process::exit(pressurelab::cli::run(std::env::args_os()));
}
