fn main() {
    std::process::exit(charter_cli::run(std::env::args_os()));
}
