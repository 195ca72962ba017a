fn main() {
    std::process::exit(gsruin_cli::run(std::env::args_os()));
}
