fn main() {
    std::process::exit(cyclounits_cli::run(std::env::args_os()));
}
