fn main() {
    std::process::exit(weil_cli::run(std::env::args_os()));
}
