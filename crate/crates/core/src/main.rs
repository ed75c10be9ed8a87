fn main() {
    std::process::exit(tsconsensus::cli::run(std::env::args_os()));
}
