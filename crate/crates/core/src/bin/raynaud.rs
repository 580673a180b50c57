fn main() {
    std::process::exit(raynaud::cli::run(std::env::args_os().collect()));
}
