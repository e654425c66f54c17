fn main() {
    std::process::exit(mqra::cli::run(std::env::args()));
}
