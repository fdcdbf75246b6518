fn main() {
    std::process::exit(airygate::cli::run());
}
