fn main() {
    std::process::exit(abelforge::cli::run(std::env::args_os()));
}
