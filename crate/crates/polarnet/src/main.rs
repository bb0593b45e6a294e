fn main() {
    std::process::exit(polarnet::cli::run(std::env::args_os()));
}
