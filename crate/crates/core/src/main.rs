fn main() {
    std::process::exit(liecohom::cli::run(std::env::args_os()));
}
