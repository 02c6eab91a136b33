fn main() {
    std::process::exit(conjulab::cli::run(std::env::args_os()));
}
