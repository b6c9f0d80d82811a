fn main() {
    std::process::exit(diams::cli::run(std::env::args_os()));
}
