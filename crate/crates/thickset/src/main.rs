fn main() {
    std::process::exit(thickset::cli::run(std::env::args_os()));
}
