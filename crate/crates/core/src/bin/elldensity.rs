fn main() {
    std::process::exit(elldensity::cli::run(std::env::args_os()));
}
