fn main() {
    std::process::exit(scalefree::cli::run(std::env::args_os()));
}
