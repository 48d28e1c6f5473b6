fn main() {
    std::process::exit(homology_lab::cli::run(std::env::args_os()));
}
