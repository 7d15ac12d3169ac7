fn main() {
    std::process::exit(twistfr::cli::run(std::env::args_os()));
}
