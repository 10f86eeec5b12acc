fn main() {
    std::process::exit(palintoep::cli::run(std::env::args_os()));
}
