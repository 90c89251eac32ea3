fn main() {
    std::process::exit(agc_signal::cli::run(std::env::args_os()));
}
