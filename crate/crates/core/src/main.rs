fn main() {
    std::process::exit(theta_doubler::cli::run(std::env::args_os()));
}
