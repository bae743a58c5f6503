fn main() {
    env_logger::init();
    std::process::exit(epival::cli::run(std::env::args_os()));
}
