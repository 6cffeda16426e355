fn main() {
    env_logger::init();
    std::process::exit(spherical_clifford::cli::run_from_args(std::env::args_os()));
}
