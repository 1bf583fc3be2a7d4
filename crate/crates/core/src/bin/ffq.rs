fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("trace")).init();
    std::process::exit(ffq::cli::run(std::env::args_os()));
}
