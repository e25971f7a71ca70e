fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("MAGLAB_LOG", "warn")).init();
    std::process::exit(maglab_cli::run_cli(std::env::args_os()));
}
