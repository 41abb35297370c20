fn main() {
    std::process::exit(rcm_perc::cli::run_cli(std::env::args_os()));
}
