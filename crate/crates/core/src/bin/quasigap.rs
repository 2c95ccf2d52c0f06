fn main() {
    std::process::exit(quasigap::cli::run(std::env::args_os()));
}
