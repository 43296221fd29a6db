fn main() {
    std::process::exit(beew_cli::run(std::env::args_os()));
}
