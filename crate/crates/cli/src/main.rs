fn main() {
    std::process::exit(floquet_cli::run(std::env::args_os()));
}
