fn main() {
    std::process::exit(lexnet_cli::run(std::env::args_os()));
}
