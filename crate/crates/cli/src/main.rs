fn main() {
    std::process::exit(confinv_cli::run(std::env::args_os()));
}
