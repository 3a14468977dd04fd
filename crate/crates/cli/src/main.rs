fn main() {
    std::process::exit(trigspline_cli::run(std::env::args_os()));
}
