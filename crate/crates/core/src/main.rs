fn main() {
    std::process::exit(riskfront::cli::main_with_args(std::env::args_os()));
}
