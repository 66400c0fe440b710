fn main() {
    std::process::exit(hdx::cli::main_with_args(std::env::args_os()));
}
