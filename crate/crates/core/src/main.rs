fn main() {
    std::process::exit(hexsearch::cli::main_with_args(std::env::args_os()));
}
