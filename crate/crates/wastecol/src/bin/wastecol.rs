fn main() {
    std::process::exit(wastecol::cli::main_with_args(std::env::args_os()));
}
