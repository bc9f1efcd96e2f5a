fn main() {
    std::process::exit(holoattr::cli::main_with_args(std::env::args_os()));
}
