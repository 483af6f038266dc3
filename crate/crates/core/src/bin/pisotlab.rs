fn main() {
    std::process::exit(pisotlab::cli::main_with(std::env::args_os()));
}
