fn main() {
    std::process::exit(fermilab::cli::main_with(std::env::args_os()));
}
