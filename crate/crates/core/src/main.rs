fn main() {
    std::process::exit(feec::cli::main_exit_code());
}
