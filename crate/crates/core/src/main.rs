fn main() {
    std::process::exit(idealstat::cli::main_with(std::env::args_os()));
}
