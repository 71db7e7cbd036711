fn main() {
    std::process::exit(kreingraph::cli::main_with_env());
}
