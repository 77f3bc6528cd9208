fn main() {
    std::process::exit(fermat_weber::cli::main_with_env());
}
