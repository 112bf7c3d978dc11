fn main() {
    std::process::exit(cpnorm::cli::main());
}
