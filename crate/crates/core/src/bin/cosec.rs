fn main() {
    std::process::exit(cosec::cli::run_env())
}
