fn main() {
    std::process::exit(qslt::cli::run(std::env::args_os()));
}
