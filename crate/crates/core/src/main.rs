fn main() {
    std::process::exit(primseq::cli::run(std::env::args_os()));
}
