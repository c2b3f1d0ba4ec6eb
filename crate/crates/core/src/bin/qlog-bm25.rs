fn main() {
    std::process::exit(qlog_bm25::cli::run(std::env::args_os()));
}
