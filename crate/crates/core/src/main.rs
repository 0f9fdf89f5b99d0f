fn main() {
    std::process::exit(bm2d::cli::run(std::env::args_os()));
}
