fn main() {
    std::process::exit(trigroup::cli::run(std::env::args_os()));
}
