fn main() {
    std::process::exit(d2lab::cli::run(std::env::args_os()).code);
}
