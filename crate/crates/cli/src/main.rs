fn main() {
    std::process::exit(direp::run(std::env::args_os()));
}
