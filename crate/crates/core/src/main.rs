fn main() {
    std::process::exit(decayclock::cli::run(std::env::args_os()));
}
