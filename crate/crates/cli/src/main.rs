fn main() {
    std::process::exit(secsel::app::run(std::env::args_os()));
}
