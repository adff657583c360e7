fn main() {
    std::process::exit(qmono::run(std::env::args_os()));
}
