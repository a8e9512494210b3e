fn main() {
    std::process::exit(abext::run(std::env::args_os()));
}
