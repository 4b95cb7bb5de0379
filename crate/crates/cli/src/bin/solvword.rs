fn main() {
    std::process::exit(solvword::run(std::env::args_os()));
}
