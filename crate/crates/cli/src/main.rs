fn main() {
    std::process::exit(recur_cli::main_with(std::env::args_os()));
}
