fn main() {
    std::process::exit(tksub_cli::run(std::env::args_os()));
}
