fn main() {
    std::process::exit(skinlab_cli::run_from(std::env::args_os()));
}
