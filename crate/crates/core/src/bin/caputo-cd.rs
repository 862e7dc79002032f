fn main() {
    std::process::exit(caputo_cd::cli::run(std::env::args_os()));
}
