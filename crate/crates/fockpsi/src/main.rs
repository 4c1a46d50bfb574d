fn main() {
    std::process::exit(fockpsi::cli::run(std::env::args_os()));
}
