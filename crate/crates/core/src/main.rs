fn main() {
    std::process::exit(uqsu3::cli::run(std::env::args_os()));
}
